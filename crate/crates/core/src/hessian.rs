//! Hessian coefficient matrices of `f_d` for explicit small `n`, plus the
//! brute-force evaluators used as independent oracles.
//!
//! Writing the Hessian in the monomial basis,
//!
//! ```text
//! H(f_d)(x) = sum_{gamma, deg = d-2} x^gamma * Q_gamma,
//! ```
//!
//! each coefficient matrix `Q_gamma` is indexed by the edges of `K_n` and
//! has entries `(1/gamma!) * bhat(gamma + v_i + v_j)`. The pipeline never
//! materializes these full matrices; they exist here as oracles for property
//! tests, along with the Hadamard factors `M_gamma` and `R_gamma` of the
//! decomposition
//!
//! ```text
//! Q_gamma = M_gamma o ( sum_{e: gamma_e >= 1} Q_{gamma - v_e} + R_gamma ).
//! ```

use num_traits::{One, Signed, Zero};

use crate::coefficients::{b_hat, c_hat, CoeffCache};
use crate::combinatorics::{edges_of, exponent_factorial, lex_index, Edge, ExponentVector};
use crate::error::Error;
use crate::multigraphs::Multigraph;
use crate::rational::{to_f64, Rational};
use crate::Result;

/// Dense symmetric matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalSymMatrix {
    order: usize,
    data: Vec<Rational>,
}

impl RationalSymMatrix {
    /// Builds from full rows, verifying squareness and symmetry.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let order = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} in an order-{order} matrix",
                    row.len()
                )));
            }
        }
        for i in 0..order {
            for j in (i + 1)..order {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(RationalSymMatrix {
            order,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds by evaluating `f` on the upper triangle and mirroring.
    pub fn from_fn<F: FnMut(usize, usize) -> Result<Rational>>(
        order: usize,
        mut f: F,
    ) -> Result<Self> {
        let mut data = vec![Rational::zero(); order * order];
        for i in 0..order {
            for j in i..order {
                let v = f(i, j)?;
                data[i * order + j] = v.clone();
                data[j * order + i] = v;
            }
        }
        Ok(RationalSymMatrix { order, data })
    }

    pub fn zero(order: usize) -> Self {
        RationalSymMatrix {
            order,
            data: vec![Rational::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zero(order);
        for i in 0..order {
            m.data[i * order + i] = Rational::one();
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.order + j]
    }

    /// Sets both `(i,j)` and `(j,i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.order + j] = v.clone();
        self.data[j * self.order + i] = v;
    }

    /// Scales every entry by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        RationalSymMatrix {
            order: self.order,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(RationalSymMatrix {
            order: self.order,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(RationalSymMatrix {
            order: self.order,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch(format!(
                "orders {} and {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    /// Principal submatrix on the given index set (in the given order).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let order = idx.len();
        let mut data = Vec::with_capacity(order * order);
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        RationalSymMatrix { order, data }
    }

    /// Double-precision image, row-major.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| to_f64(self.get(i, j))).collect())
            .collect()
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|x| to_f64(x).abs())
            .fold(0.0, f64::max)
    }

    /// Exact quadratic form `v^T M v`.
    pub fn quadratic_form(&self, v: &[Rational]) -> Result<Rational> {
        if v.len() != self.order {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs order {}",
                v.len(),
                self.order
            )));
        }
        let mut sum = Rational::zero();
        for i in 0..self.order {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.order {
                if v[j].is_zero() {
                    continue;
                }
                sum += self.get(i, j) * &v[i] * &v[j];
            }
        }
        Ok(sum)
    }
}

/// A point of the standard simplex over the edges of `K_n`, exact rational
/// coordinates in lexicographic edge order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexPoint {
    n: u32,
    coords: Vec<Rational>,
}

impl SimplexPoint {
    pub fn new(n: u32, coords: Vec<Rational>) -> Result<Self> {
        let m = edges_of(n).len();
        if coords.len() != m {
            return Err(Error::InvalidSimplexPoint(format!(
                "expected {m} coordinates for n={n}, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidSimplexPoint(
                "negative coordinate".to_string(),
            ));
        }
        let total: Rational = coords.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSimplexPoint(format!(
                "coordinates sum to {total}, expected 1"
            )));
        }
        Ok(SimplexPoint { n, coords })
    }

    /// The uniform probability vector.
    pub fn uniform(n: u32) -> Self {
        let m = edges_of(n).len();
        SimplexPoint {
            n,
            coords: vec![Rational::new(1.into(), (m as i64).into()); m],
        }
    }

    /// The simplex vertex concentrated on one edge.
    pub fn vertex(n: u32, e: Edge) -> Result<Self> {
        let idx = lex_index(e, n)?;
        let m = edges_of(n).len();
        let mut coords = vec![Rational::zero(); m];
        coords[idx] = Rational::one();
        SimplexPoint::new(n, coords)
    }

    /// Normalizes positive integer weights into an interior simplex point.
    pub fn from_weights(n: u32, weights: &[u64]) -> Result<Self> {
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidSimplexPoint("zero weight".to_string()));
        }
        let total: u64 = weights.iter().sum();
        let coords = weights
            .iter()
            .map(|&w| Rational::new((w as i64).into(), (total as i64).into()))
            .collect();
        SimplexPoint::new(n, coords)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|c| c.is_positive())
    }
}

/// Brute-force evaluation of `f_d` straight from the defining tuple sum.
/// Guarded to `C(n,2)^d <= 10^7`.
pub fn fd_eval(n: u32, d: u32, x: &SimplexPoint) -> Result<Rational> {
    if x.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "point over n={} used with n={n}",
            x.n()
        )));
    }
    let edges = edges_of(n);
    let m = edges.len();
    if (m as f64).powi(d as i32) > 1e7 {
        return Err(Error::TooLarge(format!(
            "C({n},2)^{d} exceeds the brute-force budget"
        )));
    }
    let mut sum = Rational::zero();
    tuple_sum(&edges, x.coords(), d, 0, &Rational::one(), &mut sum);
    Ok(sum)
}

fn tuple_sum(
    edges: &[Edge],
    coords: &[Rational],
    left: u32,
    union: u64,
    product: &Rational,
    sum: &mut Rational,
) {
    if left == 0 {
        *sum += product;
        return;
    }
    for (idx, e) in edges.iter().enumerate() {
        if coords[idx].is_zero() {
            continue;
        }
        let u = union | (1u64 << (e.a() - 1)) | (1u64 << (e.b() - 1));
        let p = product * &coords[idx] / Rational::from_integer((u.count_ones() as i64).into());
        tuple_sum(edges, coords, left - 1, u, &p, sum);
    }
}

/// Double-precision variant of [`fd_eval`] for arbitrary (not necessarily
/// simplex) coordinate vectors; used by the finite-difference check.
pub fn fd_eval_f64(n: u32, d: u32, coords: &[f64]) -> Result<f64> {
    let edges = edges_of(n);
    if coords.len() != edges.len() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} coordinates, got {}",
            edges.len(),
            coords.len()
        )));
    }
    if (edges.len() as f64).powi(d as i32) > 1e7 {
        return Err(Error::TooLarge(format!(
            "C({n},2)^{d} exceeds the brute-force budget"
        )));
    }
    fn rec(edges: &[Edge], coords: &[f64], left: u32, union: u64, product: f64, sum: &mut f64) {
        if left == 0 {
            *sum += product;
            return;
        }
        for (idx, e) in edges.iter().enumerate() {
            let u = union | (1u64 << (e.a() - 1)) | (1u64 << (e.b() - 1));
            rec(
                edges,
                coords,
                left - 1,
                u,
                product * coords[idx] / u.count_ones() as f64,
                sum,
            );
        }
    }
    let mut sum = 0.0;
    rec(&edges, coords, d, 0, 1.0, &mut sum);
    Ok(sum)
}

fn check_edge_within(e: Edge, n: u32) -> Result<()> {
    if e.b() > n {
        return Err(Error::EndpointExceedsN { endpoint: e.b(), n });
    }
    Ok(())
}

/// Entry of the coefficient matrix for an arbitrary exponent vector `gamma`
/// supported within `[n]`: `bhat(gamma + v_ei + v_ej)` when scaled, divided
/// by `gamma!` otherwise. `gamma` may be the zero vector (degree-2 Hessian).
pub fn qgamma_entry_ev(
    gamma: &ExponentVector,
    n: u32,
    ei: Edge,
    ej: Edge,
    scaled: bool,
    cache: &CoeffCache,
) -> Result<Rational> {
    if gamma.max_vertex() > n {
        return Err(Error::EndpointExceedsN {
            endpoint: gamma.max_vertex(),
            n,
        });
    }
    check_edge_within(ei, n)?;
    check_edge_within(ej, n)?;
    let alpha = gamma.plus(ei).plus(ej);
    let value = b_hat(&alpha, cache)?;
    if scaled {
        Ok(value)
    } else {
        Ok(value / Rational::from_integer(exponent_factorial(gamma)))
    }
}

/// One entry of the Hessian coefficient matrix for the multigraph `g` at
/// level `n`. The pipeline default is the scaled variant `gamma! * Q`, which
/// cancels the `1/gamma!` of the matrix definition.
pub fn qgamma_entry(
    g: &Multigraph,
    n: u32,
    ei: Edge,
    ej: Edge,
    scaled: bool,
    cache: &CoeffCache,
) -> Result<Rational> {
    if g.k() > n {
        return Err(Error::NTooSmall { n, k: g.k() });
    }
    qgamma_entry_ev(&g.exponent_vector(), n, ei, ej, scaled, cache)
}

const MAX_DENSE_N: u32 = 12;

fn check_dense_n(n: u32) -> Result<()> {
    if n > MAX_DENSE_N {
        return Err(Error::TooLarge(format!(
            "dense coefficient matrix assembly limited to n <= {MAX_DENSE_N}, got {n}"
        )));
    }
    Ok(())
}

/// The full coefficient matrix for an exponent vector, rows and columns in
/// lexicographic edge order. Test-oracle use only, guarded to `n <= 12`.
pub fn qgamma_matrix_ev(
    gamma: &ExponentVector,
    n: u32,
    scaled: bool,
    cache: &CoeffCache,
) -> Result<RationalSymMatrix> {
    check_dense_n(n)?;
    let edges = edges_of(n);
    RationalSymMatrix::from_fn(edges.len(), |i, j| {
        qgamma_entry_ev(gamma, n, edges[i], edges[j], scaled, cache)
    })
}

/// The full coefficient matrix `Q_gamma` (or `gamma! * Q_gamma` when scaled)
/// of a multigraph.
pub fn qgamma_matrix(
    g: &Multigraph,
    n: u32,
    scaled: bool,
    cache: &CoeffCache,
) -> Result<RationalSymMatrix> {
    if g.k() > n {
        return Err(Error::NTooSmall { n, k: g.k() });
    }
    qgamma_matrix_ev(&g.exponent_vector(), n, scaled, cache)
}

/// The Hadamard factors `(M_gamma, R_gamma)` of the decomposition identity.
/// Both sides of that identity use the unscaled `Q`; `R_gamma` carries the
/// `1/gamma!`.
pub fn mgamma_rgamma(
    g: &Multigraph,
    n: u32,
    cache: &CoeffCache,
) -> Result<(RationalSymMatrix, RationalSymMatrix)> {
    check_dense_n(n)?;
    if g.k() > n {
        return Err(Error::NTooSmall { n, k: g.k() });
    }
    let edges = edges_of(n);
    let gamma = g.exponent_vector();
    let gamma_fact = Rational::from_integer(g.gamma_factorial());
    let m = RationalSymMatrix::from_fn(edges.len(), |i, j| {
        c_hat(&gamma.plus(edges[i]).plus(edges[j]))
    })?;
    let r = RationalSymMatrix::from_fn(edges.len(), |i, j| {
        let bi = b_hat(&gamma.plus(edges[i]), cache)?;
        let bj = b_hat(&gamma.plus(edges[j]), cache)?;
        Ok((bi + bj) / &gamma_fact)
    })?;
    Ok((m, r))
}

/// All exponent vectors of the given degree over the given edge set.
pub fn edge_multisets(edges: &[Edge], degree: u32) -> Vec<ExponentVector> {
    fn rec(
        edges: &[Edge],
        degree: u32,
        start: usize,
        cur: &mut ExponentVector,
        out: &mut Vec<ExponentVector>,
    ) {
        if degree == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..edges.len() {
            cur.add_edge(edges[i], 1);
            rec(edges, degree - 1, i, cur, out);
            *cur = cur.minus(edges[i]).expect("edge was just added");
        }
    }
    let mut out = Vec::new();
    rec(edges, degree, 0, &mut ExponentVector::new(), &mut out);
    out
}

/// The analytic Hessian `sum_gamma x^gamma Q_gamma` of `f_d` at `x`, exact.
pub fn hessian_matrix(
    n: u32,
    d: u32,
    x: &SimplexPoint,
    cache: &CoeffCache,
) -> Result<RationalSymMatrix> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { got: d, min: 2 });
    }
    check_dense_n(n)?;
    let edges = edges_of(n);
    let mut h = RationalSymMatrix::zero(edges.len());
    for gamma in edge_multisets(&edges, d - 2) {
        let mut monomial = Rational::one();
        for (e, m) in gamma.support() {
            let idx = lex_index(e, n)?;
            for _ in 0..m {
                monomial *= &x.coords()[idx];
            }
        }
        if monomial.is_zero() {
            continue;
        }
        let gamma_fact = Rational::from_integer(exponent_factorial(&gamma));
        for i in 0..edges.len() {
            for j in i..edges.len() {
                let alpha = gamma.plus(edges[i]).plus(edges[j]);
                let q = b_hat(&alpha, cache)? / &gamma_fact;
                let add = &monomial * q;
                let cur = h.get(i, j).clone();
                h.set_sym(i, j, cur + add);
            }
        }
    }
    Ok(h)
}

/// Maximum absolute deviation between the central finite-difference Hessian
/// of `f_d` and the analytic coefficient-matrix sum, both in floating point.
pub fn hessian_fd_check(
    n: u32,
    d: u32,
    x: &SimplexPoint,
    h: f64,
    cache: &CoeffCache,
) -> Result<f64> {
    if !x.is_interior() {
        return Err(Error::InvalidSimplexPoint(
            "finite-difference check needs a strictly positive point".to_string(),
        ));
    }
    let analytic = hessian_matrix(n, d, x, cache)?;
    let base: Vec<f64> = x.coords().iter().map(to_f64).collect();
    let m = base.len();
    let f0 = fd_eval_f64(n, d, &base)?;
    let mut max_dev: f64 = 0.0;
    for i in 0..m {
        for j in i..m {
            let fd = if i == j {
                let mut up = base.clone();
                up[i] += h;
                let mut dn = base.clone();
                dn[i] -= h;
                (fd_eval_f64(n, d, &up)? - 2.0 * f0 + fd_eval_f64(n, d, &dn)?) / (h * h)
            } else {
                let mut pp = base.clone();
                pp[i] += h;
                pp[j] += h;
                let mut pm = base.clone();
                pm[i] += h;
                pm[j] -= h;
                let mut mp = base.clone();
                mp[i] -= h;
                mp[j] += h;
                let mut mm = base.clone();
                mm[i] -= h;
                mm[j] -= h;
                (fd_eval_f64(n, d, &pp)? - fd_eval_f64(n, d, &pm)? - fd_eval_f64(n, d, &mp)?
                    + fd_eval_f64(n, d, &mm)?)
                    / (4.0 * h * h)
            };
            let exact = to_f64(analytic.get(i, j));
            max_dev = max_dev.max((fd - exact).abs());
        }
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn single_edge() -> Multigraph {
        "1-2".parse().unwrap()
    }

    #[test]
    fn symmetric_matrix_construction_checks() {
        let ok = RationalSymMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(3, 1)],
        ]);
        assert!(ok.is_ok());
        let bad = RationalSymMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(5, 1), rat(3, 1)],
        ]);
        assert!(matches!(bad, Err(Error::NotSymmetric(0, 1))));
    }

    #[test]
    fn simplex_point_validation() {
        assert!(SimplexPoint::new(3, vec![rat(1, 3); 3]).is_ok());
        assert!(SimplexPoint::new(3, vec![rat(1, 2); 3]).is_err());
        assert!(SimplexPoint::new(3, vec![rat(1, 2), rat(-1, 2), rat(1, 1)]).is_err());
        assert!(SimplexPoint::uniform(4).is_interior());
        assert!(!SimplexPoint::vertex(3, e(1, 2)).unwrap().is_interior());
    }

    #[test]
    fn fd_eval_examples() {
        // Single edge: the only tuple is (e,...,e), each factor 1/2.
        let x = SimplexPoint::uniform(2);
        assert_eq!(fd_eval(2, 2, &x).unwrap(), rat(1, 4));
        // At a simplex vertex only the constant tuple survives: (1/2)^d.
        for (n, d) in [(3u32, 2u32), (4, 3), (4, 4)] {
            let x = SimplexPoint::vertex(n, e(1, 2)).unwrap();
            assert_eq!(fd_eval(n, d, &x).unwrap(), rat(1, 2i64.pow(d)));
        }
    }

    #[test]
    fn fd_eval_matches_monomial_expansion() {
        // f_d(x) = sum_alpha b_alpha x^alpha with b from the brute-force sum.
        use crate::coefficients::b_alpha_bruteforce;
        let n = 3;
        let d = 2;
        let x = SimplexPoint::uniform(n);
        let direct = fd_eval(n, d, &x).unwrap();
        let edges = edges_of(n);
        let mut total = Rational::zero();
        for alpha in edge_multisets(&edges, d) {
            let b = b_alpha_bruteforce(&alpha).unwrap();
            let mut mono = Rational::one();
            for (edge, m) in alpha.support() {
                let idx = lex_index(edge, n).unwrap();
                for _ in 0..m {
                    mono *= &x.coords()[idx];
                }
            }
            total += b * mono;
        }
        assert_eq!(direct, total);
    }

    #[test]
    fn qgamma_entries_match_published_d3_values() {
        let cache = CoeffCache::new();
        let g = single_edge();
        assert_eq!(
            qgamma_entry(&g, 6, e(1, 2), e(1, 2), true, &cache).unwrap(),
            rat(3, 4)
        );
        assert_eq!(
            qgamma_entry(&g, 6, e(1, 3), e(1, 4), true, &cache).unwrap(),
            rat(1, 4)
        );
        assert_eq!(
            qgamma_entry(&g, 6, e(1, 3), e(1, 3), true, &cache).unwrap(),
            rat(7, 18)
        );
        assert!(qgamma_entry(&g, 4, e(1, 5), e(1, 2), true, &cache).is_err());
    }

    /// For a single-edge multigraph the entry has the closed form
    /// `(1/|e1 u i u j|) (1/|e1 u i| + 1/|e1 u j| + 1/|i u j|)`.
    #[test]
    fn qgamma_matches_closed_form_for_one_edge() {
        let cache = CoeffCache::new();
        let g = single_edge();
        let e1 = e(1, 2);
        for n in [4u32, 5, 6] {
            for &ei in &edges_of(n) {
                for &ej in &edges_of(n) {
                    let got = qgamma_entry(&g, n, ei, ej, true, &cache).unwrap();
                    let u3 = crate::combinatorics::union_size(&[e1, ei, ej]).unwrap() as i64;
                    let u_i = crate::combinatorics::union_size(&[e1, ei]).unwrap() as i64;
                    let u_j = crate::combinatorics::union_size(&[e1, ej]).unwrap() as i64;
                    let u_ij = crate::combinatorics::union_size(&[ei, ej]).unwrap() as i64;
                    let expect = rat(1, u3) * (rat(1, u_i) + rat(1, u_j) + rat(1, u_ij));
                    assert_eq!(got, expect, "entry ({ei}, {ej})");
                }
            }
        }
    }

    #[test]
    fn qgamma_matrix_consistency_and_restriction() {
        let cache = CoeffCache::new();
        let g = single_edge();
        let m4 = qgamma_matrix(&g, 4, true, &cache).unwrap();
        assert_eq!(m4.order(), 6);
        assert_eq!(*m4.get(0, 0), rat(3, 4));
        // Restriction: the n=4 matrix is the principal submatrix of n=5 on
        // the edges within [4].
        let m5 = qgamma_matrix(&g, 5, true, &cache).unwrap();
        let idx: Vec<usize> = edges_of(5)
            .iter()
            .enumerate()
            .filter(|(_, edge)| edge.b() <= 4)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(m5.principal_submatrix(&idx), m4);
        assert!(qgamma_matrix(&g, 13, true, &cache).is_err());
    }

    #[test]
    fn scaled_and_unscaled_differ_by_gamma_factorial() {
        let cache = CoeffCache::new();
        let g: Multigraph = "1-2,1-2".parse().unwrap();
        let scaled = qgamma_entry(&g, 6, e(1, 3), e(2, 4), true, &cache).unwrap();
        let unscaled = qgamma_entry(&g, 6, e(1, 3), e(2, 4), false, &cache).unwrap();
        assert_eq!(scaled, unscaled * rat(2, 1));
    }

    #[test]
    fn mgamma_rgamma_examples() {
        let cache = CoeffCache::new();
        let g = single_edge();
        let (m, r) = mgamma_rgamma(&g, 4, &cache).unwrap();
        let edges = edges_of(4);
        let i13 = edges.iter().position(|&x| x == e(1, 3)).unwrap();
        let i24 = edges.iter().position(|&x| x == e(2, 4)).unwrap();
        assert_eq!(*m.get(i13, i24), rat(1, 4));
        assert_eq!(*r.get(0, 0), rat(1, 1));
    }

    /// Hadamard identity on a few small cases; the full sweep over all
    /// multigraphs with up to 3 edges and n <= 7 runs in the acceptance
    /// suite.
    #[test]
    fn hadamard_identity_small() {
        let cache = CoeffCache::new();
        for (gs, n) in [("1-2", 4u32), ("1-2,1-3", 5), ("1-2,1-2", 5)] {
            let g: Multigraph = gs.parse().unwrap();
            let gamma = g.exponent_vector();
            let q = qgamma_matrix(&g, n, false, &cache).unwrap();
            let (m, r) = mgamma_rgamma(&g, n, &cache).unwrap();
            let mut inner = r;
            for (edge, _) in gamma.support() {
                let sub = gamma.minus(edge).unwrap();
                let qsub = qgamma_matrix_ev(&sub, n, false, &cache).unwrap();
                inner = inner.add(&qsub).unwrap();
            }
            let rhs = m.hadamard(&inner).unwrap();
            assert_eq!(q, rhs, "hadamard identity for {gs}, n={n}");
        }
    }

    #[test]
    fn hessian_fd_agreement() {
        let cache = CoeffCache::new();
        let x = SimplexPoint::uniform(3);
        let dev = hessian_fd_check(3, 3, &x, 1e-4, &cache).unwrap();
        assert!(dev <= 1e-6, "deviation {dev}");
        // Degree 2: the Hessian is constant, deviation is only FD noise.
        let dev2 = hessian_fd_check(3, 2, &x, 1e-4, &cache).unwrap();
        assert!(dev2 <= 1e-6, "deviation {dev2}");
        let vertex = SimplexPoint::vertex(3, e(1, 2)).unwrap();
        assert!(hessian_fd_check(3, 3, &vertex, 1e-4, &cache).is_err());
    }
}
