//! Representative vectors for the tail-permutation action and the
//! compression map — the independent oracle validating the constant-block
//! reduction on explicit small `n`.
//!
//! For the subgroup of permutations of `[n]` fixing `[k]` pointwise, the
//! space indexed by the edges of `K_n` splits into three isotypic
//! components with multiplicities `m = (C(k,2)+k+1, k+1, 1)`. One explicit
//! vector per irreducible copy suffices to block-diagonalize any invariant
//! matrix `A` via `U_i^T A U_i`; positive semidefiniteness of `A` is
//! equivalent to that of the three compressed blocks.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::combinatorics::{apply_perm, edges_of, lex_index, Edge, Permutation};
use crate::error::Error;
use crate::hessian::RationalSymMatrix;
use crate::rational::{rat_int, Rational};
use crate::Result;

/// Sparse rational vector indexed by edges; no explicit zeros stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparseVector {
    entries: BTreeMap<Edge, Rational>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The standard basis vector `v_e`.
    pub fn basis(e: Edge) -> Self {
        let mut v = Self::new();
        v.add(e, rat_int(1));
        v
    }

    /// Adds `c` to the coefficient of `e`, dropping the entry if it cancels.
    pub fn add(&mut self, e: Edge, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.entries.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.entries.remove(&e);
        }
    }

    pub fn get(&self, e: Edge) -> Rational {
        self.entries.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (Edge, &Rational)> + '_ {
        self.entries.iter().map(|(&e, c)| (e, c))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_vertex(&self) -> u32 {
        self.entries.keys().map(|e| e.b()).max().unwrap_or(0)
    }
}

/// The three tuples of representative vectors for given `k` and `n >= k+4`.
#[derive(Clone, Debug)]
pub struct RepresentativeSet {
    pub u1: Vec<SparseVector>,
    pub u2: Vec<SparseVector>,
    pub u3: Vec<SparseVector>,
    pub k: u32,
    pub n: u32,
}

impl RepresentativeSet {
    /// Multiplicities `(m1, m2, m3) = (C(k,2)+k+1, k+1, 1)`.
    pub fn multiplicities(&self) -> (usize, usize, usize) {
        (self.u1.len(), self.u2.len(), self.u3.len())
    }
}

/// Representative vectors, in the fixed order:
///
/// * `u_{1,j} = v_{e_j}` for the `C(k,2)` edges within `[k]` (lexicographic),
///   then `u_{1,C(k,2)+j} = sum_{i>k} v_{{j,i}}` for `j in [k]`, then the
///   all-tail sum `sum_{k<i<j<=n} v_{{i,j}}`;
/// * `u_{2,j} = v_{{j,k+1}} - v_{{j,k+2}}` for `j in [k]`, then
///   `sum_{i>=k+3} (v_{{k+1,i}} - v_{{k+2,i}})`;
/// * `u_{3,1} = v_{{k+1,k+2}} - v_{{k+1,k+3}} - v_{{k+2,k+4}} + v_{{k+3,k+4}}`.
pub fn representative_vectors(k: u32, n: u32) -> Result<RepresentativeSet> {
    if n < k + 4 {
        return Err(Error::NTooSmall { n, k });
    }
    let mut u1 = Vec::new();
    for a in 1..=k {
        for b in (a + 1)..=k {
            u1.push(SparseVector::basis(Edge::new(a, b)?));
        }
    }
    for j in 1..=k {
        let mut v = SparseVector::new();
        for i in (k + 1)..=n {
            v.add(Edge::new(j, i)?, rat_int(1));
        }
        u1.push(v);
    }
    let mut tail = SparseVector::new();
    for i in (k + 1)..=n {
        for j in (i + 1)..=n {
            tail.add(Edge::new(i, j)?, rat_int(1));
        }
    }
    u1.push(tail);

    let mut u2 = Vec::new();
    for j in 1..=k {
        let mut v = SparseVector::new();
        v.add(Edge::new(j, k + 1)?, rat_int(1));
        v.add(Edge::new(j, k + 2)?, rat_int(-1));
        u2.push(v);
    }
    let mut last = SparseVector::new();
    for i in (k + 3)..=n {
        last.add(Edge::new(k + 1, i)?, rat_int(1));
        last.add(Edge::new(k + 2, i)?, rat_int(-1));
    }
    u2.push(last);

    let mut u3v = SparseVector::new();
    u3v.add(Edge::new(k + 1, k + 2)?, rat_int(1));
    u3v.add(Edge::new(k + 1, k + 3)?, rat_int(-1));
    u3v.add(Edge::new(k + 2, k + 4)?, rat_int(-1));
    u3v.add(Edge::new(k + 3, k + 4)?, rat_int(1));

    Ok(RepresentativeSet {
        u1,
        u2,
        u3: vec![u3v],
        k,
        n,
    })
}

/// Exact compression `(u_p^T A u_q)_{p,q}` of a matrix indexed by the edges
/// of `K_n` in lexicographic order.
pub fn compress(a: &RationalSymMatrix, u: &[SparseVector], n: u32) -> Result<RationalSymMatrix> {
    let m = edges_of(n).len();
    if a.order() != m {
        return Err(Error::DimensionMismatch(format!(
            "matrix order {} vs C({n},2) = {m}",
            a.order()
        )));
    }
    for v in u {
        if v.max_vertex() > n {
            return Err(Error::DimensionMismatch(format!(
                "vector supported on vertex {} outside [{n}]",
                v.max_vertex()
            )));
        }
    }
    // A u_q first, then dot with u_p.
    let mut images: Vec<Vec<Rational>> = Vec::with_capacity(u.len());
    for v in u {
        let mut img = vec![Rational::zero(); m];
        for (e, c) in v.support() {
            let col = lex_index(e, n)?;
            for (row, img_val) in img.iter_mut().enumerate() {
                *img_val += a.get(row, col) * c;
            }
        }
        images.push(img);
    }
    RationalSymMatrix::from_fn(u.len(), |p, q| {
        let mut sum = Rational::zero();
        for (e, c) in u[p].support() {
            sum += &images[q][lex_index(e, n)?] * c;
        }
        Ok(sum)
    })
}

/// The three compressed matrices computed symbolically from orbit entry
/// values and `n`, following the displayed block structure of the reduction
/// proof. `oracle(e, f)` must return the `(e,f)` entry of the level-`(k+4)`
/// matrix for edges within `[k+4]`.
pub fn block_formulas<F>(oracle: F, k: u32, n: u32) -> Result<[RationalSymMatrix; 3]>
where
    F: Fn(Edge, Edge) -> Result<Rational>,
{
    if n < k + 4 {
        return Err(Error::NTooSmall { n, k });
    }
    let s = rat_int((n - k) as i64);
    let s_m1 = rat_int((n - k - 1) as i64);
    let s_m2 = rat_int((n - k - 2) as i64);
    let binom_s = rat_int(((n - k) as i64 * (n - k - 1) as i64) / 2);
    let binom_s_m2 = rat_int(((n - k - 2) as i64 * (n - k - 3) as i64) / 2);

    let kk = k as usize;
    let inner: Vec<Edge> = edges_of(k);
    let nk = inner.len();
    let dim1 = nk + kk + 1;

    let x = oracle(Edge::new(k + 1, k + 2)?, Edge::new(k + 1, k + 2)?)?;
    let y = oracle(Edge::new(k + 1, k + 2)?, Edge::new(k + 1, k + 3)?)?;
    let z = oracle(Edge::new(k + 1, k + 2)?, Edge::new(k + 3, k + 4)?)?;

    // First block: rows/cols [edges of C([k],2) | j in [k] | tail].
    let mut m1 = RationalSymMatrix::zero(dim1);
    for p in 0..nk {
        for q in p..nk {
            m1.set_sym(p, q, oracle(inner[p], inner[q])?);
        }
        for j in 1..=k {
            let v = oracle(inner[p], Edge::new(j, k + 1)?)?;
            m1.set_sym(p, nk + (j - 1) as usize, &s * v);
        }
        let v = oracle(inner[p], Edge::new(k + 1, k + 2)?)?;
        m1.set_sym(p, dim1 - 1, &binom_s * v);
    }
    for i in 1..=k {
        for j in i..=k {
            let same = oracle(Edge::new(i, k + 1)?, Edge::new(j, k + 1)?)?;
            let cross = oracle(Edge::new(i, k + 1)?, Edge::new(j, k + 2)?)?;
            let c22 = same + &s_m1 * cross;
            m1.set_sym(nk + (i - 1) as usize, nk + (j - 1) as usize, &s * c22);
        }
        let near = oracle(Edge::new(i, k + 1)?, Edge::new(k + 1, k + 2)?)?;
        let far = oracle(Edge::new(i, k + 1)?, Edge::new(k + 2, k + 3)?)?;
        let c23 = rat_int(2) * near + &s_m2 * far;
        m1.set_sym(nk + (i - 1) as usize, dim1 - 1, &binom_s * c23);
    }
    let c33 = &x + rat_int(2) * &s_m2 * &y + &binom_s_m2 * &z;
    m1.set_sym(dim1 - 1, dim1 - 1, &binom_s * c33);

    // Second block: rows/cols [j in [k] | tail].
    let dim2 = kk + 1;
    let mut m2 = RationalSymMatrix::zero(dim2);
    for i in 1..=k {
        for j in i..=k {
            let d11 = oracle(Edge::new(i, k + 1)?, Edge::new(j, k + 1)?)?
                - oracle(Edge::new(i, k + 1)?, Edge::new(j, k + 2)?)?;
            m2.set_sym((i - 1) as usize, (j - 1) as usize, rat_int(2) * d11);
        }
        let d12 = oracle(Edge::new(i, k + 1)?, Edge::new(k + 1, k + 2)?)?
            - oracle(Edge::new(i, k + 1)?, Edge::new(k + 2, k + 3)?)?;
        m2.set_sym((i - 1) as usize, dim2 - 1, rat_int(2) * &s_m2 * d12);
    }
    let d22 = &s_m2 * (&y - &z) + (&x - rat_int(2) * &y + &z);
    m2.set_sym(dim2 - 1, dim2 - 1, rat_int(2) * &s_m2 * d22);

    // Third block: the scalar 4(x - 2y + z).
    let m3 = RationalSymMatrix::from_rows(vec![vec![
        rat_int(4) * (&x - rat_int(2) * &y + &z),
    ]])?;

    Ok([m1, m2, m3])
}

/// Number of orbits of the diagonal tail-permutation action on ordered edge
/// pairs, by the closed formula `3 + 4k + 2k^2 + C(k,2)(C(k,2) + 2k + 2)`.
pub fn orbit_count_formula(k: u32) -> u64 {
    let k = k as u64;
    let ck2 = k * k.saturating_sub(1) / 2;
    3 + 4 * k + 2 * k * k + ck2 * (ck2 + 2 * k + 2)
}

/// The same count by explicit orbit partitioning: each ordered pair is
/// canonicalized to the minimum of its orbit under the closure of the two
/// generators (the transposition of `k+1, k+2` and the full tail cycle).
pub fn orbit_count_bruteforce(k: u32, n: u32) -> Result<u64> {
    if n < k + 4 {
        return Err(Error::NTooSmall { n, k });
    }
    let edges = edges_of(n);
    let m = edges.len();
    if m * m > 1_000_000 {
        return Err(Error::TooLarge(format!(
            "orbit brute force on {m}^2 pairs exceeds the budget"
        )));
    }
    let transposition = Permutation::transposition(n, k + 1, k + 2)?;
    let cycle_label: Vec<u32> = ((k + 1)..=n).collect();
    let cycle = Permutation::cycle(n, &cycle_label)?;
    let generators = [transposition, cycle];

    let mut reps = std::collections::HashSet::new();
    for &e in &edges {
        for &f in &edges {
            let mut orbit = std::collections::BTreeSet::new();
            let mut queue = vec![(e, f)];
            orbit.insert((e, f));
            while let Some((a, b)) = queue.pop() {
                for g in &generators {
                    let next = (apply_perm(g, a)?, apply_perm(g, b)?);
                    if orbit.insert(next) {
                        queue.push(next);
                    }
                }
            }
            reps.insert(orbit.into_iter().next().expect("orbit nonempty"));
        }
    }
    Ok(reps.len() as u64)
}

/// The direct-sum dimension identity behind the representative set:
/// `(C(k,2)+k+1) + (k+1)(n-k-1) + (C(n-k,2)-(n-k)) = C(n,2)`.
pub fn dimension_identity_holds(k: u32, n: u32) -> bool {
    let c = |t: i64| t * (t - 1) / 2;
    let k = k as i64;
    let n = n as i64;
    let total = (c(k) + k + 1) + (k + 1) * (n - k - 1) + (c(n - k) - (n - k));
    total == c(n)
}
