//! The constant, `n`-independent objects certifying an entire matrix family
//! at once: two block matrices and one scalar per multigraph.
//!
//! For a multigraph on `[k]`, the family of coefficient matrices indexed by
//! `n >= k` is positive semidefinite for every `n` if and only if
//!
//! * the scalar `x - 2y + z` is nonnegative, where `x, y, z` are the three
//!   deep-tail orbit values of the level-`(k+4)` matrix, and
//! * the two constant matrices `B1` (order `C(k,2)+k+1`) and `B2` (order
//!   `k+1`) assembled below are positive semidefinite.
//!
//! Every entry is drawn from the level-`(k+4)` matrix at the exact
//! representative index pairs of the block layout; no orbit-canonicalization
//! layer is interposed, so printed blocks are bit-exact reproducible.

use num_traits::Zero;

use crate::coefficients::CoeffCache;
use crate::combinatorics::{edges_of, Edge};
use crate::error::Error;
use crate::hessian::{qgamma_entry, RationalSymMatrix};
use crate::multigraphs::Multigraph;
use crate::rational::{rat_int, Rational};
use crate::Result;

/// The three deep-tail orbit values of the level-`(k+4)` matrix:
/// `x` at `({k+1,k+2},{k+1,k+2})`, `y` at `({k+1,k+2},{k+1,k+3})`,
/// `z` at `({k+1,k+2},{k+3,k+4})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassValues {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl ClassValues {
    /// The scalar condition value `x - 2y + z`.
    pub fn blockvalue(&self) -> Rational {
        &self.x - rat_int(2) * &self.y + &self.z
    }
}

/// The two constant matrices and the scalar of the reduction, with the
/// class values they were built from.
#[derive(Clone, Debug)]
pub struct ReductionBlocks {
    pub b1: RationalSymMatrix,
    pub b2: RationalSymMatrix,
    pub scalar: Rational,
    pub classes: ClassValues,
    pub k: u32,
}

impl ReductionBlocks {
    /// Row labels of `B1`: the edges within `[k]` (lexicographic), then the
    /// attachment rows for `j in [k]`, then the deep-tail row.
    pub fn b1_order(&self) -> usize {
        self.b1.order()
    }

    pub fn b2_order(&self) -> usize {
        self.b2.order()
    }
}

/// Entry oracle for a multigraph: returns the `(ei, ej)` entry of the
/// scaled level-`(k+4)` coefficient matrix, for edges within `[k+4]`.
pub fn entry_oracle<'a>(
    g: &'a Multigraph,
    cache: &'a CoeffCache,
    scaled: bool,
) -> impl Fn(Edge, Edge) -> Result<Rational> + 'a {
    let n = g.k() + 4;
    move |ei, ej| qgamma_entry(g, n, ei, ej, scaled, cache)
}

/// Assembles the reduction blocks of a multigraph from its entry oracle.
///
/// Row/column ordering follows the displayed border labels: the `C(k,2)`
/// edges within `[k]` lexicographically, then `j in [k]`, then the tail
/// row. With `scaled` set (the pipeline default) all three objects carry
/// the `gamma!` factor uniformly.
pub fn theorem_blocks_with(
    g: &Multigraph,
    cache: &CoeffCache,
    scaled: bool,
) -> Result<ReductionBlocks> {
    let k = g.k();
    let a = entry_oracle(g, cache, scaled);

    let x = a(Edge::new(k + 1, k + 2)?, Edge::new(k + 1, k + 2)?)?;
    let y = a(Edge::new(k + 1, k + 2)?, Edge::new(k + 1, k + 3)?)?;
    let z = a(Edge::new(k + 1, k + 2)?, Edge::new(k + 3, k + 4)?)?;
    let classes = ClassValues { x, y, z };

    let inner: Vec<Edge> = edges_of(k);
    let nk = inner.len();
    let dim1 = nk + k as usize + 1;

    let mut rows = vec![vec![Rational::zero(); dim1]; dim1];
    for (p, &ep) in inner.iter().enumerate() {
        for (q, &eq) in inner.iter().enumerate() {
            rows[p][q] = a(ep, eq)?;
        }
        for j in 1..=k {
            let v = a(ep, Edge::new(j, k + 1)?)?;
            rows[p][nk + (j - 1) as usize] = v.clone();
            rows[nk + (j - 1) as usize][p] = v;
        }
        let v = a(ep, Edge::new(k + 1, k + 2)?)?;
        rows[p][dim1 - 1] = v.clone();
        rows[dim1 - 1][p] = v;
    }
    for i in 1..=k {
        for j in 1..=k {
            rows[nk + (i - 1) as usize][nk + (j - 1) as usize] =
                a(Edge::new(i, k + 1)?, Edge::new(j, k + 2)?)?;
        }
        let v = a(Edge::new(i, k + 1)?, Edge::new(k + 2, k + 3)?)?;
        rows[nk + (i - 1) as usize][dim1 - 1] = v.clone();
        rows[dim1 - 1][nk + (i - 1) as usize] = v;
    }
    rows[dim1 - 1][dim1 - 1] = classes.z.clone();
    // from_rows re-checks symmetry; for the middle block this is exactly the
    // invariance requirement a({i,k+1},{j,k+2}) = a({j,k+1},{i,k+2}).
    let b1 = RationalSymMatrix::from_rows(rows)?;

    let dim2 = k as usize + 1;
    let mut rows2 = vec![vec![Rational::zero(); dim2]; dim2];
    for i in 1..=k {
        for j in 1..=k {
            rows2[(i - 1) as usize][(j - 1) as usize] =
                a(Edge::new(i, k + 1)?, Edge::new(j, k + 1)?)?
                    - a(Edge::new(i, k + 1)?, Edge::new(j, k + 2)?)?;
        }
        let v = a(Edge::new(i, k + 1)?, Edge::new(k + 1, k + 2)?)?
            - a(Edge::new(i, k + 1)?, Edge::new(k + 2, k + 3)?)?;
        rows2[(i - 1) as usize][dim2 - 1] = v.clone();
        rows2[dim2 - 1][(i - 1) as usize] = v;
    }
    rows2[dim2 - 1][dim2 - 1] = &classes.y - &classes.z;
    let b2 = RationalSymMatrix::from_rows(rows2)?;

    let scalar = classes.blockvalue();
    Ok(ReductionBlocks {
        b1,
        b2,
        scalar,
        classes,
        k,
    })
}

/// [`theorem_blocks_with`] under the pipeline's default scaling.
pub fn theorem_blocks(g: &Multigraph, cache: &CoeffCache) -> Result<ReductionBlocks> {
    theorem_blocks_with(g, cache, true)
}

/// The scalar condition value `x - 2y + z` of a multigraph (scaled).
/// Nonnegative for every multigraph-derived family; checked, not assumed.
pub fn blockvalue(g: &Multigraph, cache: &CoeffCache) -> Result<Rational> {
    let k = g.k();
    let a = entry_oracle(g, cache, true);
    let x = a(Edge::new(k + 1, k + 2)?, Edge::new(k + 1, k + 2)?)?;
    let y = a(Edge::new(k + 1, k + 2)?, Edge::new(k + 1, k + 3)?)?;
    let z = a(Edge::new(k + 1, k + 2)?, Edge::new(k + 3, k + 4)?)?;
    Ok(ClassValues { x, y, z }.blockvalue())
}

/// Eigenvalue multiset of the 6x6 three-value pattern at `k = 0`:
/// `x - z` with multiplicity 3, `x + 4y + z` with multiplicity 1,
/// `x - 2y + z` with multiplicity 2.
pub fn remark_k0_eigen(x: &Rational, y: &Rational, z: &Rational) -> Vec<(Rational, usize)> {
    vec![
        (x - z, 3),
        (x + rat_int(4) * y + z, 1),
        (x - rat_int(2) * y + z, 2),
    ]
}

/// The explicit 6x6 pattern over the edges of `K_4`: `x` on the diagonal,
/// `z` between disjoint edges, `y` between edges sharing one vertex.
pub fn remark_k0_pattern(x: &Rational, y: &Rational, z: &Rational) -> RationalSymMatrix {
    let edges = edges_of(4);
    RationalSymMatrix::from_fn(edges.len(), |i, j| {
        Ok(if i == j {
            x.clone()
        } else if edges[i].disjoint(&edges[j]) {
            z.clone()
        } else {
            y.clone()
        })
    })
    .expect("pattern is symmetric")
}

/// Recovers the constant blocks from compressed matrices at two consecutive
/// levels `n = k+4` and `n = k+5` by linear elimination in `n` — the
/// independent route used to cross-validate [`theorem_blocks_with`].
///
/// From the compressed bottom-right entries one recovers `x - 2y + z`
/// (third block over 4), the slope `y - z` of the second block's corner,
/// and then `(x, y, z)` by solving with the first block's corner at both
/// levels. Off-corner entries of the middle band are two-point slopes.
pub fn blocks_from_compressions(
    k: u32,
    at_k4: &[RationalSymMatrix; 3],
    at_k5: &[RationalSymMatrix; 3],
) -> Result<ReductionBlocks> {
    let nk = edges_of(k).len();
    let dim1 = nk + k as usize + 1;
    let dim2 = k as usize + 1;
    for (m, d) in [(&at_k4[0], dim1), (&at_k4[1], dim2), (&at_k4[2], 1)] {
        if m.order() != d {
            return Err(Error::DimensionMismatch(format!(
                "compressed block order {} vs expected {d}",
                m.order()
            )));
        }
    }

    let s1 = rat_int(4); // n - k at level k+4
    let s2 = rat_int(5);
    let binom = |s: i64| rat_int(s * (s - 1) / 2);

    // Scalar condition from the third compression (constant in n).
    let u = at_k4[2].get(0, 0) / rat_int(4);
    if at_k5[2].get(0, 0) / rat_int(4) != u {
        return Err(Error::DimensionMismatch(
            "third compression is not constant across levels".to_string(),
        ));
    }

    // Corner of the second block: D22(s) = (s-2)(y-z) + u is linear in s.
    let d22_1 = at_k4[1].get(dim2 - 1, dim2 - 1) / (rat_int(2) * (&s1 - rat_int(2)));
    let d22_2 = at_k5[1].get(dim2 - 1, dim2 - 1) / (rat_int(2) * (&s2 - rat_int(2)));
    let y_minus_z = &d22_2 - &d22_1;

    // Corner of the first block: C33(s) = x + 2(s-2)y + C(s-2,2)z, scaled by
    // C(s,2). Using both levels and u: y+z from the difference, then split
    // with y-z.
    let c33_1 = at_k4[0].get(dim1 - 1, dim1 - 1) / binom(4);
    let c33_2 = at_k5[0].get(dim1 - 1, dim1 - 1) / binom(5);
    // c33_1 = x + 4y + z, c33_2 = x + 6y + 3z.
    let y_plus_z = (&c33_2 - &c33_1) / rat_int(2);
    let y = (&y_plus_z + &y_minus_z) / rat_int(2);
    let z = (&y_plus_z - &y_minus_z) / rat_int(2);
    let x = &u + rat_int(2) * &y - &z;
    let classes = ClassValues {
        x: x.clone(),
        y: y.clone(),
        z: z.clone(),
    };

    let mut rows = vec![vec![Rational::zero(); dim1]; dim1];
    for p in 0..nk {
        for q in 0..nk {
            rows[p][q] = at_k4[0].get(p, q).clone();
        }
        for j in 0..k as usize {
            // (1,2)-band entries carry a factor (n-k): divide out.
            let v = at_k4[0].get(p, nk + j) / &s1;
            rows[p][nk + j] = v.clone();
            rows[nk + j][p] = v;
        }
        let v = at_k4[0].get(p, dim1 - 1) / binom(4);
        rows[p][dim1 - 1] = v.clone();
        rows[dim1 - 1][p] = v;
    }
    for i in 0..k as usize {
        for j in 0..k as usize {
            // C22(s)/s = cross + (same - cross)/s: two-point slope in 1/s.
            let v1 = at_k4[0].get(nk + i, nk + j) / &s1;
            let v2 = at_k5[0].get(nk + i, nk + j) / &s2;
            let inv1 = rat_int(1) / &s1;
            let inv2 = rat_int(1) / &s2;
            let constant = (&inv1 * &v2 - &inv2 * &v1) / (&inv1 - &inv2);
            rows[nk + i][nk + j] = constant;
        }
        // C23(s)/C(s,2) = far + (2 near - 2 far)/s: same elimination.
        let v1 = at_k4[0].get(nk + i, dim1 - 1) / binom(4);
        let v2 = at_k5[0].get(nk + i, dim1 - 1) / binom(5);
        let inv1 = rat_int(1) / &s1;
        let inv2 = rat_int(1) / &s2;
        let constant = (&inv1 * &v2 - &inv2 * &v1) / (&inv1 - &inv2);
        rows[nk + i][dim1 - 1] = constant.clone();
        rows[dim1 - 1][nk + i] = constant;
    }
    rows[dim1 - 1][dim1 - 1] = z.clone();
    let b1 = RationalSymMatrix::from_rows(rows)?;

    let mut rows2 = vec![vec![Rational::zero(); dim2]; dim2];
    for i in 0..k as usize {
        for j in 0..k as usize {
            rows2[i][j] = at_k4[1].get(i, j) / rat_int(2);
        }
        let v = at_k4[1].get(i, dim2 - 1) / (rat_int(2) * (&s1 - rat_int(2)));
        rows2[i][dim2 - 1] = v.clone();
        rows2[dim2 - 1][i] = v;
    }
    rows2[dim2 - 1][dim2 - 1] = y_minus_z;
    let b2 = RationalSymMatrix::from_rows(rows2)?;

    Ok(ReductionBlocks {
        b1,
        b2,
        scalar: u,
        classes,
        k,
    })
}
