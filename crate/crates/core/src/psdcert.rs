//! Exact positive-semidefiniteness certification and floating-point
//! eigenvalue reports.
//!
//! The exact side factors `M = L D L^T` in rational arithmetic; a full list
//! of nonnegative pivots proves PSD, and any failure yields a rational
//! witness vector `v` with `v^T M v < 0`, re-verified exactly before it is
//! returned. The floating-point side is a cyclic Jacobi sweep, good to
//! near machine precision on the small dense blocks this pipeline produces.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::hessian::RationalSymMatrix;
use crate::rational::Rational;
use crate::Result;

/// Outcome of an exact PSD check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Psd,
    NotPsd,
}

/// Exact certificate: the pivot sequence of an `L D L^T` factorization, or
/// a rational negativity witness.
#[derive(Clone, Debug)]
pub struct PsdCertificate {
    pub verdict: Verdict,
    /// Diagonal of `D`, in pivot order.
    pub pivots: Vec<Rational>,
    /// On NOT_PSD: a vector `v` and the exact value `v^T M v < 0`.
    pub witness: Option<(Vec<Rational>, Rational)>,
    /// Pivot order used (original row indices).
    pub permutation: Vec<usize>,
    /// Unit lower-triangular factor, rows/cols in pivot order.
    pub l_factor: Vec<Vec<Rational>>,
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        self.verdict == Verdict::Psd
    }

    pub fn min_pivot(&self) -> Option<&Rational> {
        self.pivots.iter().min()
    }
}

/// `L D L^T` in natural row order without pivoting.
///
/// A negative pivot stops the factorization with a witness. A zero pivot
/// with a nonzero residual column falls back to [`ldlt_pivoted`]; a zero
/// pivot with a clean column continues with zeros.
pub fn ldlt_natural(m: &RationalSymMatrix) -> PsdCertificate {
    let n = m.order();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        l[j][j] = Rational::from_integer(1.into());
        let mut pivot = m.get(j, j).clone();
        for s in 0..j {
            pivot -= &l[j][s] * &l[j][s] * &d[s];
        }
        if pivot.is_negative() {
            d.push(pivot);
            let witness = natural_witness(m, &l, j);
            return PsdCertificate {
                verdict: Verdict::NotPsd,
                pivots: d,
                witness: Some(witness),
                permutation: (0..n).collect(),
                l_factor: l,
            };
        }
        if pivot.is_zero() {
            for i in (j + 1)..n {
                let mut r = m.get(i, j).clone();
                for s in 0..j {
                    r -= &l[i][s] * &l[j][s] * &d[s];
                }
                if !r.is_zero() {
                    // Breakdown: zero pivot with nonzero residual column.
                    return ldlt_pivoted(m);
                }
            }
            d.push(pivot);
            continue;
        }
        for i in (j + 1)..n {
            let mut v = m.get(i, j).clone();
            for s in 0..j {
                v -= &l[i][s] * &l[j][s] * &d[s];
            }
            l[i][j] = v / &pivot;
        }
        d.push(pivot);
    }
    PsdCertificate {
        verdict: Verdict::Psd,
        pivots: d,
        witness: None,
        permutation: (0..n).collect(),
        l_factor: l,
    }
}

/// Witness for a negative natural pivot at step `j`: solve `L^T w = e_j` on
/// the leading block, so that `w^T M w` equals the pivot.
fn natural_witness(
    m: &RationalSymMatrix,
    l: &[Vec<Rational>],
    j: usize,
) -> (Vec<Rational>, Rational) {
    let n = m.order();
    let mut w = vec![Rational::zero(); n];
    w[j] = Rational::from_integer(1.into());
    for i in (0..j).rev() {
        let mut s = Rational::zero();
        for t in (i + 1)..=j {
            s += &l[t][i] * &w[t];
        }
        w[i] = -s;
    }
    let value = m.quadratic_form(&w).expect("witness length matches order");
    assert!(value.is_negative(), "witness failed exact re-evaluation");
    (w, value)
}

/// `L D L^T` with symmetric pivoting on the largest remaining diagonal
/// entry. PSD iff every pivot is nonnegative and, whenever the maximal
/// remaining diagonal is zero, the whole remaining block vanishes.
pub fn ldlt_pivoted(m: &RationalSymMatrix) -> PsdCertificate {
    let n = m.order();
    // Schur complement over original indices, shrinking alive set.
    let mut schur: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut pivots: Vec<Rational> = Vec::with_capacity(n);
    // l_cols[t][i]: multiplier of original row i against pivot t.
    let mut l_cols: Vec<Vec<Rational>> = Vec::with_capacity(n);

    loop {
        let remaining: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        if remaining.is_empty() {
            break;
        }
        let &q = remaining
            .iter()
            .max_by(|&&a, &&b| schur[a][a].cmp(&schur[b][b]).then(b.cmp(&a)))
            .expect("nonempty");
        let max_diag = schur[q][q].clone();

        if max_diag.is_positive() {
            perm.push(q);
            alive[q] = false;
            let mut col = vec![Rational::zero(); n];
            for &i in &remaining {
                if i != q {
                    col[i] = &schur[i][q] / &max_diag;
                }
            }
            for &i in &remaining {
                if i == q {
                    continue;
                }
                for &j in &remaining {
                    if j == q {
                        continue;
                    }
                    let delta = &col[i] * &schur[q][j];
                    schur[i][j] -= delta;
                }
            }
            pivots.push(max_diag);
            l_cols.push(col);
            continue;
        }

        // Max remaining diagonal <= 0.
        let neg = remaining
            .iter()
            .copied()
            .filter(|&i| schur[i][i].is_negative())
            .min_by(|&a, &b| schur[a][a].cmp(&schur[b][b]));
        if let Some(qneg) = neg {
            // Negative diagonal: e_q in Schur space witnesses it.
            let mut v = vec![Rational::zero(); n];
            v[qneg] = Rational::from_integer(1.into());
            return finish_not_psd(m, n, perm, pivots, l_cols, v, &alive);
        }
        // All remaining diagonals are zero; any nonzero off-diagonal entry
        // makes a 2x2 indefinite block.
        let mut off = None;
        'scan: for (ai, &i) in remaining.iter().enumerate() {
            for &j in remaining.iter().skip(ai + 1) {
                if !schur[i][j].is_zero() {
                    off = Some((i, j));
                    break 'scan;
                }
            }
        }
        match off {
            None => {
                // Remaining block is identically zero: PSD with zero pivots.
                for &i in &remaining {
                    perm.push(i);
                    pivots.push(Rational::zero());
                    l_cols.push(vec![Rational::zero(); n]);
                    alive[i] = false;
                }
                break;
            }
            Some((p, q2)) => {
                let a = schur[p][q2].clone();
                let mut v = vec![Rational::zero(); n];
                v[p] = Rational::from_integer(1.into());
                v[q2] = if a.is_positive() {
                    -Rational::from_integer(1.into())
                } else {
                    Rational::from_integer(1.into())
                };
                return finish_not_psd(m, n, perm, pivots, l_cols, v, &alive);
            }
        }
    }

    // Rebuild L in pivot coordinates for the certificate.
    let t = perm.len();
    let mut l = vec![vec![Rational::zero(); t]; t];
    for (ti, _) in perm.iter().enumerate() {
        l[ti][ti] = Rational::from_integer(1.into());
        for tj in 0..ti {
            l[ti][tj] = l_cols[tj][perm[ti]].clone();
        }
    }
    PsdCertificate {
        verdict: Verdict::Psd,
        pivots,
        witness: None,
        permutation: perm,
        l_factor: l,
    }
}

/// Lifts a Schur-space witness through the processed pivots and packages a
/// NOT_PSD certificate. `v` is supported on alive indices.
fn finish_not_psd(
    m: &RationalSymMatrix,
    n: usize,
    perm: Vec<usize>,
    pivots: Vec<Rational>,
    l_cols: Vec<Vec<Rational>>,
    v: Vec<Rational>,
    alive: &[bool],
) -> PsdCertificate {
    // r_t = sum over alive i of L[i][t] v_i
    let steps = perm.len();
    let mut r = vec![Rational::zero(); steps];
    for (t, rt) in r.iter_mut().enumerate() {
        for i in 0..n {
            if alive[i] && !v[i].is_zero() {
                *rt += &l_cols[t][i] * &v[i];
            }
        }
    }
    // Solve the unit upper-triangular system for the head corrections:
    // u_t = -r_t - sum_{s>t} L[p_s][t] u_s.
    let mut u = vec![Rational::zero(); steps];
    for t in (0..steps).rev() {
        let mut s = r[t].clone();
        for s_idx in (t + 1)..steps {
            s += &l_cols[t][perm[s_idx]] * &u[s_idx];
        }
        u[t] = -s;
    }
    let mut w = v;
    for (t, &p) in perm.iter().enumerate() {
        w[p] = u[t].clone();
    }
    let value = m.quadratic_form(&w).expect("witness length matches order");
    assert!(value.is_negative(), "witness failed exact re-evaluation");
    let t = perm.len();
    let mut l = vec![vec![Rational::zero(); t]; t];
    for ti in 0..t {
        l[ti][ti] = Rational::from_integer(1.into());
        for tj in 0..ti {
            l[ti][tj] = l_cols[tj][perm[ti]].clone();
        }
    }
    PsdCertificate {
        verdict: Verdict::NotPsd,
        pivots,
        witness: Some((w, value)),
        permutation: perm,
        l_factor: l,
    }
}

/// Floating-point eigenvalue report from a cyclic Jacobi iteration.
#[derive(Clone, Debug)]
pub struct EigenReport {
    /// Eigenvalues sorted ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// Off-diagonal Frobenius norm at convergence.
    pub offdiag_residual: f64,
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_MAX_ORDER: usize = 500;

/// Cyclic Jacobi on the double-precision image of `M`, iterated until the
/// off-diagonal Frobenius norm falls below `1e-13` times the largest entry
/// magnitude. Errors on order > 500 or non-convergence.
pub fn jacobi_eigen(m: &RationalSymMatrix) -> Result<EigenReport> {
    let n = m.order();
    if n > JACOBI_MAX_ORDER {
        return Err(Error::TooLarge(format!(
            "jacobi limited to order {JACOBI_MAX_ORDER}, got {n}"
        )));
    }
    let mut a = m.to_f64_rows();
    let scale = m.max_abs_f64();
    if n <= 1 || scale == 0.0 {
        let eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        return Ok(EigenReport {
            min_eigenvalue: eigenvalues.iter().copied().fold(f64::INFINITY, f64::min),
            eigenvalues,
            offdiag_residual: 0.0,
        });
    }
    let threshold = 1e-13 * scale;

    let offdiag = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..a.len() {
            for j in 0..a.len() {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while offdiag(&a) > threshold {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= threshold / (n as f64) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("no NaN"));
    Ok(EigenReport {
        min_eigenvalue: eigenvalues[0],
        eigenvalues: eigenvalues.clone(),
        offdiag_residual: offdiag(&a),
    })
}

/// Reconstructs `P M P^T` from a certificate's factors; test support.
pub fn reconstruct(cert: &PsdCertificate) -> RationalSymMatrix {
    let t = cert.permutation.len();
    RationalSymMatrix::from_fn(t, |i, j| {
        let mut s = Rational::zero();
        for p in 0..t.min(cert.pivots.len()) {
            s += &cert.l_factor[i][p] * &cert.l_factor[j][p] * &cert.pivots[p];
        }
        Ok(s)
    })
    .expect("reconstruction is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::CoeffCache;
    use crate::multigraphs::Multigraph;
    use crate::rational::{rat, rat_int};
    use crate::reduction::{remark_k0_pattern, theorem_blocks};
    use num_traits::One;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q)
    }

    #[test]
    fn identity_is_psd_with_unit_pivots() {
        let id = RationalSymMatrix::identity(3);
        let cert = ldlt_natural(&id);
        assert!(cert.is_psd());
        assert_eq!(cert.pivots, vec![Rational::one(); 3]);
    }

    #[test]
    fn zero_matrix_is_psd_with_zero_pivots() {
        let z = RationalSymMatrix::zero(4);
        let cert = ldlt_pivoted(&z);
        assert!(cert.is_psd());
        assert!(cert.pivots.iter().all(|p| p.is_zero()));
        let cert2 = ldlt_natural(&z);
        assert!(cert2.is_psd());
    }

    #[test]
    fn published_d3_min_pivot() {
        let cache = CoeffCache::new();
        let g: Multigraph = "1-2".parse().unwrap();
        let blocks = theorem_blocks(&g, &cache).unwrap();
        let c1 = ldlt_natural(&blocks.b1);
        let c2 = ldlt_natural(&blocks.b2);
        assert!(c1.is_psd() && c2.is_psd());
        let min = c1.pivots.iter().chain(&c2.pivots).min().unwrap().clone();
        assert_eq!(min, r(13, 2360));
    }

    #[test]
    fn remark_pattern_verdicts() {
        // (3,1,2): positive definite full pattern, but y - z < 0.
        let a4 = remark_k0_pattern(&r(3, 1), &r(1, 1), &r(2, 1));
        assert!(ldlt_pivoted(&a4).is_psd());
        let b2 = RationalSymMatrix::from_rows(vec![vec![r(-1, 1)]]).unwrap();
        let cert = ldlt_pivoted(&b2);
        assert_eq!(cert.verdict, Verdict::NotPsd);
        let (_, value) = cert.witness.unwrap();
        assert_eq!(value, r(-1, 1));
    }

    #[test]
    fn witness_is_exactly_negative() {
        // Indefinite: eigenvalues 3 and -1.
        let m = RationalSymMatrix::from_rows(vec![
            vec![r(1, 1), r(2, 1)],
            vec![r(2, 1), r(1, 1)],
        ])
        .unwrap();
        for cert in [ldlt_natural(&m), ldlt_pivoted(&m)] {
            assert_eq!(cert.verdict, Verdict::NotPsd);
            let (w, value) = cert.witness.clone().unwrap();
            assert!(value.is_negative());
            assert_eq!(m.quadratic_form(&w).unwrap(), value);
        }
    }

    #[test]
    fn zero_diagonal_nonzero_offdiagonal_is_not_psd() {
        let m = RationalSymMatrix::from_rows(vec![
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1)],
        ])
        .unwrap();
        let cert = ldlt_pivoted(&m);
        assert_eq!(cert.verdict, Verdict::NotPsd);
        let (w, value) = cert.witness.unwrap();
        assert!(value.is_negative());
        assert_eq!(m.quadratic_form(&w).unwrap(), value);
        // Natural order hits the zero pivot and falls back.
        let cert2 = ldlt_natural(&m);
        assert_eq!(cert2.verdict, Verdict::NotPsd);
    }

    #[test]
    fn psd_with_semidefinite_rank_deficiency() {
        // Rank-1 PSD: outer product of (1, 2).
        let m = RationalSymMatrix::from_rows(vec![
            vec![r(1, 1), r(2, 1)],
            vec![r(2, 1), r(4, 1)],
        ])
        .unwrap();
        let cert = ldlt_natural(&m);
        assert!(cert.is_psd());
        assert_eq!(cert.pivots, vec![r(1, 1), r(0, 1)]);
    }

    #[test]
    fn reconstruction_matches_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            // Random symmetric rational matrix, then reconstruct P M P^T.
            let m = RationalSymMatrix::from_fn(n, |_, _| {
                Ok(rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
            })
            .unwrap();
            let cert = ldlt_pivoted(&m);
            if cert.verdict == Verdict::NotPsd {
                continue;
            }
            let rebuilt = reconstruct(&cert);
            let permuted = {
                let idx = cert.permutation.clone();
                m.principal_submatrix(&idx)
            };
            assert_eq!(rebuilt, permuted);
        }
    }

    #[test]
    fn jacobi_on_published_d3_blocks() {
        let cache = CoeffCache::new();
        let g: Multigraph = "1-2".parse().unwrap();
        let blocks = theorem_blocks(&g, &cache).unwrap();
        let e1 = jacobi_eigen(&blocks.b1).unwrap();
        let e2 = jacobi_eigen(&blocks.b2).unwrap();
        assert!((e1.min_eigenvalue - 0.00357563).abs() < 1e-8);
        assert!((e2.min_eigenvalue - 0.00837652).abs() < 1e-8);
        assert!(e1.offdiag_residual <= 1e-12 * blocks.b1.max_abs_f64());
    }

    /// Exact PSD from the characteristic polynomial: all roots nonnegative
    /// iff the coefficients alternate in sign. Faddeev-LeVerrier, exact.
    fn charpoly_psd(m: &RationalSymMatrix) -> bool {
        let n = m.order();
        // c[k] are coefficients of lambda^{n-k}; c[0] = 1.
        let mut coeffs = vec![Rational::one()];
        let mut mk: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n]; // M_0 = 0
        for k in 1..=n {
            // M_k = A (M_{k-1} + c_{k-1} I)
            let mut next = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = Rational::zero();
                    for t in 0..n {
                        let mut inner = mk[t][j].clone();
                        if t == j {
                            inner += coeffs.last().unwrap();
                        }
                        s += m.get(i, t) * inner;
                    }
                    next[i][j] = s;
                }
            }
            let trace: Rational = (0..n).map(|i| next[i][i].clone()).sum();
            coeffs.push(-trace / rat_int(k as i64));
            mk = next;
        }
        // PSD iff (-1)^k c_k >= 0 for all k.
        coeffs.iter().enumerate().all(|(k, c)| {
            if k % 2 == 0 {
                !c.is_negative()
            } else {
                !c.is_positive()
            }
        })
    }

    #[test]
    fn jacobi_agrees_with_charpoly_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut psd_seen = 0;
        for round in 0..100 {
            let n = rng.gen_range(2..=8);
            let m = if round % 3 == 0 {
                // Gram matrix of random vectors: guaranteed PSD.
                let cols = rng.gen_range(1..=n);
                let v: Vec<Vec<Rational>> = (0..n)
                    .map(|_| (0..cols).map(|_| rat(rng.gen_range(-3..=3), 1)).collect())
                    .collect();
                RationalSymMatrix::from_fn(n, |i, j| {
                    Ok((0..cols).map(|c| &v[i][c] * &v[j][c]).sum())
                })
                .unwrap()
            } else {
                RationalSymMatrix::from_fn(n, |_, _| {
                    Ok(rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                })
                .unwrap()
            };
            let exact = charpoly_psd(&m);
            let eig = jacobi_eigen(&m).unwrap();
            if exact {
                psd_seen += 1;
                assert!(
                    eig.min_eigenvalue >= -1e-9,
                    "charpoly PSD but jacobi min {}",
                    eig.min_eigenvalue
                );
                assert!(ldlt_pivoted(&m).is_psd());
            } else {
                assert!(
                    eig.min_eigenvalue < 1e-9,
                    "charpoly not PSD but jacobi min {}",
                    eig.min_eigenvalue
                );
                assert_eq!(ldlt_pivoted(&m).verdict, Verdict::NotPsd);
            }
        }
        assert!(psd_seen >= 20, "want a healthy share of PSD cases");
    }
}
