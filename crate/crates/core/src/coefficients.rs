//! Exact rational computation of the monomial coefficients of `f_d`.
//!
//! The factorial-scaled coefficient `bhat(alpha) = alpha! * b(alpha)`
//! satisfies the recurrence
//!
//! ```text
//! bhat(alpha) = chat(alpha) * sum_{e : alpha_e >= 1} alpha_e * bhat(alpha - v_e)
//! ```
//!
//! with `chat(alpha) = 1 / |union of support edges|` and base case
//! `bhat(v_e) = 1/2`. Computing these entries is the bottleneck of the whole
//! pipeline, so values are memoized under relabel-normalized keys: vectors
//! that differ only by a renaming of vertices share one cache entry whenever
//! the renaming maps their sorted supports onto each other.

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::Zero;

use crate::combinatorics::{exponent_factorial, Edge, ExponentVector};
use crate::error::Error;
use crate::rational::{rat, Rational};
use crate::Result;

/// Thread-safe memo table for `bhat` values, keyed by relabel-normalized
/// exponent vectors. Inserts are idempotent: every writer stores the same
/// value for a given key, so lost updates are harmless.
#[derive(Default)]
pub struct CoeffCache {
    memo: RwLock<HashMap<ExponentVector, Rational>>,
}

impl CoeffCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("coeff cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, key: &ExponentVector) -> Option<Rational> {
        self.memo
            .read()
            .expect("coeff cache poisoned")
            .get(key)
            .cloned()
    }

    fn insert(&self, key: ExponentVector, value: Rational) {
        self.memo
            .write()
            .expect("coeff cache poisoned")
            .insert(key, value);
    }
}

/// `chat(alpha) = 1 / |e_1 ∪ ... ∪ e_d|` over the support of `alpha`.
pub fn c_hat(alpha: &ExponentVector) -> Result<Rational> {
    if alpha.is_zero() {
        return Err(Error::ZeroExponentVector);
    }
    Ok(rat(1, alpha.union_size()? as i64))
}

/// The factorial-scaled coefficient `bhat(alpha) = alpha! * b(alpha)`.
pub fn b_hat(alpha: &ExponentVector, cache: &CoeffCache) -> Result<Rational> {
    if alpha.is_zero() {
        return Err(Error::ZeroExponentVector);
    }
    b_hat_inner(&alpha.relabel_normalized(), cache)
}

fn b_hat_inner(alpha: &ExponentVector, cache: &CoeffCache) -> Result<Rational> {
    if alpha.degree() == 1 {
        return Ok(rat(1, 2));
    }
    if let Some(v) = cache.get(alpha) {
        return Ok(v);
    }
    let c = c_hat(alpha)?;
    let mut sum = Rational::zero();
    for (e, m) in alpha.support() {
        let sub = alpha
            .minus(e)
            .expect("support edge has positive multiplicity");
        sum += b_hat_inner(&sub.relabel_normalized(), cache)? * rat(m as i64, 1);
    }
    let value = c * sum;
    cache.insert(alpha.clone(), value.clone());
    Ok(value)
}

/// Brute-force evaluation of `b(alpha)` straight from the defining sum over
/// all orderings of the edge multiset:
///
/// ```text
/// b(alpha) = sum over tuples (e_1,...,e_d) with multiset alpha of
///            prod_i 1/|e_1 ∪ ... ∪ e_i|
/// ```
///
/// Independent of the recurrence path; oracle use only (degree <= 8).
pub fn b_alpha_bruteforce(alpha: &ExponentVector) -> Result<Rational> {
    if alpha.is_zero() {
        return Err(Error::ZeroExponentVector);
    }
    if alpha.degree() > 8 {
        return Err(Error::TooLarge(format!(
            "brute-force coefficient sum limited to degree 8, got {}",
            alpha.degree()
        )));
    }
    let mut remaining: Vec<(Edge, u32)> = alpha.support().collect();
    let mut sum = Rational::zero();
    let mut prefix_union: u64 = 0;
    let total = alpha.degree();
    walk_orderings(
        &mut remaining,
        total,
        &mut prefix_union,
        &Rational::from_integer(1.into()),
        &mut sum,
    );
    Ok(sum)
}

fn walk_orderings(
    remaining: &mut Vec<(Edge, u32)>,
    left: u32,
    prefix_union: &mut u64,
    product: &Rational,
    sum: &mut Rational,
) {
    if left == 0 {
        *sum += product;
        return;
    }
    for i in 0..remaining.len() {
        let (e, m) = remaining[i];
        if m == 0 {
            continue;
        }
        remaining[i].1 -= 1;
        let saved = *prefix_union;
        *prefix_union |= (1u64 << (e.a() - 1)) | (1u64 << (e.b() - 1));
        let factor = rat(1, prefix_union.count_ones() as i64);
        let next = product * factor;
        walk_orderings(remaining, left - 1, prefix_union, &next, sum);
        *prefix_union = saved;
        remaining[i].1 += 1;
    }
}

/// `b(alpha)` recovered from the recurrence route, for cross-checks:
/// `bhat(alpha) / alpha!`.
pub fn b_alpha_via_recurrence(alpha: &ExponentVector, cache: &CoeffCache) -> Result<Rational> {
    let scaled = b_hat(alpha, cache)?;
    Ok(scaled / Rational::from_integer(exponent_factorial(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{edges_of, Permutation};
    use num_traits::Signed;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn ev(pairs: &[(u32, u32, u32)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().map(|&(a, b, m)| (e(a, b), m)))
    }

    #[test]
    fn c_hat_examples() {
        assert_eq!(c_hat(&ev(&[(1, 2, 1)])).unwrap(), rat(1, 2));
        assert_eq!(c_hat(&ev(&[(1, 2, 1), (1, 3, 1)])).unwrap(), rat(1, 3));
        assert_eq!(c_hat(&ev(&[(1, 2, 2), (3, 4, 1)])).unwrap(), rat(1, 4));
        assert!(c_hat(&ExponentVector::new()).is_err());
    }

    #[test]
    fn b_hat_base_and_recurrence_examples() {
        let cache = CoeffCache::new();
        assert_eq!(b_hat(&ev(&[(1, 2, 1)]), &cache).unwrap(), rat(1, 2));
        assert_eq!(
            b_hat(&ev(&[(1, 2, 1), (1, 3, 1)]), &cache).unwrap(),
            rat(1, 3)
        );
        assert_eq!(b_hat(&ev(&[(1, 2, 2)]), &cache).unwrap(), rat(1, 2));
        assert_eq!(b_hat(&ev(&[(1, 2, 3)]), &cache).unwrap(), rat(3, 4));
        assert!(b_hat(&ExponentVector::new(), &cache).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(b_alpha_bruteforce(&ev(&[(1, 2, 1)])).unwrap(), rat(1, 2));
        assert_eq!(b_alpha_bruteforce(&ev(&[(1, 2, 2)])).unwrap(), rat(1, 4));
        assert_eq!(
            b_alpha_bruteforce(&ev(&[(1, 2, 1), (1, 3, 1)])).unwrap(),
            rat(1, 3)
        );
        assert!(b_alpha_bruteforce(&ev(&[(1, 2, 9)])).is_err());
    }

    /// Recurrence and defining sum agree exactly: exhaustive over all
    /// multisets of degree <= 4 on edges within [6], plus seeded samples of
    /// degree 5 and 6.
    #[test]
    fn recurrence_matches_bruteforce() {
        let cache = CoeffCache::new();
        let edges = edges_of(6);

        fn all_multisets(edges: &[Edge], degree: u32, start: usize) -> Vec<Vec<Edge>> {
            if degree == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for i in start..edges.len() {
                for mut rest in all_multisets(edges, degree - 1, i) {
                    rest.push(edges[i]);
                    out.push(rest);
                }
            }
            out
        }

        let mut checked = 0usize;
        for degree in 1..=4u32 {
            for mset in all_multisets(&edges, degree, 0) {
                let mut alpha = ExponentVector::new();
                for edge in mset {
                    alpha.add_edge(edge, 1);
                }
                let direct = b_alpha_bruteforce(&alpha).unwrap();
                let via_rec = b_alpha_via_recurrence(&alpha, &cache).unwrap();
                assert_eq!(direct, via_rec, "mismatch at alpha = {alpha}");
                checked += 1;
            }
        }
        assert!(checked > 3000);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..400 {
            let degree = *[5u32, 6].choose(&mut rng).unwrap();
            let mut alpha = ExponentVector::new();
            for _ in 0..degree {
                alpha.add_edge(*edges.choose(&mut rng).unwrap(), 1);
            }
            let direct = b_alpha_bruteforce(&alpha).unwrap();
            let via_rec = b_alpha_via_recurrence(&alpha, &cache).unwrap();
            assert_eq!(direct, via_rec, "mismatch at alpha = {alpha}");
        }
    }

    /// Relabeling invariance (the property behind the invariance condition of
    /// the reduction theorem) plus strict positivity.
    #[test]
    fn b_hat_relabel_invariant_and_positive() {
        let cache = CoeffCache::new();
        let edges = edges_of(8);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let degree = rng.gen_range(1..=6);
            let mut alpha = ExponentVector::new();
            for _ in 0..degree {
                alpha.add_edge(*edges.choose(&mut rng).unwrap(), 1);
            }
            let mut images: Vec<u32> = (1..=8).collect();
            images.shuffle(&mut rng);
            let sigma = Permutation::new(images).unwrap();
            let mapped = alpha.apply_perm(&sigma).unwrap();
            let v = b_hat(&alpha, &cache).unwrap();
            assert_eq!(v, b_hat(&mapped, &cache).unwrap());
            assert!(v.is_positive());
        }
    }

    /// A cached value equals recomputation from scratch.
    #[test]
    fn cache_is_transparent() {
        let warm = CoeffCache::new();
        let alpha = ev(&[(1, 2, 2), (2, 3, 1), (4, 5, 1)]);
        let first = b_hat(&alpha, &warm).unwrap();
        let again = b_hat(&alpha, &warm).unwrap();
        let cold = b_hat(&alpha, &CoeffCache::new()).unwrap();
        assert_eq!(first, again);
        assert_eq!(first, cold);
        assert!(!warm.is_empty());
    }
}
