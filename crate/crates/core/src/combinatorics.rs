//! Edges of the complete graph, exponent vectors and permutation actions.
//!
//! Vertex labels are 1-based throughout, and the edge set of `K_n` is always
//! ordered lexicographically on the sorted endpoint pair, so matrix layouts
//! are reproducible across runs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;
use crate::Result;

/// An edge of a complete graph: a 2-subset of `[n]`, stored with endpoints
/// sorted ascending. Equality and ordering are by value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: u32,
    b: u32,
}

impl Edge {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo == 0 || lo == hi {
            return Err(Error::InvalidEdge(a, b));
        }
        Ok(Edge { a: lo, b: hi })
    }

    /// Smaller endpoint.
    pub fn a(&self) -> u32 {
        self.a
    }

    /// Larger endpoint.
    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn contains(&self, v: u32) -> bool {
        self.a == v || self.b == v
    }

    pub fn endpoints(&self) -> [u32; 2] {
        [self.a, self.b]
    }

    /// True when the two edges share no endpoint.
    pub fn disjoint(&self, other: &Edge) -> bool {
        !self.contains(other.a) && !self.contains(other.b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

impl FromStr for Edge {
    type Err = Error;

    /// Parses the `"a-b"` text form.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("invalid edge '{s}', expected 'a-b'")))?;
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid edge endpoint '{a}'")))?;
        let b: u32 = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid edge endpoint '{b}'")))?;
        Edge::new(a, b)
    }
}

/// All edges of `K_n` in lexicographic order.
pub fn edges_of(n: u32) -> Vec<Edge> {
    let mut out = Vec::with_capacity((n as usize * (n as usize).saturating_sub(1)) / 2);
    for a in 1..=n {
        for b in (a + 1)..=n {
            out.push(Edge { a, b });
        }
    }
    out
}

/// Position of `e` in the lexicographic ordering of all 2-subsets of `[n]`.
///
/// Bijective onto `[0, C(n,2))`.
pub fn lex_index(e: Edge, n: u32) -> Result<usize> {
    if e.b > n {
        return Err(Error::EndpointExceedsN { endpoint: e.b, n });
    }
    // Edges starting at a' < a precede e, then those with the same first
    // endpoint and smaller second.
    let (a, b) = (e.a as usize, e.b as usize);
    let n = n as usize;
    let before = (a - 1) * n - (a - 1) * a / 2;
    Ok(before + (b - a - 1))
}

/// Cardinality of the union of all endpoints of a nonempty edge list.
pub fn union_size(edges: &[Edge]) -> Result<u32> {
    if edges.is_empty() {
        return Err(Error::EmptyEdgeList);
    }
    let mut mask: u64 = 0;
    let mut extra: Option<std::collections::BTreeSet<u32>> = None;
    for e in edges {
        for v in e.endpoints() {
            if v <= 64 {
                mask |= 1u64 << (v - 1);
            } else {
                extra.get_or_insert_with(Default::default).insert(v);
            }
        }
    }
    Ok(mask.count_ones() + extra.map_or(0, |s| s.len() as u32))
}

/// A permutation of `[n]`, stored as the image table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from `images[i-1] = sigma(i)`; checks bijectivity.
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len() as u32;
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v == 0 || v > n || seen[(v - 1) as usize] {
                return Err(Error::Parse(format!(
                    "image table is not a bijection on [{n}]"
                )));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Transposition of `i` and `j` inside `[n]`.
    pub fn transposition(n: u32, i: u32, j: u32) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::OutsideDomain(i.max(j), n));
        }
        let mut images: Vec<u32> = (1..=n).collect();
        images.swap((i - 1) as usize, (j - 1) as usize);
        Ok(Permutation { images })
    }

    /// The cycle `(c_0 c_1 ... c_m)` inside `[n]`, fixing everything else.
    pub fn cycle(n: u32, cyc: &[u32]) -> Result<Self> {
        let mut images: Vec<u32> = (1..=n).collect();
        for w in cyc.windows(2) {
            if w[0] == 0 || w[0] > n {
                return Err(Error::OutsideDomain(w[0], n));
            }
            images[(w[0] - 1) as usize] = w[1];
        }
        if let (Some(&last), Some(&first)) = (cyc.last(), cyc.first()) {
            if last == 0 || last > n {
                return Err(Error::OutsideDomain(last, n));
            }
            images[(last - 1) as usize] = first;
        }
        Permutation::new(images)
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, v: u32) -> Result<u32> {
        if v == 0 || v as usize > self.images.len() {
            return Err(Error::OutsideDomain(v, self.n()));
        }
        Ok(self.images[(v - 1) as usize])
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "composing permutations on [{}] and [{}]",
                self.n(),
                other.n()
            )));
        }
        let images = other
            .images
            .iter()
            .map(|&v| self.images[(v - 1) as usize])
            .collect();
        Ok(Permutation { images })
    }

    /// Whether the permutation fixes `1..=k` pointwise (an element of the
    /// subgroup acting only on the tail `{k+1,...,n}`).
    pub fn fixes_prefix(&self, k: u32) -> bool {
        (1..=k).all(|i| self.images.get((i - 1) as usize) == Some(&i))
    }
}

/// Image of an edge under a permutation, endpoints re-sorted ascending.
pub fn apply_perm(sigma: &Permutation, e: Edge) -> Result<Edge> {
    Edge::new(sigma.apply(e.a)?, sigma.apply(e.b)?)
}

/// A finitely supported map from edges to positive multiplicities — the
/// exponent of one monomial. Stored sparsely keyed by edge, so the value is
/// independent of any ambient vertex count.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExponentVector {
    entries: BTreeMap<Edge, u32>,
    degree: u32,
}

impl ExponentVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The unit vector `v_e`.
    pub fn unit(e: Edge) -> Self {
        let mut ev = Self::new();
        ev.add_edge(e, 1);
        ev
    }

    pub fn from_pairs<I: IntoIterator<Item = (Edge, u32)>>(pairs: I) -> Self {
        let mut ev = Self::new();
        for (e, m) in pairs {
            ev.add_edge(e, m);
        }
        ev
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0
    }

    pub fn multiplicity(&self, e: Edge) -> u32 {
        self.entries.get(&e).copied().unwrap_or(0)
    }

    /// Adds `m` to the multiplicity of `e` (no-op for `m = 0`).
    pub fn add_edge(&mut self, e: Edge, m: u32) {
        if m == 0 {
            return;
        }
        *self.entries.entry(e).or_insert(0) += m;
        self.degree += m;
    }

    /// `self + v_e`.
    pub fn plus(&self, e: Edge) -> Self {
        let mut out = self.clone();
        out.add_edge(e, 1);
        out
    }

    /// `self - v_e`; `None` if `e` has multiplicity zero.
    pub fn minus(&self, e: Edge) -> Option<Self> {
        let m = self.multiplicity(e);
        if m == 0 {
            return None;
        }
        let mut out = self.clone();
        if m == 1 {
            out.entries.remove(&e);
        } else {
            out.entries.insert(e, m - 1);
        }
        out.degree -= 1;
        Some(out)
    }

    /// Support edges with multiplicities, in lexicographic edge order.
    pub fn support(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.entries.iter().map(|(&e, &m)| (e, m))
    }

    pub fn support_edges(&self) -> Vec<Edge> {
        self.entries.keys().copied().collect()
    }

    /// The edge multiset as a list with repetition, sorted.
    pub fn edge_list(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for (&e, &m) in &self.entries {
            for _ in 0..m {
                out.push(e);
            }
        }
        out
    }

    /// Number of vertices covered by the support.
    pub fn union_size(&self) -> Result<u32> {
        union_size(&self.support_edges())
    }

    /// Largest vertex label appearing in the support (0 for the zero vector).
    pub fn max_vertex(&self) -> u32 {
        self.entries.keys().map(|e| e.b).max().unwrap_or(0)
    }

    /// Image under a vertex permutation.
    pub fn apply_perm(&self, sigma: &Permutation) -> Result<Self> {
        let mut out = Self::new();
        for (e, m) in self.support() {
            out.add_edge(apply_perm(sigma, e)?, m);
        }
        Ok(out)
    }

    /// Renames vertices to an initial segment `1..=v` by first occurrence in
    /// sorted edge order, then re-sorts. Collapses label noise so that memo
    /// keys are shared across translates of the same configuration.
    pub fn relabel_normalized(&self) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 1u32;
        for (&e, _) in &self.entries {
            for v in e.endpoints() {
                map.entry(v).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                });
            }
        }
        let mut out = Self::new();
        for (&e, &m) in &self.entries {
            let e = Edge::new(map[&e.a], map[&e.b]).expect("renaming preserves distinctness");
            out.add_edge(e, m);
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    /// Comma-separated `"a-b:mult"` terms, multiplicity omitted when 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, m) in self.support() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}:{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ev = ExponentVector::new();
        for term in s.split(',') {
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            let (edge, mult) = match term.split_once(':') {
                Some((e, m)) => {
                    let m: u32 = m
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid multiplicity in '{term}'")))?;
                    (e, m)
                }
                None => (term, 1),
            };
            if mult == 0 {
                return Err(Error::Parse(format!("zero multiplicity in '{term}'")));
            }
            ev.add_edge(edge.parse()?, mult);
        }
        Ok(ev)
    }
}

/// `alpha! = prod_e alpha_e!` over the stored multiplicities.
pub fn exponent_factorial(alpha: &ExponentVector) -> BigInt {
    let mut out = BigInt::one();
    for (_, m) in alpha.support() {
        for i in 2..=m {
            out *= i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn edge_sorts_endpoints_and_rejects_loops() {
        assert_eq!(Edge::new(5, 2).unwrap(), e(2, 5));
        assert!(Edge::new(3, 3).is_err());
        assert!(Edge::new(0, 1).is_err());
    }

    #[test]
    fn lex_index_examples() {
        assert_eq!(lex_index(e(1, 2), 4).unwrap(), 0);
        assert_eq!(lex_index(e(3, 4), 4).unwrap(), 5);
        // Position of {2,4} among all 2-subsets of [4] listed lexicographically.
        let all = edges_of(4);
        let expected = all.iter().position(|&x| x == e(2, 4)).unwrap();
        assert_eq!(expected, 4);
        assert_eq!(lex_index(e(2, 4), 4).unwrap(), 4);
        assert!(lex_index(e(2, 5), 4).is_err());
    }

    #[test]
    fn lex_index_bijective_up_to_20() {
        for n in 2..=20u32 {
            let all = edges_of(n);
            assert_eq!(all.len(), (n as usize) * (n as usize - 1) / 2);
            for (i, &edge) in all.iter().enumerate() {
                assert_eq!(lex_index(edge, n).unwrap(), i);
            }
        }
    }

    #[test]
    fn union_size_examples() {
        assert_eq!(union_size(&[e(1, 2)]).unwrap(), 2);
        assert_eq!(union_size(&[e(1, 2), e(1, 3)]).unwrap(), 3);
        assert_eq!(union_size(&[e(1, 2), e(3, 4), e(1, 3)]).unwrap(), 4);
        assert!(union_size(&[]).is_err());
    }

    #[test]
    fn apply_perm_examples() {
        let id = Permutation::identity(5);
        assert_eq!(apply_perm(&id, e(2, 5)).unwrap(), e(2, 5));
        let swap = Permutation::transposition(4, 3, 4).unwrap();
        assert_eq!(apply_perm(&swap, e(1, 3)).unwrap(), e(1, 4));
        let cyc = Permutation::cycle(5, &[3, 4, 5]).unwrap();
        assert_eq!(apply_perm(&cyc, e(3, 4)).unwrap(), e(4, 5));
        assert!(apply_perm(&swap, e(1, 5)).is_err());
    }

    #[test]
    fn exponent_factorial_examples() {
        let a = ExponentVector::from_pairs([(e(1, 2), 1), (e(1, 3), 1)]);
        assert_eq!(exponent_factorial(&a), BigInt::from(1));
        let b = ExponentVector::from_pairs([(e(1, 2), 2)]);
        assert_eq!(exponent_factorial(&b), BigInt::from(2));
        let c = ExponentVector::from_pairs([(e(1, 2), 3), (e(3, 4), 2)]);
        assert_eq!(exponent_factorial(&c), BigInt::from(12));
    }

    #[test]
    fn exponent_vector_text_format() {
        let a = ExponentVector::from_pairs([(e(1, 3), 1), (e(1, 2), 1)]);
        assert_eq!(a.to_string(), "1-2,1-3");
        let b = ExponentVector::from_pairs([(e(1, 2), 2)]);
        assert_eq!(b.to_string(), "1-2:2");
        assert_eq!("1-2,1-3".parse::<ExponentVector>().unwrap(), a);
        assert_eq!("1-2:2".parse::<ExponentVector>().unwrap(), b);
        assert!("1-2:0".parse::<ExponentVector>().is_err());
    }

    #[test]
    fn minus_removes_zero_multiplicities() {
        let a = ExponentVector::from_pairs([(e(1, 2), 1), (e(1, 3), 2)]);
        let b = a.minus(e(1, 2)).unwrap();
        assert_eq!(b.multiplicity(e(1, 2)), 0);
        assert_eq!(b.support_edges(), vec![e(1, 3)]);
        assert!(b.minus(e(1, 2)).is_none());
        assert_eq!(b.degree(), 2);
    }

    #[test]
    fn relabel_normalization() {
        let a = ExponentVector::from_pairs([(e(5, 7), 1), (e(5, 9), 2)]);
        let n = a.relabel_normalized();
        assert_eq!(n.to_string(), "1-2,1-3:2");
        // Already-normalized vectors are fixed points.
        assert_eq!(n.relabel_normalized(), n);
    }

    fn arb_perm(n: u32) -> impl Strategy<Value = Permutation> {
        Just(n).prop_perturb(move |n, mut rng| {
            let mut images: Vec<u32> = (1..=n).collect();
            for i in (1..images.len()).rev() {
                let j = (rng.next_u32() as usize) % (i + 1);
                images.swap(i, j);
            }
            Permutation::new(images).unwrap()
        })
    }

    proptest! {
        #[test]
        fn compose_matches_sequential_application(
            sigma in arb_perm(9),
            tau in arb_perm(9),
            a in 1u32..9,
            off in 1u32..8,
        ) {
            let b = (a + off - 1) % 9 + 1;
            prop_assume!(a != b);
            let edge = Edge::new(a, b).unwrap();
            let lhs = apply_perm(&sigma.compose(&tau).unwrap(), edge).unwrap();
            let rhs = apply_perm(&sigma, apply_perm(&tau, edge).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn union_size_is_permutation_invariant(sigma in arb_perm(10), seed in any::<u64>()) {
            let mut state = seed | 1;
            let mut edges = Vec::new();
            for _ in 0..5 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as u32 % 10 + 1;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (state >> 33) as u32 % 10 + 1;
                if a != b {
                    edges.push(Edge::new(a, b).unwrap());
                }
            }
            prop_assume!(!edges.is_empty());
            let mapped: Vec<Edge> = edges
                .iter()
                .map(|&e| apply_perm(&sigma, e).unwrap())
                .collect();
            prop_assert_eq!(union_size(&mapped).unwrap(), union_size(&edges).unwrap());
        }
    }
}
