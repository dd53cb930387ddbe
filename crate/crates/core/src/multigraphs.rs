//! Multigraph enumeration up to isomorphism and canonical labeling.
//!
//! A multigraph here is an unordered multiset of edges without isolated
//! vertices, with vertex set compacted to `[k]`. The canonical form of a
//! class is the relabeling whose sorted edge list (with repetition) is
//! lexicographically least; two multigraphs are isomorphic exactly when
//! their canonical forms are identical.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::combinatorics::{exponent_factorial, Edge, ExponentVector};
use crate::error::Error;
use crate::Result;

/// A multiset of edges covering `[k]`, stored sorted with repetition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multigraph {
    edges: Vec<Edge>,
    k: u32,
}

impl Multigraph {
    /// Builds a multigraph with an explicit vertex count, checking that every
    /// vertex of `[k]` is covered by at least one edge.
    pub fn with_vertex_count(mut edges: Vec<Edge>, k: u32) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let mut covered = vec![false; k as usize];
        for e in &edges {
            if e.b() > k {
                return Err(Error::EndpointExceedsN { endpoint: e.b(), n: k });
            }
            covered[(e.a() - 1) as usize] = true;
            covered[(e.b() - 1) as usize] = true;
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::IsolatedVertex(v as u32 + 1));
        }
        edges.sort();
        Ok(Multigraph { edges, k })
    }

    /// Builds from an edge list with arbitrary labels, compacting the labels
    /// to `[k]` in increasing order. Does not canonicalize.
    pub fn from_edges(edges: &[Edge]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let mut labels: Vec<u32> = edges.iter().flat_map(|e| e.endpoints()).collect();
        labels.sort_unstable();
        labels.dedup();
        let map: BTreeMap<u32, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32 + 1))
            .collect();
        let compacted: Vec<Edge> = edges
            .iter()
            .map(|e| Edge::new(map[&e.a()], map[&e.b()]).expect("compaction keeps endpoints distinct"))
            .collect();
        Multigraph::with_vertex_count(compacted, labels.len() as u32)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge multiplicities in lexicographic edge order.
    pub fn multiplicities(&self) -> Vec<(Edge, u32)> {
        let mut out: Vec<(Edge, u32)> = Vec::new();
        for &e in &self.edges {
            match out.last_mut() {
                Some((last, m)) if *last == e => *m += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    /// The exponent vector `gamma` of this multigraph.
    pub fn exponent_vector(&self) -> ExponentVector {
        ExponentVector::from_pairs(self.multiplicities())
    }

    /// `gamma! = prod_e gamma_e!`, the scaling constant of the pipeline.
    pub fn gamma_factorial(&self) -> BigInt {
        exponent_factorial(&self.exponent_vector())
    }

    /// Whether this is the perfect matching on its edge count (all edges
    /// pairwise disjoint).
    pub fn is_matching(&self) -> bool {
        self.k as usize == 2 * self.edges.len()
    }

    /// Canonical representative of the isomorphism class.
    pub fn canonical_form(&self) -> Multigraph {
        canonical_form(&self.edges).expect("valid multigraph canonicalizes")
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical_form()
    }
}

impl fmt::Display for Multigraph {
    /// Comma-separated edge list with repetition, e.g. `"1-2,1-2,3-4"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.edges {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let edges: Vec<Edge> = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse())
            .collect::<Result<_>>()?;
        Multigraph::from_edges(&edges)
    }
}

/// Canonical form of an arbitrary edge list: relabels the covered vertices to
/// `[k]` so that the sorted edge list is lexicographically least over all
/// bijections.
///
/// The search assigns new labels `1, 2, ...` one vertex at a time. Branches
/// are cut with a sound lower bound: every not-yet-determined edge is scored
/// with the smallest pair it could still receive, and the merged bound list
/// is compared against the best complete labeling found so far. Degree-class
/// refinement orders the candidates so the greedy first descent is already a
/// strong incumbent.
pub fn canonical_form(edges: &[Edge]) -> Result<Multigraph> {
    let compact = Multigraph::from_edges(edges)?;
    let k = compact.k as usize;
    let mults = compact.multiplicities();

    let mut adj = vec![vec![0u32; k]; k];
    for &(e, m) in &mults {
        adj[(e.a() - 1) as usize][(e.b() - 1) as usize] = m;
        adj[(e.b() - 1) as usize][(e.a() - 1) as usize] = m;
    }
    let classes = refine_classes(&adj);

    let mut search = CanonSearch {
        k,
        total_edges: compact.edges.len(),
        adj,
        classes,
        label_of: vec![0u32; k],
        best: None,
    };
    search.descend(0);

    let best = search.best.expect("search always reaches a leaf");
    let edges: Vec<Edge> = best
        .iter()
        .map(|&(a, b)| Edge::new(a, b).expect("labels are distinct"))
        .collect();
    Multigraph::with_vertex_count(edges, compact.k)
}

/// Iterated degree-multiset refinement; returns one class id per vertex.
/// Used only to order the search, never to cut branches.
fn refine_classes(adj: &[Vec<u32>]) -> Vec<u32> {
    let k = adj.len();
    let mut classes = vec![0u32; k];
    loop {
        let mut sigs: Vec<(Vec<(u32, u32)>, u32, usize)> = (0..k)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = (0..k)
                    .filter(|&u| adj[v][u] > 0)
                    .map(|u| (adj[v][u], classes[u]))
                    .collect();
                nb.sort_unstable();
                (nb, classes[v], v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0u32; k];
        let mut id = 0u32;
        for i in 0..k {
            if i > 0 && (&sigs[i].0, sigs[i].1) != (&sigs[i - 1].0, sigs[i - 1].1) {
                id += 1;
            }
            next[sigs[i].2] = id;
        }
        if next == classes {
            return classes;
        }
        classes = next;
    }
}

struct CanonSearch {
    k: usize,
    total_edges: usize,
    adj: Vec<Vec<u32>>,
    classes: Vec<u32>,
    /// new label (1-based) per original vertex; 0 = unassigned
    label_of: Vec<u32>,
    best: Option<Vec<(u32, u32)>>,
}

impl CanonSearch {
    fn descend(&mut self, assigned: usize) {
        if assigned == self.k {
            let leaf = self.bound_list(assigned);
            if self.best.as_ref().is_none_or(|b| leaf < *b) {
                self.best = Some(leaf);
            }
            return;
        }
        let next_label = assigned as u32 + 1;
        let mut candidates: Vec<(Vec<(u32, u32)>, u32, usize)> = Vec::new();
        for v in 0..self.k {
            if self.label_of[v] != 0 {
                continue;
            }
            self.label_of[v] = next_label;
            let bound = self.bound_list(assigned + 1);
            self.label_of[v] = 0;
            candidates.push((bound, self.classes[v], v));
        }
        candidates.sort();
        for (bound, _, v) in candidates {
            // Re-check against the incumbent, which may have improved while
            // earlier siblings were explored. Ties cannot improve: skip.
            if self.best.as_ref().is_some_and(|b| bound >= *b) {
                continue;
            }
            self.label_of[v] = next_label;
            self.descend(assigned + 1);
            self.label_of[v] = 0;
        }
    }

    /// Sorted lower-bound list for the current partial labeling: determined
    /// edges exactly, others by the smallest pair they could still take.
    fn bound_list(&self, assigned: usize) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.total_edges);
        let free_lo = assigned as u32 + 1;
        for u in 0..self.k {
            for v in (u + 1)..self.k {
                let m = self.adj[u][v];
                if m == 0 {
                    continue;
                }
                let (lu, lv) = (self.label_of[u], self.label_of[v]);
                let pair = match (lu, lv) {
                    (0, 0) => (free_lo, free_lo + 1),
                    (a, 0) | (0, a) => (a, free_lo),
                    (a, b) => (a.min(b), a.max(b)),
                };
                for _ in 0..m {
                    out.push(pair);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// All isomorphism classes of multigraphs with exactly `m_edges` edges and no
/// isolated vertices, each in canonical form, ordered by `(k, edge list)`.
///
/// Simple underlying graphs are generated by augmentation (one edge at a
/// time, deduplicating canonical forms), then edge multiplicities are
/// distributed over each underlying graph with isomorph rejection.
pub fn enumerate_multigraphs(m_edges: u32) -> Vec<Multigraph> {
    assert!(m_edges >= 1, "need at least one edge");
    let simple_by_level = enumerate_simple_graphs(m_edges);

    let mut seen: HashSet<Multigraph> = HashSet::new();
    for level in &simple_by_level {
        for g in level {
            let support: Vec<Edge> = g.multiplicities().iter().map(|&(e, _)| e).collect();
            let t = support.len() as u32;
            if t > m_edges {
                continue;
            }
            for comp in compositions(m_edges, t) {
                let mut edges = Vec::with_capacity(m_edges as usize);
                for (i, &e) in support.iter().enumerate() {
                    for _ in 0..comp[i] {
                        edges.push(e);
                    }
                }
                let canon = canonical_form(&edges).expect("composition covers all vertices");
                seen.insert(canon);
            }
        }
    }

    let mut out: Vec<Multigraph> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.k, &a.edges).cmp(&(b.k, &b.edges)));
    out
}

/// Simple graphs (no repeated edges, no isolated vertices) with 1..=max
/// edges, up to isomorphism, grouped by edge count.
fn enumerate_simple_graphs(max_edges: u32) -> Vec<Vec<Multigraph>> {
    let seed = Multigraph::with_vertex_count(vec![Edge::new(1, 2).unwrap()], 2).unwrap();
    let mut levels: Vec<Vec<Multigraph>> = vec![vec![seed]];
    for _ in 1..max_edges {
        let mut next: HashSet<Multigraph> = HashSet::new();
        for g in levels.last().unwrap() {
            let k = g.k;
            let present: HashSet<Edge> = g.edges.iter().copied().collect();
            let mut candidates: Vec<Edge> = Vec::new();
            for a in 1..=k {
                for b in (a + 1)..=k {
                    let e = Edge::new(a, b).unwrap();
                    if !present.contains(&e) {
                        candidates.push(e);
                    }
                }
            }
            for v in 1..=k {
                candidates.push(Edge::new(v, k + 1).unwrap());
            }
            candidates.push(Edge::new(k + 1, k + 2).unwrap());

            for e in candidates {
                let mut edges = g.edges.clone();
                edges.push(e);
                next.insert(canonical_form(&edges).expect("augmented graph is valid"));
            }
        }
        let mut level: Vec<Multigraph> = next.into_iter().collect();
        level.sort_by(|a, b| (a.k, &a.edges).cmp(&(b.k, &b.edges)));
        levels.push(level);
    }
    levels
}

/// Compositions of `total` into exactly `parts` positive integers.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=(total - parts + 1) {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && total >= parts {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}
