//! Exact extremal numbers `ex(n, H)` for very small `n`.
//!
//! Two searches share a bitmask kernel that decides whether adding one edge
//! to an `H`-free graph creates a copy of `H` through that edge:
//!
//! * `Exhaustive` walks all labeled graphs on `n` vertices edge by edge with
//!   an edge-count bound.
//! * `Pruned` grows `H`-free graphs one edge per level and keeps a single
//!   representative per isomorphism class (colour-refinement buckets plus an
//!   exact isomorphism test inside each bucket).

use std::collections::HashMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Adjacency, GeneralGraph, VertexId};

/// Largest host order for [`ExtremalMode::Exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 10;
/// Largest host order for [`ExtremalMode::Pruned`].
pub const PRUNED_LIMIT: usize = 14;
/// Largest forbidden graph the bitmask kernel accepts.
pub const PATTERN_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremalMode {
    Exhaustive,
    Pruned,
}

impl ExtremalMode {
    pub fn limit(self) -> usize {
        match self {
            ExtremalMode::Exhaustive => EXHAUSTIVE_LIMIT,
            ExtremalMode::Pruned => PRUNED_LIMIT,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("n = {n} exceeds the {mode:?} limit of {limit}")]
    TooLarge { n: usize, limit: usize, mode: ExtremalMode },
    #[error("forbidden graph has no edges")]
    EmptyPattern,
    #[error("forbidden graph has {0} vertices; at most {PATTERN_LIMIT} are supported")]
    PatternTooLarge(usize),
}

fn serialize_edges<S: Serializer>(g: &GeneralGraph, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(g.edge_list())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub pattern: String,
    pub value: usize,
    /// An `H`-free graph with `value` edges, serialized as its edge list.
    #[serde(serialize_with = "serialize_edges")]
    pub witness: GeneralGraph,
    pub mode: ExtremalMode,
    /// Search nodes (exhaustive) or graphs generated (pruned).
    pub examined: u64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct SmallGraph {
    rows: Vec<u16>,
}

impl SmallGraph {
    fn empty(n: usize) -> Self {
        Self { rows: vec![0; n] }
    }

    fn from_graph<G: Adjacency + ?Sized>(g: &G) -> Self {
        let rows = (0..g.order() as VertexId)
            .map(|v| g.neighbours(v).iter().fold(0u16, |m, &w| m | 1 << w))
            .collect();
        Self { rows }
    }

    fn order(&self) -> usize {
        self.rows.len()
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    fn degree(&self, v: usize) -> u32 {
        self.rows[v].count_ones()
    }

    fn add(&mut self, u: usize, v: usize) {
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    fn to_graph(&self) -> GeneralGraph {
        let n = self.order();
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| self.has(u, v)).collect();
        GeneralGraph::new(n, &edges).expect("bitmask rows describe a simple graph")
    }
}

/// Search order for copies of `H` whose first two vertices are fixed.
struct RootedPlan {
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent in `H`.
    back: Vec<Vec<usize>>,
}

impl RootedPlan {
    fn new(h: &SmallGraph, x: usize, y: usize) -> Self {
        let k = h.order();
        let mut order = vec![x, y];
        let mut placed = vec![false; k];
        placed[x] = true;
        placed[y] = true;
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let back = order.iter().filter(|&&w| h.has(v, w)).count();
                    (back, h.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let back = (0..k).map(|i| (0..i).filter(|&j| h.has(order[i], order[j])).collect()).collect();
        Self { order, back }
    }

    /// Is there an injective edge-preserving map from `h` into `g` sending the
    /// plan's first two vertices to `u` and `v`?
    fn extends(&self, h: &SmallGraph, g: &SmallGraph, u: usize, v: usize) -> bool {
        let (x, y) = (self.order[0], self.order[1]);
        if u == v || g.degree(u) < h.degree(x) || g.degree(v) < h.degree(y) {
            return false;
        }
        if h.has(x, y) && !g.has(u, v) {
            return false;
        }
        let mut image = vec![0usize; self.order.len()];
        image[0] = u;
        image[1] = v;
        self.place(h, g, 2, &mut image, 1 << u | 1 << v)
    }

    fn place(&self, h: &SmallGraph, g: &SmallGraph, depth: usize, image: &mut [usize], used: u16) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let all = if g.order() == 16 { u16::MAX } else { (1u16 << g.order()) - 1 };
        let mut candidates = self.back[depth].iter().fold(all, |m, &j| m & g.rows[image[j]]) & !used;
        let need = h.degree(self.order[depth]);
        while candidates != 0 {
            let c = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if g.degree(c) < need {
                continue;
            }
            image[depth] = c;
            if self.place(h, g, depth + 1, image, used | 1 << c) {
                return true;
            }
        }
        false
    }
}

/// `H` together with one rooted plan per orbit of directed edges.
struct Forbidden {
    h: SmallGraph,
    plans: Vec<RootedPlan>,
}

impl Forbidden {
    fn new(h: &GeneralGraph) -> Result<Self, ExtremalError> {
        if h.order() > PATTERN_LIMIT {
            return Err(ExtremalError::PatternTooLarge(h.order()));
        }
        if h.edge_count() == 0 {
            return Err(ExtremalError::EmptyPattern);
        }
        let h = SmallGraph::from_graph(h);
        let directed: Vec<(usize, usize)> = (0..h.order())
            .flat_map(|x| (0..h.order()).map(move |y| (x, y)))
            .filter(|&(x, y)| h.has(x, y))
            .collect();
        let mut plans: Vec<RootedPlan> = Vec::new();
        // A directed edge already reachable from a chosen representative by an
        // automorphism needs no plan of its own.
        for &(x, y) in &directed {
            if !plans.iter().any(|p| p.extends(&h, &h, x, y)) {
                plans.push(RootedPlan::new(&h, x, y));
            }
        }
        Ok(Self { h, plans })
    }

    /// Would adding `uv` to the `H`-free graph `g` create a copy of `H`?
    fn closes_copy(&self, g: &mut SmallGraph, u: usize, v: usize) -> bool {
        g.add(u, v);
        let hit = self.plans.iter().any(|p| p.extends(&self.h, g, u, v));
        g.remove(u, v);
        hit
    }
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Largest number of edges in an `n`-vertex graph with no subgraph
/// isomorphic to `forbidden`.
pub fn extremal_number(
    n: usize,
    forbidden: &GeneralGraph,
    pattern: &str,
    mode: ExtremalMode,
) -> Result<ExtremalRecord, ExtremalError> {
    if n > mode.limit() {
        return Err(ExtremalError::TooLarge { n, limit: mode.limit(), mode });
    }
    let forbidden = Forbidden::new(forbidden)?;
    let (witness, examined) = match mode {
        ExtremalMode::Exhaustive => exhaustive(n, &forbidden),
        ExtremalMode::Pruned => pruned(n, &forbidden),
    };
    Ok(ExtremalRecord {
        n,
        pattern: pattern.to_owned(),
        value: witness.edge_count(),
        witness: witness.to_graph(),
        mode,
        examined,
    })
}

struct Exhaustive<'a> {
    forbidden: &'a Forbidden,
    pairs: Vec<(usize, usize)>,
    best: SmallGraph,
    best_edges: usize,
    nodes: u64,
}

impl Exhaustive<'_> {
    fn search(&mut self, g: &mut SmallGraph, idx: usize, edges: usize) {
        self.nodes += 1;
        if edges + (self.pairs.len() - idx) <= self.best_edges {
            return;
        }
        if idx == self.pairs.len() {
            self.best = g.clone();
            self.best_edges = edges;
            return;
        }
        let (u, v) = self.pairs[idx];
        if !self.forbidden.closes_copy(g, u, v) {
            g.add(u, v);
            self.search(g, idx + 1, edges + 1);
            g.remove(u, v);
        }
        self.search(g, idx + 1, edges);
    }
}

fn exhaustive(n: usize, forbidden: &Forbidden) -> (SmallGraph, u64) {
    let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    if forbidden.h.order() > n {
        let mut complete = SmallGraph::empty(n);
        pairs.iter().for_each(|&(u, v)| complete.add(u, v));
        return (complete, 1);
    }
    let mut search = Exhaustive { forbidden, pairs, best: SmallGraph::empty(n), best_edges: 0, nodes: 0 };
    search.search(&mut SmallGraph::empty(n), 0, 0);
    (search.best, search.nodes)
}

/// Stable colour refinement started from degrees. Colour ids are assigned by
/// sorting signatures, so isomorphic graphs receive matching colourings.
fn refine(g: &SmallGraph) -> Vec<u32> {
    let n = g.order();
    let mut colours: Vec<u32> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = 0;
    loop {
        let signatures: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = (0..n).filter(|&w| g.has(v, w)).map(|w| colours[w]).collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let mut distinct = signatures.clone();
        distinct.sort();
        distinct.dedup();
        colours = signatures.iter().map(|s| distinct.binary_search(s).unwrap() as u32).collect();
        if distinct.len() == classes {
            return colours;
        }
        classes = distinct.len();
    }
}

fn invariant(g: &SmallGraph, colours: &[u32]) -> Vec<u32> {
    let n = g.order();
    let mut key: Vec<u32> = colours.to_vec();
    key.sort_unstable();
    let mut edge_colours: Vec<u32> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| g.has(u, v))
        .map(|(u, v)| {
            let (a, b) = (colours[u].min(colours[v]), colours[u].max(colours[v]));
            a * n as u32 + b
        })
        .collect();
    edge_colours.sort_unstable();
    key.extend(edge_colours);
    key
}

/// Exact isomorphism test respecting the refined colourings.
fn isomorphic(g1: &SmallGraph, c1: &[u32], g2: &SmallGraph, c2: &[u32]) -> bool {
    let n = g1.order();
    let mut order: Vec<usize> = (0..n).collect();
    let class_size = |c: u32| c1.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&v| (class_size(c1[v]), std::cmp::Reverse(g1.degree(v)), v));
    let mut image = vec![usize::MAX; n];
    fn go(
        depth: usize,
        order: &[usize],
        image: &mut [usize],
        used: u16,
        g1: &SmallGraph,
        c1: &[u32],
        g2: &SmallGraph,
        c2: &[u32],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..g2.order() {
            if used >> w & 1 == 1 || c2[w] != c1[v] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&x| g1.has(v, x) == g2.has(w, image[x]));
            if !consistent {
                continue;
            }
            image[v] = w;
            if go(depth + 1, order, image, used | 1 << w, g1, c1, g2, c2) {
                return true;
            }
        }
        image[v] = usize::MAX;
        false
    }
    go(0, &order, &mut image, 0, g1, c1, g2, c2)
}

fn pruned(n: usize, forbidden: &Forbidden) -> (SmallGraph, u64) {
    let mut level = vec![SmallGraph::empty(n)];
    let mut examined = 1u64;
    loop {
        let mut next: Vec<(SmallGraph, Vec<u32>)> = Vec::new();
        let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for g in &level {
            let mut g = g.clone();
            for u in 0..n {
                for v in u + 1..n {
                    if g.has(u, v) || forbidden.closes_copy(&mut g, u, v) {
                        continue;
                    }
                    examined += 1;
                    let mut child = g.clone();
                    child.add(u, v);
                    let colours = refine(&child);
                    let bucket = buckets.entry(invariant(&child, &colours)).or_default();
                    if bucket.iter().any(|&i| isomorphic(&next[i].0, &next[i].1, &child, &colours)) {
                        continue;
                    }
                    bucket.push(next.len());
                    next.push((child, colours));
                }
            }
        }
        if next.is_empty() {
            let witness = level.swap_remove(0);
            return (witness, examined);
        }
        level = next.into_iter().map(|(g, _)| g).collect();
    }
}

/// `C(n, 2)` when `H` has more vertices than the host; shared by the callers'
/// sanity checks.
pub fn trivial_value(n: usize, forbidden: &GeneralGraph) -> Option<usize> {
    (forbidden.order() > n).then(|| binom2(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::iso::contains_subgraph;
    use crate::pattern::subdivide;

    fn c6() -> GeneralGraph {
        GeneralGraph::cycle(6)
    }

    #[test]
    fn small_hosts_are_complete() {
        for n in 1..6 {
            for mode in [ExtremalMode::Exhaustive, ExtremalMode::Pruned] {
                let r = extremal_number(n, &c6(), "C6", mode).unwrap();
                assert_eq!(r.value, binom2(n));
                assert_eq!(trivial_value(n, &c6()), Some(r.value));
            }
        }
    }

    #[test]
    fn triangle_free_is_mantel() {
        // ex(n, K3) = floor(n^2 / 4).
        for n in 2..=8 {
            for mode in [ExtremalMode::Exhaustive, ExtremalMode::Pruned] {
                let r = extremal_number(n, &GeneralGraph::complete(3), "K3", mode).unwrap();
                assert_eq!(r.value, n * n / 4, "n = {n}, {mode:?}");
            }
        }
    }

    #[test]
    fn matching_number_bound() {
        // ex(n, 2K2) = max(3, n - 1) for n >= 4: a triangle or a star.
        let two_edges = GeneralGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        for n in 4..=7 {
            let r = extremal_number(n, &two_edges, "2K2", ExtremalMode::Exhaustive).unwrap();
            assert_eq!(r.value, 3.max(n - 1));
        }
    }

    #[test]
    fn modes_agree_and_witnesses_are_free() {
        let patterns = [
            ("C4", GeneralGraph::cycle(4)),
            ("C6", c6()),
            ("K4", GeneralGraph::complete(4)),
            ("K3'", subdivide(&GeneralGraph::complete(3))),
        ];
        for (name, h) in &patterns {
            for n in 4..=7 {
                let a = extremal_number(n, h, name, ExtremalMode::Exhaustive).unwrap();
                let b = extremal_number(n, h, name, ExtremalMode::Pruned).unwrap();
                assert_eq!(a.value, b.value, "{name} n = {n}");
                for r in [&a, &b] {
                    assert_eq!(r.witness.edge_count(), r.value);
                    assert!(!contains_subgraph(&r.witness, h, None).is_yes());
                }
            }
        }
    }

    #[test]
    fn limits_and_bad_patterns() {
        assert!(matches!(
            extremal_number(11, &c6(), "C6", ExtremalMode::Exhaustive),
            Err(ExtremalError::TooLarge { limit: 10, .. })
        ));
        assert!(matches!(
            extremal_number(15, &c6(), "C6", ExtremalMode::Pruned),
            Err(ExtremalError::TooLarge { limit: 14, .. })
        ));
        assert_eq!(
            extremal_number(5, &GeneralGraph::empty(3), "E3", ExtremalMode::Pruned),
            Err(ExtremalError::EmptyPattern)
        );
    }

    #[test]
    fn cycle_has_one_edge_orbit() {
        assert_eq!(Forbidden::new(&c6()).unwrap().plans.len(), 1);
        // A path on three vertices: both edges are swapped by the reflection,
        // but each edge has two orientations.
        let p3 = GeneralGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(Forbidden::new(&p3).unwrap().plans.len(), 2);
    }

    #[test]
    fn refinement_is_label_invariant() {
        let g = SmallGraph::from_graph(&GeneralGraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap());
        let h = SmallGraph::from_graph(&GeneralGraph::new(6, &[(5, 4), (4, 3), (3, 5), (0, 2)]).unwrap());
        let (cg, ch) = (refine(&g), refine(&h));
        assert_eq!(invariant(&g, &cg), invariant(&h, &ch));
        assert!(isomorphic(&g, &cg, &h, &ch));
        let k = SmallGraph::from_graph(&GeneralGraph::new(6, &[(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap());
        let ck = refine(&k);
        assert!(invariant(&g, &cg) != invariant(&k, &ck) || !isomorphic(&g, &cg, &k, &ck));
    }
}
