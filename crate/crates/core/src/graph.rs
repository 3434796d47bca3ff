//! Host graph representations.
//!
//! Vertices are dense `u32` indices. A [`BipartiteGraph`] stores part `A` as
//! `0..n_a` and part `B` as `n_a..n_a + n_b`, so part membership is a single
//! comparison. Both graph types are immutable once built and keep every
//! neighbour list sorted and duplicate-free.

use std::collections::VecDeque;
use std::ops::Range;

use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint out of range")]
    InvalidEdge(usize, usize),
    #[error("edge ({0}, {1}) does not cross the bipartition")]
    SamePartEdge(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid vertex pair ({0}, {1}): need two distinct vertices of part A")]
    InvalidPair(VertexId, VertexId),
    #[error("vertex {0} is not in part A")]
    InvalidSubset(VertexId),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid pattern parameters s={s}, t={t} (need s >= 1, t >= 3)")]
    InvalidParams { s: usize, t: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Read access shared by every graph type in the crate.
pub trait Adjacency {
    fn order(&self) -> usize;

    fn neighbours(&self, v: VertexId) -> &[VertexId];

    fn degree(&self, v: VertexId) -> usize {
        self.neighbours(v).len()
    }

    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if u as usize >= self.order() || v as usize >= self.order() {
            return false;
        }
        let (x, y) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbours(x).binary_search(&y).is_ok()
    }

    fn edge_count(&self) -> usize {
        (0..self.order() as VertexId).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    fn edge_list(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.order() as VertexId {
            for &v in self.neighbours(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

fn build_adjacency(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Vec<Vec<VertexId>>, GraphError> {
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        if u >= n || v >= n {
            return Err(GraphError::InvalidEdge(u, v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        adj[u].push(v as VertexId);
        adj[v].push(u as VertexId);
    }
    for (u, list) in adj.iter_mut().enumerate() {
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(u, w[0] as usize));
        }
    }
    Ok(adj)
}

/// A simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralGraph {
    adj: Vec<Vec<VertexId>>,
}

impl GeneralGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Ok(Self { adj: build_adjacency(n, edges.iter().copied())? })
    }

    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges).expect("complete graph edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges).expect("cycle edges are valid")
    }

    /// `K_{a,b}` with the `a`-side first.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<_> = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).collect();
        Self::new(a + b, &edges).expect("complete bipartite edges are valid")
    }

    /// Copy of the graph with one edge removed. Panics if the edge is absent.
    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Self {
        let mut adj = self.adj.clone();
        let pu = adj[u as usize].binary_search(&v).expect("edge present");
        adj[u as usize].remove(pu);
        let pv = adj[v as usize].binary_search(&u).expect("edge present");
        adj[v as usize].remove(pv);
        Self { adj }
    }

    /// Copy of the graph with one extra edge. Panics if it is a loop or already present.
    pub fn with_edge(&self, u: VertexId, v: VertexId) -> Self {
        assert_ne!(u, v);
        let mut adj = self.adj.clone();
        let pu = adj[u as usize].binary_search(&v).expect_err("edge absent");
        adj[u as usize].insert(pu, v);
        let pv = adj[v as usize].binary_search(&u).expect_err("edge absent");
        adj[v as usize].insert(pv, u);
        Self { adj }
    }

    /// Two-colours the graph if it is bipartite; `None` otherwise.
    pub fn two_colouring(&self) -> Option<Vec<u8>> {
        let n = self.order();
        let mut colour = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if colour[root] != u8::MAX {
                continue;
            }
            colour[root] = 0;
            queue.push_back(root as VertexId);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbours(v) {
                    if colour[w as usize] == u8::MAX {
                        colour[w as usize] = 1 - colour[v as usize];
                        queue.push_back(w);
                    } else if colour[w as usize] == colour[v as usize] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    /// Connected components as vertex lists, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root as VertexId];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in self.neighbours(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl Adjacency for GeneralGraph {
    fn order(&self) -> usize {
        self.adj.len()
    }

    fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }
}

/// A bipartite graph with parts `A = 0..n_a` and `B = n_a..n_a+n_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_a: usize,
    n_b: usize,
    adj: Vec<Vec<VertexId>>,
}

impl BipartiteGraph {
    /// Builds from edges given as `(a_index, b_index)`, both 0-based within their part.
    pub fn new(n_a: usize, n_b: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        for &(a, b) in edges {
            if a >= n_a || b >= n_b {
                return Err(GraphError::InvalidEdge(a, b));
            }
        }
        match build_adjacency(n_a + n_b, edges.iter().map(|&(a, b)| (a, n_a + b))) {
            Ok(adj) => Ok(Self { n_a, n_b, adj }),
            Err(GraphError::DuplicateEdge(u, v)) => {
                let (a, b) = if u < n_a { (u, v) } else { (v, u) };
                Err(GraphError::DuplicateEdge(a, b - n_a))
            }
            Err(e) => Err(e),
        }
    }

    /// Builds from edges given in global numbering (B offset by `n_a`), either orientation.
    pub fn from_global_edges(
        n_a: usize,
        n_b: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let n = n_a + n_b;
        let mut local = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::InvalidEdge(u, v));
            }
            let (a, b) = match (u < n_a, v < n_a) {
                (true, false) => (u, v),
                (false, true) => (v, u),
                _ => return Err(GraphError::SamePartEdge(u, v)),
            };
            local.push((a, b - n_a));
        }
        Self::new(n_a, n_b, &local)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn part_a(&self) -> Range<VertexId> {
        0..self.n_a as VertexId
    }

    pub fn part_b(&self) -> Range<VertexId> {
        self.n_a as VertexId..(self.n_a + self.n_b) as VertexId
    }

    pub fn in_a(&self, v: VertexId) -> bool {
        (v as usize) < self.n_a
    }

    pub fn in_b(&self, v: VertexId) -> bool {
        (v as usize) >= self.n_a && (v as usize) < self.n_a + self.n_b
    }

    /// `½|B| ≤ |A| ≤ 2|B|`.
    pub fn is_balanced(&self) -> bool {
        2 * self.n_a >= self.n_b && self.n_a <= 2 * self.n_b
    }

    /// Minimum degree over part A, or `None` when A is empty.
    pub fn min_degree_a(&self) -> Option<usize> {
        self.part_a().map(|v| self.degree(v)).min()
    }

    /// Number of common neighbours of two distinct A-vertices.
    pub fn codegree(&self, u: VertexId, v: VertexId) -> Result<usize, GraphError> {
        if u == v || !self.in_a(u) || !self.in_a(v) {
            return Err(GraphError::InvalidPair(u, v));
        }
        Ok(sorted_intersection_count(self.neighbours(u), self.neighbours(v)))
    }

    /// The same graph with no bipartition attached.
    pub fn to_general(&self) -> GeneralGraph {
        GeneralGraph { adj: self.adj.clone() }
    }

    /// Subgraph induced by the given A- and B-vertices (global ids, any order).
    ///
    /// Returns the subgraph together with `origin`, mapping each new vertex id
    /// to its id in `self`. New ids keep the relative order of the kept vertices.
    pub fn induced(&self, keep_a: &[VertexId], keep_b: &[VertexId]) -> (Self, Vec<VertexId>) {
        let mut a: Vec<VertexId> = keep_a.to_vec();
        let mut b: Vec<VertexId> = keep_b.to_vec();
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        debug_assert!(a.iter().all(|&v| self.in_a(v)) && b.iter().all(|&v| self.in_b(v)));
        let total = self.order();
        let mut new_id = vec![u32::MAX; total];
        for (i, &v) in a.iter().chain(b.iter()).enumerate() {
            new_id[v as usize] = i as VertexId;
        }
        let mut adj = vec![Vec::new(); a.len() + b.len()];
        for &v in a.iter().chain(b.iter()) {
            let nv = new_id[v as usize] as usize;
            adj[nv] = self
                .neighbours(v)
                .iter()
                .filter_map(|&w| {
                    let nw = new_id[w as usize];
                    (nw != u32::MAX).then_some(nw)
                })
                .collect();
            adj[nv].sort_unstable();
        }
        let origin = a.iter().chain(b.iter()).copied().collect();
        (Self { n_a: a.len(), n_b: b.len(), adj }, origin)
    }

    /// Copy with one edge removed; panics if it is absent.
    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Self {
        let g = GeneralGraph { adj: self.adj.clone() }.without_edge(u, v);
        Self { n_a: self.n_a, n_b: self.n_b, adj: g.adj }
    }

    /// Copy with one extra A–B edge; panics if it is present or does not cross.
    pub fn with_edge(&self, u: VertexId, v: VertexId) -> Self {
        assert!(self.in_a(u) != self.in_a(v), "edge must cross the bipartition");
        let g = GeneralGraph { adj: self.adj.clone() }.with_edge(u, v);
        Self { n_a: self.n_a, n_b: self.n_b, adj: g.adj }
    }
}

impl Adjacency for BipartiteGraph {
    fn order(&self) -> usize {
        self.adj.len()
    }

    fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }
}

/// `(min degree, max degree)` over all vertices.
pub fn degree_stats<G: Adjacency + ?Sized>(g: &G) -> Result<(usize, usize), GraphError> {
    let mut degrees = (0..g.order() as VertexId).map(|v| g.degree(v));
    let first = degrees.next().ok_or(GraphError::EmptyGraph)?;
    Ok(degrees.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
}

/// `max deg ≤ K · min deg`.
pub fn is_almost_regular<G: Adjacency + ?Sized>(g: &G, k: f64) -> Result<bool, GraphError> {
    let (lo, hi) = degree_stats(g)?;
    Ok(hi as f64 <= k * lo as f64)
}

/// Exact girth by a breadth-first search from every vertex; `None` for forests.
pub fn girth<G: Adjacency + ?Sized>(g: &G) -> Option<usize> {
    let n = g.order();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = u32::MAX;
        queue.clear();
        queue.push_back(root as VertexId);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            // Any cycle found further out is no shorter than the current best.
            if 2 * dv + 1 >= best {
                break;
            }
            for &w in g.neighbours(v) {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dv + 1;
                    parent[w as usize] = v;
                    queue.push_back(w);
                } else if parent[v as usize] != w {
                    best = best.min(dv + dist[w as usize] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

pub(crate) fn sorted_intersection_count(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
