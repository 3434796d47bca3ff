//! Exact (non-induced) subgraph containment by backtracking.

use serde::Serialize;

use crate::graph::{Adjacency, GeneralGraph, VertexId};
use crate::pattern::subdivide;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "embedding", rename_all = "snake_case")]
pub enum Containment {
    /// `embedding[h]` is the image of pattern vertex `h`.
    Yes(Vec<VertexId>),
    No,
    BudgetExceeded,
}

impl Containment {
    pub fn is_yes(&self) -> bool {
        matches!(self, Containment::Yes(_))
    }
}

/// Dense adjacency bitsets for constant-time edge tests.
pub(crate) struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new<G: Adjacency + ?Sized>(g: &G) -> Self {
        let n = g.order();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        for u in 0..n {
            for &v in g.neighbours(u as VertexId) {
                bits[u * words + v as usize / 64] |= 1 << (v % 64);
            }
        }
        Self { words, bits }
    }

    #[inline]
    pub(crate) fn get(&self, u: VertexId, v: VertexId) -> bool {
        self.bits[u as usize * self.words + v as usize / 64] >> (v % 64) & 1 == 1
    }
}

struct Plan {
    order: Vec<usize>,
    /// For each position, the positions of earlier neighbours in `order`.
    back: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

/// Orders pattern vertices so that each one has as many earlier neighbours as possible.
fn plan(h: &GeneralGraph) -> Plan {
    let k = h.order();
    let mut placed = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    for pos in 0..k {
        let next = (0..k)
            .filter(|&v| placed[v] == usize::MAX)
            .max_by_key(|&v| {
                let linked =
                    h.neighbours(v as VertexId).iter().filter(|&&w| placed[w as usize] != usize::MAX).count();
                (linked, h.degree(v as VertexId), std::cmp::Reverse(v))
            })
            .expect("vertices remain");
        placed[next] = pos;
        order.push(next);
    }
    let back = order
        .iter()
        .map(|&v| {
            let mut b: Vec<usize> = h
                .neighbours(v as VertexId)
                .iter()
                .map(|&w| placed[w as usize])
                .filter(|&p| p < placed[v])
                .collect();
            b.sort_unstable();
            b
        })
        .collect();
    let degree = order.iter().map(|&v| h.degree(v as VertexId)).collect();
    Plan { order, back, degree }
}

struct Search<'a> {
    g: &'a GeneralGraph,
    bits: BitMatrix,
    plan: Plan,
    image: Vec<VertexId>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn extend(&mut self, pos: usize) -> bool {
        if pos == self.plan.order.len() {
            return true;
        }
        let back = std::mem::take(&mut self.plan.back[pos]);
        let found = match back.first() {
            Some(&anchor) => {
                let anchor_image = self.image[anchor];
                let g = self.g;
                g.neighbours(anchor_image).iter().any(|&c| self.try_place(pos, c, &back))
            }
            None => (0..self.g.order() as VertexId).any(|c| self.try_place(pos, c, &back)),
        };
        self.plan.back[pos] = back;
        found
    }

    fn try_place(&mut self, pos: usize, c: VertexId, back: &[usize]) -> bool {
        if self.exhausted
            || self.used[c as usize]
            || self.g.degree(c) < self.plan.degree[pos]
            || !back.iter().all(|&p| self.bits.get(self.image[p], c))
        {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        self.image[pos] = c;
        self.used[c as usize] = true;
        let found = self.extend(pos + 1);
        self.used[c as usize] = false;
        found
    }
}

/// Searches for an injective map `V(h) → V(g)` sending edges to edges.
///
/// `budget` caps the number of partial assignments tried; `None` is unlimited.
pub fn contains_subgraph(g: &GeneralGraph, h: &GeneralGraph, budget: Option<u64>) -> Containment {
    let k = h.order();
    if k > g.order() || h.edge_count() > g.edge_count() {
        return Containment::No;
    }
    let plan = plan(h);
    let mut search = Search {
        g,
        bits: BitMatrix::new(g),
        image: vec![0; k],
        used: vec![false; g.order()],
        plan,
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
        exhausted: false,
    };
    if search.extend(0) {
        let mut embedding = vec![0; k];
        for (pos, &v) in search.plan.order.iter().enumerate() {
            embedding[v] = search.image[pos];
        }
        Containment::Yes(embedding)
    } else if search.exhausted {
        Containment::BudgetExceeded
    } else {
        Containment::No
    }
}

/// Containment of the 1-subdivision of `pattern`.
pub fn contains_subdivision<P: Adjacency + ?Sized>(
    g: &GeneralGraph,
    pattern: &P,
    budget: Option<u64>,
) -> Containment {
    contains_subgraph(g, &subdivide(pattern), budget)
}

/// Checks that `embedding` is an injective edge-preserving map of `h` into `g`.
pub fn is_embedding(g: &GeneralGraph, h: &GeneralGraph, embedding: &[VertexId]) -> bool {
    if embedding.len() != h.order() || embedding.iter().any(|&v| v as usize >= g.order()) {
        return false;
    }
    let mut seen = embedding.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == embedding.len()
        && h.edge_list().iter().all(|&(x, y)| g.has_edge(embedding[x as usize], embedding[y as usize]))
}
