//! Cliques of heavy pairs in the neighbourhood graph.

use serde::Serialize;

use crate::graph::VertexId;
use crate::weights::{heavy_threshold, NeighbourhoodWeights};

/// Clique sizes up to this bound are searched exhaustively.
pub const EXACT_CLIQUE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeavyCliqueSearch {
    /// Lexicographically smallest heavy clique found, sorted ascending.
    pub clique: Option<Vec<VertexId>>,
    pub nodes: u64,
    /// False when the node budget cut the search short.
    pub exact: bool,
}

struct CliqueSearch {
    heavy: Vec<Vec<VertexId>>,
    target: usize,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueSearch {
    fn extend(&mut self, clique: &mut Vec<VertexId>, candidates: &[VertexId]) -> bool {
        if clique.len() == self.target {
            return true;
        }
        let need = self.target - clique.len();
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < need {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return false;
            }
            let next: Vec<VertexId> = intersect(&candidates[i + 1..], &self.heavy[v as usize]);
            if next.len() + 1 < need {
                continue;
            }
            clique.push(v);
            if self.extend(clique, &next) {
                return true;
            }
            clique.pop();
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

fn intersect(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Looks for `s + t - 1` A-vertices that are pairwise heavy.
///
/// Exhaustive for cliques of at most [`EXACT_CLIQUE_LIMIT`] vertices;
/// larger targets stop after `budget` search nodes.
pub fn find_heavy_clique(
    weights: &NeighbourhoodWeights<'_>,
    s: usize,
    t: usize,
    budget: u64,
) -> HeavyCliqueSearch {
    let target = s + t - 1;
    let threshold = heavy_threshold(s, t) as u32;
    let n_a = weights.graph().n_a();
    let raw: Vec<Vec<VertexId>> = (0..n_a as VertexId)
        .map(|u| weights.row(u).iter().filter(|&&(_, w)| w >= threshold).map(|&(v, _)| v).collect())
        .collect();
    // Vertices of heavy degree below target - 1 cannot be in the clique.
    let eligible: Vec<bool> = raw.iter().map(|r| r.len() + 1 >= target).collect();
    let heavy: Vec<Vec<VertexId>> =
        raw.into_iter().map(|r| r.into_iter().filter(|&v| eligible[v as usize]).collect()).collect();
    let roots: Vec<VertexId> = (0..n_a as VertexId).filter(|&v| eligible[v as usize]).collect();
    let mut search = CliqueSearch {
        heavy,
        target,
        nodes: 0,
        budget: if target <= EXACT_CLIQUE_LIMIT { u64::MAX } else { budget },
        exhausted: false,
    };
    let mut clique = Vec::with_capacity(target);
    let found = target <= n_a && search.extend(&mut clique, &roots);
    HeavyCliqueSearch {
        clique: found.then_some(clique),
        nodes: search.nodes,
        exact: !search.exhausted,
    }
}
