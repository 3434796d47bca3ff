//! The neighbourhood graph: pairwise codegrees on part A, and the light/heavy
//! classification of A-pairs.

use serde::Serialize;

use crate::graph::{Adjacency, BipartiteGraph, GraphError, VertexId};

/// Codegree at or above which an A-pair is heavy: `C(s+t-1, 2)`.
pub fn heavy_threshold(s: usize, t: usize) -> usize {
    let k = s + t - 1;
    k * (k - 1) / 2
}

pub(crate) fn check_params(s: usize, t: usize) -> Result<(), GraphError> {
    if s < 1 || t < 3 {
        Err(GraphError::InvalidParams { s, t })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    Absent,
    Light,
    Heavy,
}

impl EdgeClass {
    pub fn from_codegree(codegree: usize, s: usize, t: usize) -> Self {
        if codegree == 0 {
            EdgeClass::Absent
        } else if codegree < heavy_threshold(s, t) {
            EdgeClass::Light
        } else {
            EdgeClass::Heavy
        }
    }
}

/// Nonzero codegrees between A-vertices of a host, stored per vertex as a
/// sorted `(neighbour, weight)` row. Each unordered pair appears in both rows.
#[derive(Debug, Clone)]
pub struct NeighbourhoodWeights<'g> {
    graph: &'g BipartiteGraph,
    rows: Vec<Vec<(VertexId, u32)>>,
}

impl<'g> NeighbourhoodWeights<'g> {
    /// Accumulates codegrees by walking every wedge `u - b - v` through B.
    pub fn new(graph: &'g BipartiteGraph) -> Self {
        let n_a = graph.n_a();
        let mut count = vec![0u32; n_a];
        let mut touched: Vec<VertexId> = Vec::new();
        let mut rows = Vec::with_capacity(n_a);
        for u in graph.part_a() {
            for &b in graph.neighbours(u) {
                for &v in graph.neighbours(b) {
                    if v != u {
                        if count[v as usize] == 0 {
                            touched.push(v);
                        }
                        count[v as usize] += 1;
                    }
                }
            }
            touched.sort_unstable();
            let row = touched.iter().map(|&v| (v, count[v as usize])).collect();
            for &v in &touched {
                count[v as usize] = 0;
            }
            touched.clear();
            rows.push(row);
        }
        Self { graph, rows }
    }

    pub fn graph(&self) -> &'g BipartiteGraph {
        self.graph
    }

    /// Nonzero codegrees of `u` to other A-vertices, sorted by neighbour.
    pub fn row(&self, u: VertexId) -> &[(VertexId, u32)] {
        &self.rows[u as usize]
    }

    /// Codegree of two A-vertices (0 when they share nothing).
    pub fn weight(&self, u: VertexId, v: VertexId) -> usize {
        let row = &self.rows[u as usize];
        row.binary_search_by_key(&v, |&(w, _)| w).map_or(0, |i| row[i].1 as usize)
    }

    /// Every nonzero pair once, as `(u, v, weight)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .filter(move |&&(v, _)| (u as VertexId) < v)
                .map(move |&(v, w)| (u as VertexId, v, w as usize))
        })
    }

    /// `W(A)`.
    pub fn total(&self) -> u64 {
        self.pairs().map(|(_, _, w)| w as u64).sum()
    }

    /// `W(U)`: the total codegree over pairs inside `U` (duplicates in `U` ignored).
    pub fn total_weight(&self, subset: &[VertexId]) -> Result<u64, GraphError> {
        let mask = self.subset_mask(subset)?;
        let mut total = 0u64;
        for (u, inside) in mask.iter().enumerate() {
            if *inside {
                total += self.rows[u]
                    .iter()
                    .filter(|&&(v, _)| v as usize > u && mask[v as usize])
                    .map(|&(_, w)| w as u64)
                    .sum::<u64>();
            }
        }
        Ok(total)
    }

    pub fn classify(
        &self,
        u: VertexId,
        v: VertexId,
        s: usize,
        t: usize,
    ) -> Result<EdgeClass, GraphError> {
        check_params(s, t)?;
        if u == v || !self.graph.in_a(u) || !self.graph.in_a(v) {
            return Err(GraphError::InvalidPair(u, v));
        }
        Ok(EdgeClass::from_codegree(self.weight(u, v), s, t))
    }

    /// Number of light pairs with both ends in `subset`.
    pub fn light_pairs_within(
        &self,
        subset: &[VertexId],
        s: usize,
        t: usize,
    ) -> Result<u64, GraphError> {
        check_params(s, t)?;
        let threshold = heavy_threshold(s, t) as u32;
        let mask = self.subset_mask(subset)?;
        let mut count = 0u64;
        for (u, inside) in mask.iter().enumerate() {
            if *inside {
                count += self.rows[u]
                    .iter()
                    .filter(|&&(v, w)| v as usize > u && mask[v as usize] && w < threshold)
                    .count() as u64;
            }
        }
        Ok(count)
    }

    /// Number of light pairs in all of A.
    pub fn light_pair_count(&self, s: usize, t: usize) -> u64 {
        let threshold = heavy_threshold(s, t) as u32;
        self.pairs().filter(|&(_, _, w)| (w as u32) < threshold).count() as u64
    }

    fn subset_mask(&self, subset: &[VertexId]) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.graph.n_a()];
        for &u in subset {
            if !self.graph.in_a(u) {
                return Err(GraphError::InvalidSubset(u));
            }
            mask[u as usize] = true;
        }
        Ok(mask)
    }
}
