//! The pattern graphs `L_{s,t}` and 1-subdivisions.

use std::ops::Range;

use crate::graph::{Adjacency, BipartiteGraph, GeneralGraph, GraphError};

/// `L_{s,t}`: a complete graph on `s + t - 1` vertices with the edges inside
/// an `s`-set `S` removed. Vertices `0..s` form `S`, vertices `s..s+t-1` form `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    s: usize,
    t: usize,
    edges: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn new(s: usize, t: usize) -> Result<Self, GraphError> {
        if s < 1 || t < 3 {
            return Err(GraphError::InvalidParams { s, t });
        }
        let k = s + t - 1;
        let edges = (0..k)
            .flat_map(|x| (x + 1..k).map(move |y| (x, y)))
            .filter(|&(x, y)| x >= s || y >= s)
            .collect();
        Ok(Self { s, t, edges })
    }

    /// `K_t`, which is `L_{1,t}`.
    pub fn complete(t: usize) -> Result<Self, GraphError> {
        Self::new(1, t)
    }

    /// `L_{b,a+1}`, the smallest member of the family containing `K_{a,b}`.
    pub fn covering_complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        Self::new(b, a + 1)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn vertex_count(&self) -> usize {
        self.s + self.t - 1
    }

    pub fn s_vertices(&self) -> Range<usize> {
        0..self.s
    }

    pub fn t_vertices(&self) -> Range<usize> {
        self.s..self.s + self.t - 1
    }

    /// Edges `(x, y)` with `x < y`, lexicographically ordered.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `"S0"`, `"S1"`, …, `"T0"`, …
    pub fn vertex_label(&self, x: usize) -> String {
        if x < self.s {
            format!("S{x}")
        } else {
            format!("T{}", x - self.s)
        }
    }

    /// `"S0-T1"` style label of edge `i`.
    pub fn edge_label(&self, i: usize) -> String {
        let (x, y) = self.edges[i];
        format!("{}-{}", self.vertex_label(x), self.vertex_label(y))
    }

    pub fn to_graph(&self) -> GeneralGraph {
        GeneralGraph::new(self.vertex_count(), &self.edges).expect("pattern edges are valid")
    }
}

/// The 1-subdivision as a bipartite graph: part A holds the original vertices
/// (same ids), part B holds one midpoint per edge in `edge_list()` order.
pub fn subdivision_host<G: Adjacency + ?Sized>(g: &G) -> BipartiteGraph {
    let edges = g.edge_list();
    let local: Vec<(usize, usize)> = edges
        .iter()
        .enumerate()
        .flat_map(|(i, &(u, v))| [(u as usize, i), (v as usize, i)])
        .collect();
    BipartiteGraph::new(g.order(), edges.len(), &local).expect("subdivision edges are valid")
}

/// Replaces every edge by a path of length two through a fresh vertex.
pub fn subdivide<G: Adjacency + ?Sized>(g: &G) -> GeneralGraph {
    subdivision_host(g).to_general()
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `C(s+t-1, 2) - C(s, 2)`.
pub fn pattern_edge_count(s: usize, t: usize) -> usize {
    binom2(s + t - 1) - binom2(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degree_stats, girth};

    #[test]
    fn l13_is_a_triangle() {
        let p = Pattern::new(1, 3).unwrap();
        assert_eq!(p.to_graph(), GeneralGraph::complete(3));
    }

    #[test]
    fn l23_is_k4_minus_an_edge() {
        let p = Pattern::new(2, 3).unwrap();
        assert_eq!(p.edges().len(), 5);
        assert!(!p.edges().contains(&(0, 1)));
    }

    #[test]
    fn covering_pattern_contains_complete_bipartite() {
        // K_{a,b} sits between the b S-vertices and a of the T-vertices.
        for (a, b) in [(2, 2), (2, 3), (3, 4)] {
            let p = Pattern::covering_complete_bipartite(a, b).unwrap();
            assert_eq!((p.s(), p.t()), (b, a + 1));
            for x in p.s_vertices() {
                for y in p.t_vertices().take(a) {
                    assert!(p.edges().contains(&(x, y)));
                }
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(Pattern::new(0, 3), Err(GraphError::InvalidParams { s: 0, t: 3 }));
        assert_eq!(Pattern::new(1, 2), Err(GraphError::InvalidParams { s: 1, t: 2 }));
    }

    #[test]
    fn edge_count_formula() {
        for s in 1..=5 {
            for t in 3..=7 {
                assert_eq!(Pattern::new(s, t).unwrap().edges().len(), pattern_edge_count(s, t));
            }
        }
    }

    #[test]
    fn labels() {
        let p = Pattern::new(2, 3).unwrap();
        assert_eq!(p.vertex_label(1), "S1");
        assert_eq!(p.vertex_label(3), "T1");
        assert_eq!(p.edge_label(0), "S0-T0");
        assert_eq!(p.edge_label(4), "T0-T1");
    }

    #[test]
    fn subdivision_of_single_edge_is_a_path() {
        let g = subdivide(&GeneralGraph::new(2, &[(0, 1)]).unwrap());
        assert_eq!(g.order(), 3);
        assert_eq!(g.edge_list(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn subdivision_of_k4() {
        let h4 = subdivide(&Pattern::complete(4).unwrap().to_graph());
        assert_eq!((h4.order(), h4.edge_count()), (10, 12));
        assert_eq!(girth(&h4), Some(6));
        let host = subdivision_host(&GeneralGraph::complete(4));
        assert!(host.part_b().all(|b| host.degree(b) == 2));
        assert_eq!(degree_stats(&host).unwrap(), (2, 3));
    }
}
