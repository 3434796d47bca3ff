//! Extraction of a balanced, almost-regular bipartite subgraph from a dense host.
//!
//! Procedure:
//!
//! 1. bipartition: the two-colouring when the host is bipartite, otherwise a
//!    seeded random balanced split improved by single-vertex flips to a local
//!    maximum cut;
//! 2. group the vertices of each side into dyadic degree buckets
//!    `[2^i, 2^{i+1})`;
//! 3. keep the bucket pair maximizing `e / m^{1+α}` (lowest indices win ties);
//! 4. drop isolated vertices and trim the larger side by lowest degree until
//!    `½|B| ≤ |A| ≤ 2|B|`;
//! 5. repeat 2–4 until `max deg ≤ K · min deg`, for at most `⌈log₂ n⌉` rounds,
//!    then peel minimum-degree vertices if the target is still missed.
//!
//! The density `e(G') / m^{1+α}` is measured and compared with `C/10` but not
//! enforced.

use rand::seq::SliceRandom;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::regularization_k;
use crate::constructions::rng_for;
use crate::graph::{degree_stats, Adjacency, BipartiteGraph, GeneralGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegularizeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("host has {edges} edges, below the required C·n^(1+α) = {required:.2}")]
    TooSparse { edges: usize, required: f64 },
    #[error("extraction left only {vertices} vertices")]
    DegenerateOutput { vertices: usize },
    #[error("could not reach degree ratio {target}; best achieved {achieved:.3}")]
    TargetUnreached { achieved: f64, target: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizeParams {
    pub alpha: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k_target: f64,
    pub seed: u64,
}

impl RegularizeParams {
    /// Uses the default ratio target `60 · 2^{1 + 1/α²}` and seed 0.
    pub fn new(alpha: f64, c: f64) -> Self {
        Self { alpha, c, k_target: regularization_k(alpha), seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), RegularizeError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(RegularizeError::InvalidParams(format!("alpha = {} not in (0, 1)", self.alpha)));
        }
        if !(self.c >= 1.0) || !self.c.is_finite() {
            return Err(RegularizeError::InvalidParams(format!("C = {} must be >= 1", self.c)));
        }
        if !(self.k_target >= 1.0) {
            return Err(RegularizeError::InvalidParams(format!("K = {} must be >= 1", self.k_target)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizeReport {
    #[serde(skip)]
    pub subgraph: BipartiteGraph,
    /// `origin[v]` is the input vertex that became subgraph vertex `v`.
    #[serde(skip)]
    pub origin: Vec<VertexId>,
    pub m: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub edges: usize,
    #[serde(rename = "achieved_K")]
    pub achieved_k: f64,
    /// `e(G') / m^{1+α}`.
    pub density_ratio: f64,
    /// `C / 10`.
    pub density_target: f64,
    pub density_target_met: bool,
    pub balanced: bool,
    pub rounds: usize,
}

/// Working state: a bipartite graph plus the input id of each of its vertices.
struct Working {
    graph: BipartiteGraph,
    origin: Vec<VertexId>,
}

impl Working {
    fn restrict(&self, keep_a: &[VertexId], keep_b: &[VertexId]) -> Working {
        let (graph, local) = self.graph.induced(keep_a, keep_b);
        let origin = local.iter().map(|&v| self.origin[v as usize]).collect();
        Working { graph, origin }
    }

    fn ratio(&self) -> f64 {
        match degree_stats(&self.graph) {
            Ok((lo, hi)) if lo > 0 => hi as f64 / lo as f64,
            _ => f64::INFINITY,
        }
    }

    /// Drops isolated vertices and trims the larger side until balanced and stable.
    fn clean(mut self) -> Working {
        loop {
            let g = &self.graph;
            let mut a: Vec<VertexId> = g.part_a().filter(|&v| g.degree(v) > 0).collect();
            let mut b: Vec<VertexId> = g.part_b().filter(|&v| g.degree(v) > 0).collect();
            if a.len() > 2 * b.len() {
                let excess = a.len() - 2 * b.len();
                trim_lowest(g, &mut a, excess);
            } else if b.len() > 2 * a.len() {
                let excess = b.len() - 2 * a.len();
                trim_lowest(g, &mut b, excess);
            }
            if a.len() == g.n_a() && b.len() == g.n_b() {
                return self;
            }
            self = self.restrict(&a, &b);
        }
    }
}

/// Removes the `count` lowest-degree vertices (lowest id first among equals).
fn trim_lowest(g: &BipartiteGraph, side: &mut Vec<VertexId>, count: usize) {
    let mut ranked = side.clone();
    ranked.sort_by_key(|&v| (g.degree(v), v));
    let drop: std::collections::HashSet<VertexId> = ranked.into_iter().take(count).collect();
    side.retain(|v| !drop.contains(v));
}

fn dyadic_bucket(degree: usize) -> usize {
    debug_assert!(degree > 0);
    (usize::BITS - 1 - degree.leading_zeros()) as usize
}

fn initial_bipartition(g: &GeneralGraph, seed: u64) -> Working {
    let n = g.order();
    let side: Vec<u8> = match g.two_colouring() {
        Some(colour) => {
            // Orient each component so the two sides stay as even as possible.
            let mut comps = g.components();
            comps.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
            let mut side = vec![0u8; n];
            let (mut size_a, mut size_b) = (0usize, 0usize);
            for comp in comps {
                let zeros = comp.iter().filter(|&&v| colour[v as usize] == 0).count();
                let ones = comp.len() - zeros;
                let flip = (size_a + zeros).abs_diff(size_b + ones) > (size_a + ones).abs_diff(size_b + zeros);
                for &v in &comp {
                    side[v as usize] = colour[v as usize] ^ flip as u8;
                }
                if flip {
                    size_a += ones;
                    size_b += zeros;
                } else {
                    size_a += zeros;
                    size_b += ones;
                }
            }
            side
        }
        None => {
            let mut order: Vec<VertexId> = (0..n as VertexId).collect();
            order.shuffle(&mut rng_for(seed));
            let mut side = vec![1u8; n];
            for &v in &order[..n / 2] {
                side[v as usize] = 0;
            }
            // Flip any vertex with more neighbours on its own side; the cut grows each time.
            let mut changed = true;
            while changed {
                changed = false;
                for v in 0..n as VertexId {
                    let same = g.neighbours(v).iter().filter(|&&w| side[w as usize] == side[v as usize]).count();
                    if 2 * same > g.degree(v) {
                        side[v as usize] ^= 1;
                        changed = true;
                    }
                }
            }
            side
        }
    };
    let a: Vec<VertexId> = (0..n as VertexId).filter(|&v| side[v as usize] == 0).collect();
    let b: Vec<VertexId> = (0..n as VertexId).filter(|&v| side[v as usize] == 1).collect();
    let mut id = vec![0usize; n];
    for (i, &v) in a.iter().chain(b.iter()).enumerate() {
        id[v as usize] = i;
    }
    let edges: Vec<(usize, usize)> = g
        .edge_list()
        .into_iter()
        .filter(|&(u, v)| side[u as usize] != side[v as usize])
        .map(|(u, v)| (id[u as usize], id[v as usize]))
        .collect();
    let graph = BipartiteGraph::from_global_edges(a.len(), b.len(), &edges).expect("cut edges cross");
    Working { graph, origin: a.into_iter().chain(b).collect() }
}

/// One bucketing round: keep the densest dyadic bucket pair.
fn bucket_round(w: &Working, alpha: f64) -> Working {
    let g = &w.graph;
    let bucket = |v: VertexId| dyadic_bucket(g.degree(v));
    let levels = usize::BITS as usize;
    let mut size_a = vec![0usize; levels];
    let mut size_b = vec![0usize; levels];
    let mut edges = vec![vec![0usize; levels]; levels];
    for a in g.part_a().filter(|&v| g.degree(v) > 0) {
        size_a[bucket(a)] += 1;
        for &b in g.neighbours(a) {
            edges[bucket(a)][bucket(b)] += 1;
        }
    }
    for b in g.part_b().filter(|&v| g.degree(v) > 0) {
        size_b[bucket(b)] += 1;
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..levels {
        for j in 0..levels {
            if edges[i][j] == 0 {
                continue;
            }
            let m = (size_a[i] + size_b[j]) as f64;
            let score = edges[i][j] as f64 / m.powf(1.0 + alpha);
            if best.is_none_or(|(s, _, _)| score > s) {
                best = Some((score, i, j));
            }
        }
    }
    let Some((_, i, j)) = best else {
        return w.restrict(&[], &[]);
    };
    let keep_a: Vec<VertexId> = g.part_a().filter(|&v| g.degree(v) > 0 && bucket(v) == i).collect();
    let keep_b: Vec<VertexId> = g.part_b().filter(|&v| g.degree(v) > 0 && bucket(v) == j).collect();
    w.restrict(&keep_a, &keep_b)
}

pub fn regularize(g: &GeneralGraph, params: &RegularizeParams) -> Result<RegularizeReport, RegularizeError> {
    params.validate()?;
    let n = g.order();
    let required = params.c * (n as f64).powf(1.0 + params.alpha);
    if (g.edge_count() as f64) < required {
        return Err(RegularizeError::TooSparse { edges: g.edge_count(), required });
    }
    let max_rounds = (n.max(2) as f64).log2().ceil() as usize;
    let mut work = initial_bipartition(g, params.seed).clean();
    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        work = bucket_round(&work, params.alpha).clean();
        if work.graph.order() < 4 {
            return Err(RegularizeError::DegenerateOutput { vertices: work.graph.order() });
        }
        if work.ratio() <= params.k_target {
            break;
        }
    }
    while work.ratio() > params.k_target {
        let achieved = work.ratio();
        let gr = &work.graph;
        let worst = (0..gr.order() as VertexId).min_by_key(|&v| (gr.degree(v), v)).expect("nonempty");
        let a: Vec<VertexId> = gr.part_a().filter(|&v| v != worst).collect();
        let b: Vec<VertexId> = gr.part_b().filter(|&v| v != worst).collect();
        work = work.restrict(&a, &b).clean();
        if work.graph.order() < 4 {
            return Err(RegularizeError::TargetUnreached { achieved, target: params.k_target });
        }
    }
    Ok(report_for(work.graph, work.origin, params, rounds))
}

fn density_ratio(edges: usize, m: usize, alpha: f64) -> f64 {
    edges as f64 / (m as f64).powf(1.0 + alpha)
}

fn report_for(
    subgraph: BipartiteGraph,
    origin: Vec<VertexId>,
    params: &RegularizeParams,
    rounds: usize,
) -> RegularizeReport {
    let m = subgraph.order();
    let edges = subgraph.edge_count();
    let (lo, hi) = degree_stats(&subgraph).expect("nonempty output");
    let ratio = density_ratio(edges, m, params.alpha);
    let target = params.c / 10.0;
    RegularizeReport {
        m,
        n_a: subgraph.n_a(),
        n_b: subgraph.n_b(),
        edges,
        achieved_k: hi as f64 / lo as f64,
        density_ratio: ratio,
        density_target: target,
        density_target_met: ratio >= target,
        balanced: subgraph.is_balanced(),
        rounds,
        subgraph,
        origin,
    }
}

/// Recomputes every stored field of the report from its subgraph.
pub fn verify_regularization(report: &RegularizeReport, params: &RegularizeParams) -> bool {
    let g = &report.subgraph;
    let Ok((lo, hi)) = degree_stats(g) else { return false };
    if lo == 0 {
        return false;
    }
    let achieved = hi as f64 / lo as f64;
    let edges = g.edge_count();
    let ratio = density_ratio(edges, g.order(), params.alpha);
    g.is_balanced()
        && report.balanced
        && report.m == g.order()
        && report.n_a == g.n_a()
        && report.n_b == g.n_b()
        && report.edges == edges
        && report.origin.len() == g.order()
        && report.achieved_k == achieved
        && achieved <= params.k_target
        && report.density_ratio == ratio
        && report.density_target_met == (ratio >= params.c / 10.0)
}

/// True when the extracted subgraph maps injectively into `host`, edges to edges.
pub fn is_subgraph_of(report: &RegularizeReport, host: &GeneralGraph) -> bool {
    let mut seen = report.origin.clone();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == report.origin.len()
        && report.origin.iter().all(|&v| (v as usize) < host.order())
        && report
            .subgraph
            .edge_list()
            .iter()
            .all(|&(u, v)| host.has_edge(report.origin[u as usize], report.origin[v as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_graph;

    #[test]
    fn complete_bipartite_is_kept_whole() {
        let g = GeneralGraph::complete_bipartite(40, 40);
        let params = RegularizeParams::new(1.0 / 3.0, 1.0);
        let r = regularize(&g, &params).unwrap();
        assert_eq!(r.edges, 1600);
        assert_eq!(r.achieved_k, 1.0);
        assert!(r.balanced && verify_regularization(&r, &params) && is_subgraph_of(&r, &g));
    }

    #[test]
    fn hypercube_keeps_at_least_half_its_edges() {
        let d = 10;
        let n = 1usize << d;
        let edges: Vec<_> = (0..n)
            .flat_map(|v| (0..d).map(move |i| (v, v ^ (1 << i))))
            .filter(|&(u, v)| u < v)
            .collect();
        let g = GeneralGraph::new(n, &edges).unwrap();
        let params = RegularizeParams { alpha: 0.2, c: 1.0, k_target: 2.0, seed: 3 };
        let r = regularize(&g, &params).unwrap();
        assert!(2 * r.edges >= g.edge_count());
        assert!(verify_regularization(&r, &params) && is_subgraph_of(&r, &g));
    }

    #[test]
    fn sparse_input_is_rejected() {
        let g = GeneralGraph::cycle(50);
        assert!(matches!(
            regularize(&g, &RegularizeParams::new(1.0 / 3.0, 1.0)),
            Err(RegularizeError::TooSparse { .. })
        ));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let g = GeneralGraph::complete(10);
        for p in [
            RegularizeParams::new(0.0, 1.0),
            RegularizeParams::new(1.0, 1.0),
            RegularizeParams::new(0.5, 0.5),
            RegularizeParams { k_target: 0.5, ..RegularizeParams::new(0.5, 1.0) },
        ] {
            assert!(matches!(regularize(&g, &p), Err(RegularizeError::InvalidParams(_))));
        }
    }

    #[test]
    fn tight_target_peels_until_met() {
        let g = random_graph(300, 0.2, 9).unwrap();
        let params = RegularizeParams { alpha: 1.0 / 3.0, c: 1.0, k_target: 1.2, seed: 1 };
        let r = regularize(&g, &params).unwrap();
        assert!(r.achieved_k <= 1.2);
        assert!(verify_regularization(&r, &params) && is_subgraph_of(&r, &g));
    }

    #[test]
    fn random_host_is_deterministic_and_tamper_evident() {
        let g = random_graph(400, 0.1, 4).unwrap();
        let params = RegularizeParams::new(1.0 / 3.0, 1.0).with_seed(17);
        let r = regularize(&g, &params).unwrap();
        assert_eq!(regularize(&g, &params).unwrap(), r);
        assert!(verify_regularization(&r, &params));
        assert!(is_subgraph_of(&r, &g));

        let (u, v) = r.subgraph.edge_list()[0];
        let tampered = RegularizeReport { subgraph: r.subgraph.without_edge(u, v), ..r.clone() };
        assert!(!verify_regularization(&tampered, &params));

        let understated = RegularizeReport { achieved_k: r.achieved_k * 0.9, ..r.clone() };
        assert!(!verify_regularization(&understated, &params));
    }

    #[test]
    fn dyadic_buckets() {
        assert_eq!(dyadic_bucket(1), 0);
        assert_eq!(dyadic_bucket(2), 1);
        assert_eq!(dyadic_bucket(3), 1);
        assert_eq!(dyadic_bucket(4), 2);
        assert_eq!(dyadic_bucket(1023), 9);
    }
}
