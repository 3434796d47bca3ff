//! Host generators: random bipartite graphs, deletion-method lower-bound
//! witnesses, and point–line incidence graphs of the symplectic generalized
//! quadrangle `W(q)`.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::deletion_lower_exponent;
use crate::graph::{Adjacency, BipartiteGraph, GeneralGraph, VertexId};
use crate::oracle::iso::{contains_subgraph, Containment};
use crate::pattern::{subdivide, Pattern};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("n = {n} exceeds the exact-mode limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Largest `n` for which the deletion method runs in exact mode.
pub const EXACT_DELETION_LIMIT: usize = 40;

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each A–B pair becomes an edge independently with probability `p`.
pub fn random_bipartite(
    n_a: usize,
    n_b: usize,
    p: f64,
    seed: u64,
) -> Result<BipartiteGraph, ConstructionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ConstructionError::InvalidParameter(format!("p = {p} is not in [0, 1]")));
    }
    let mut rng = rng_for(seed);
    let mut edges = Vec::new();
    for a in 0..n_a {
        for b in 0..n_b {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Ok(BipartiteGraph::new(n_a, n_b, &edges).expect("generated edges are valid"))
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<GeneralGraph, ConstructionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ConstructionError::InvalidParameter(format!("p = {p} is not in [0, 1]")));
    }
    let mut rng = rng_for(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(GeneralGraph::new(n, &edges).expect("generated edges are valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "budget")]
pub enum DeletionMode {
    /// Destroys every copy and verifies freeness; `n ≤ EXACT_DELETION_LIMIT`.
    Exact,
    /// Containment searches capped at the given node budget; freeness may be unverified.
    Budgeted(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeletionReport {
    pub n: usize,
    pub t: usize,
    pub mode: DeletionMode,
    pub scale: f64,
    pub p: f64,
    pub initial_edges: usize,
    pub deletions: usize,
    pub final_edges: usize,
    /// The lower-bound exponent `3/2 - (t - 3/2)/(t² - t - 1)` as `p/q`.
    pub exponent: String,
    pub exponent_value: f64,
    /// `n^exponent`.
    pub reference_edges: f64,
    /// `final_edges / n^exponent`; a measured constant, not a proven one.
    pub ratio: f64,
    /// True when the output was confirmed free of the subdivision of `K_t`.
    pub verified_free: bool,
}

/// Sampling probability of the first-moment deletion argument:
/// `scale · n^{-(t - 3/2)/(t² - t - 1) - 1/2}`, capped at 1.
pub fn deletion_probability(n: usize, t: usize, scale: f64) -> f64 {
    let tf = t as f64;
    let x = (tf - 1.5) / (tf * tf - tf - 1.0);
    (scale * (n as f64).powf(-x - 0.5)).min(1.0)
}

/// Samples `G(n, p)` and deletes one edge from each copy of `H_t`, the
/// subdivision of `K_t`. Returns the surviving graph and a report comparing
/// its size with `n^{3/2 - (t - 3/2)/(t² - t - 1)}`.
pub fn deletion_lower_bound(
    n: usize,
    t: usize,
    seed: u64,
    scale: f64,
    mode: DeletionMode,
) -> Result<(GeneralGraph, DeletionReport), ConstructionError> {
    if t < 3 {
        return Err(ConstructionError::InvalidParameter(format!("t = {t} < 3")));
    }
    if !(scale > 0.0) {
        return Err(ConstructionError::InvalidParameter(format!("scale = {scale} must be positive")));
    }
    if mode == DeletionMode::Exact && n > EXACT_DELETION_LIMIT {
        return Err(ConstructionError::TooLarge { n, limit: EXACT_DELETION_LIMIT });
    }
    let p = deletion_probability(n, t, scale);
    let mut rng = rng_for(seed);
    let mut g = random_graph(n, p, rng.gen())?;
    let initial_edges = g.edge_count();
    let forbidden = subdivide(&Pattern::complete(t).expect("t >= 3").to_graph());
    let budget = match mode {
        DeletionMode::Exact => None,
        DeletionMode::Budgeted(b) => Some(b),
    };
    let mut deletions = 0;

    if t == 3 && mode == DeletionMode::Exact {
        for cycle in six_cycles(&g) {
            let present = (0..6).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % 6]));
            if present {
                let i = rng.gen_range(0..6);
                g = g.without_edge(cycle[i], cycle[(i + 1) % 6]);
                deletions += 1;
            }
        }
    }
    let verified_free = loop {
        match contains_subgraph(&g, &forbidden, budget) {
            Containment::No => break true,
            Containment::BudgetExceeded => break false,
            Containment::Yes(image) => {
                let edges = forbidden.edge_list();
                let &(x, y) = edges.choose(&mut rng).expect("pattern has edges");
                g = g.without_edge(image[x as usize], image[y as usize]);
                deletions += 1;
            }
        }
    };

    let exponent = deletion_lower_exponent(t as u32);
    let exponent_value = exponent.to_f64().expect("small rational");
    let reference_edges = (n as f64).powf(exponent_value);
    let final_edges = g.edge_count();
    let report = DeletionReport {
        n,
        t,
        mode,
        scale,
        p,
        initial_edges,
        deletions,
        final_edges,
        exponent: exponent.to_string(),
        exponent_value,
        reference_edges,
        ratio: final_edges as f64 / reference_edges,
        verified_free,
    };
    Ok((g, report))
}

/// Every 6-cycle exactly once, as a vertex sequence starting at its smallest vertex.
pub fn six_cycles(g: &GeneralGraph) -> Vec<[VertexId; 6]> {
    fn walk(
        g: &GeneralGraph,
        path: &mut Vec<VertexId>,
        out: &mut Vec<[VertexId; 6]>,
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() == 6 {
            if path[1] < path[5] && g.has_edge(last, start) {
                out.push(path.as_slice().try_into().unwrap());
            }
            return;
        }
        for &w in g.neighbours(last) {
            if w > start && !path.contains(&w) {
                path.push(w);
                walk(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(6);
    for s in 0..g.order() as VertexId {
        path.push(s);
        walk(g, &mut path, &mut out);
        path.pop();
    }
    out
}

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Incidence graph of the symplectic generalized quadrangle over `F_q`.
///
/// Part A holds the `(q²+1)(q+1)` points of `PG(3, q)`; part B holds the lines
/// that are totally isotropic for the form
/// `x0·y3 - x3·y0 + x1·y2 - x2·y1`. Both sides are `(q+1)`-regular and the
/// girth is 8.
pub fn gq_incidence(q: u64) -> Result<BipartiteGraph, ConstructionError> {
    if !is_prime(q) {
        return Err(ConstructionError::InvalidParameter(format!("q = {q} is not prime")));
    }
    let q = q as usize;
    let inverse = |x: usize| -> usize {
        let mut result = 1;
        for _ in 0..q - 2 {
            result = result * x % q;
        }
        result
    };
    let normalize = |v: [usize; 4]| -> [usize; 4] {
        let lead = v.iter().copied().find(|&x| x != 0).expect("nonzero vector");
        let inv = inverse(lead);
        v.map(|x| x * inv % q)
    };
    let encode = |v: [usize; 4]| v.iter().fold(0, |acc, &x| acc * q + x);

    let mut points = Vec::new();
    for code in 1..q.pow(4) {
        let v = [code / q.pow(3), code / q.pow(2) % q, code / q % q, code % q];
        if normalize(v) == v {
            points.push(v);
        }
    }
    let mut index = vec![usize::MAX; q.pow(4)];
    for (i, &v) in points.iter().enumerate() {
        index[encode(v)] = i;
    }
    let form = |x: [usize; 4], y: [usize; 4]| {
        (x[0] * y[3] + q * q - x[3] * y[0] + x[1] * y[2] + q * q - x[2] * y[1]) % q
    };

    let mut lines: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate().skip(i + 1) {
            if form(x, y) != 0 {
                continue;
            }
            let mut line: Vec<usize> = (0..q)
                .map(|l| index[encode(normalize([0, 1, 2, 3].map(|k| (x[k] * l + y[k]) % q)))])
                .chain(std::iter::once(i))
                .collect();
            line.sort_unstable();
            // Keep each line once: when (i, j) are its two smallest points.
            if line[0] == i && line[1] == j {
                lines.push(line);
            }
        }
    }
    let edges: Vec<(usize, usize)> = lines
        .iter()
        .enumerate()
        .flat_map(|(b, line)| line.iter().map(move |&a| (a, b)))
        .collect();
    Ok(BipartiteGraph::new(points.len(), lines.len(), &edges).expect("incidences are valid"))
}

/// Cells of a `rows × cols` grid (part A) against its rows then columns
/// (part B). Every cell has degree 2 and two crossing lines meet in exactly one
/// cell, so the graph has girth 8 when both sides are at least 2.
pub fn grid_incidence(rows: usize, cols: usize) -> Result<BipartiteGraph, ConstructionError> {
    if rows == 0 || cols == 0 {
        return Err(ConstructionError::InvalidParameter(format!("grid {rows} x {cols} is empty")));
    }
    let edges: Vec<_> = (0..rows * cols).flat_map(|cell| [(cell, cell / cols), (cell, rows + cell % cols)]).collect();
    Ok(BipartiteGraph::new(rows * cols, rows + cols, &edges).expect("grid incidences are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degree_stats, girth};

    #[test]
    fn grids_have_girth_eight() {
        let g = grid_incidence(5, 7).unwrap();
        assert_eq!((g.n_a(), g.n_b(), g.edge_count()), (35, 12, 70));
        assert_eq!(girth(&g), Some(8));
        assert!(!contains_subgraph(&grid_incidence(4, 4).unwrap().to_general(), &GeneralGraph::cycle(6), None).is_yes());
        assert!(grid_incidence(0, 3).is_err());
    }

    #[test]
    fn random_bipartite_extremes() {
        let full = random_bipartite(4, 5, 1.0, 7).unwrap();
        assert_eq!(full.edge_count(), 20);
        assert_eq!(random_bipartite(4, 5, 0.0, 7).unwrap().edge_count(), 0);
        assert!(random_bipartite(4, 5, 1.5, 7).is_err());
        assert_eq!(random_bipartite(30, 30, 0.3, 11), random_bipartite(30, 30, 0.3, 11));
    }

    #[test]
    fn random_bipartite_edge_count_concentrates() {
        // Binomial(10000, 1/2): σ = 50.
        for seed in 0..100 {
            let e = random_bipartite(100, 100, 0.5, seed).unwrap().edge_count() as f64;
            assert!((e - 5000.0).abs() <= 200.0, "seed {seed}: {e}");
        }
    }

    #[test]
    fn six_cycle_listing_counts() {
        assert_eq!(six_cycles(&GeneralGraph::cycle(6)).len(), 1);
        assert_eq!(six_cycles(&GeneralGraph::cycle(7)).len(), 0);
        // K_{3,3} has 3!·3!/(2·3) = 6 Hamiltonian cycles.
        assert_eq!(six_cycles(&GeneralGraph::complete_bipartite(3, 3)).len(), 6);
        // K_6 has 6!/(2·6) = 60.
        assert_eq!(six_cycles(&GeneralGraph::complete(6)).len(), 60);
    }

    #[test]
    fn deletion_probability_exponent() {
        // t = 3: p = n^{-0.8}.
        assert!((deletion_probability(32, 3, 1.0) - 32f64.powf(-0.8)).abs() < 1e-12);
        assert_eq!(deletion_probability(2, 3, 100.0), 1.0);
    }

    #[test]
    fn deletion_output_is_free_and_deterministic() {
        let (g, report) = deletion_lower_bound(30, 3, 5, 3.0, DeletionMode::Exact).unwrap();
        assert!(report.verified_free);
        assert_eq!(report.final_edges, g.edge_count());
        assert_eq!(report.initial_edges - report.deletions, report.final_edges);
        assert_eq!(six_cycles(&g).len(), 0);
        assert_eq!(report.exponent, "6/5");
        let again = deletion_lower_bound(30, 3, 5, 3.0, DeletionMode::Exact).unwrap();
        assert_eq!(again.0, g);
    }

    #[test]
    fn deletion_for_t4() {
        let (_, report) = deletion_lower_bound(20, 4, 1, 3.0, DeletionMode::Exact).unwrap();
        assert!(report.verified_free);
        assert_eq!(report.exponent, "14/11");
    }

    #[test]
    fn deletion_limits() {
        assert_eq!(
            deletion_lower_bound(41, 3, 0, 1.0, DeletionMode::Exact),
            Err(ConstructionError::TooLarge { n: 41, limit: 40 })
        );
        assert!(deletion_lower_bound(10, 2, 0, 1.0, DeletionMode::Exact).is_err());
        let (_, report) = deletion_lower_bound(60, 3, 0, 1.0, DeletionMode::Budgeted(1 << 20)).unwrap();
        assert!(report.final_edges > 0);
    }

    #[test]
    fn gq2_is_the_tutte_eight_cage() {
        let g = gq_incidence(2).unwrap();
        assert_eq!((g.n_a(), g.n_b(), g.edge_count()), (15, 15, 45));
        assert_eq!(degree_stats(&g).unwrap(), (3, 3));
        assert_eq!(girth(&g), Some(8));
    }

    #[test]
    fn gq_counts_and_girth() {
        for q in [2u64, 3, 5] {
            let g = gq_incidence(q).unwrap();
            let points = ((q * q + 1) * (q + 1)) as usize;
            assert_eq!((g.n_a(), g.n_b()), (points, points));
            assert_eq!(g.edge_count(), points * (q as usize + 1));
            assert_eq!(degree_stats(&g).unwrap(), (q as usize + 1, q as usize + 1));
            if q <= 3 {
                assert_eq!(girth(&g), Some(8));
            }
        }
    }

    #[test]
    fn gq_rejects_non_primes() {
        assert!(gq_incidence(4).is_err());
        assert!(gq_incidence(1).is_err());
    }
}
