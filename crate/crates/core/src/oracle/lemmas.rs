//! Direct evaluation of the counting inequalities behind the embedding.
//!
//! Each checker validates its preconditions first and returns
//! [`LemmaError::PreconditionFailed`] when they do not hold. A report with
//! `holds == false` on valid input would contradict a proven inequality, so
//! tests treat it as an implementation bug.
//!
//! When δ is an integer the comparisons are done in exact integer
//! arithmetic; otherwise in `f64`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Adjacency, BipartiteGraph, GraphError, VertexId};
use crate::oracle::iso::{contains_subdivision, Containment};
use crate::pattern::Pattern;
use crate::weights::{check_params, heavy_threshold, NeighbourhoodWeights};

/// Hosts up to this many vertices have their freeness checked by the oracle.
pub const FREENESS_VERTEX_LIMIT: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    Locallydense,
    Manylight,
    Turan,
    Lightcorollary,
}

/// How the "host contains no subdivided `L_{s,t}`" precondition is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Freeness {
    /// Run the containment oracle when the host has at most
    /// [`FREENESS_VERTEX_LIMIT`] vertices; trust the caller above that.
    Verify { budget: Option<u64> },
    /// Trust the caller.
    Assume,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FreenessStatus {
    NotRequired,
    Verified,
    Assumed,
    /// The host exceeds the oracle limit; freeness is the caller's claim.
    AssumedAboveLimit { limit: usize },
    /// The oracle ran out of budget; freeness is the caller's claim.
    AssumedBudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub holds: bool,
    /// The counted side of the inequality.
    pub lhs: f64,
    /// The bound it is compared against.
    pub rhs: f64,
    /// Turán step only: the sharper `(s+t-2)·C(k/(s+t-2), 2)` form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intermediate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intermediate_holds: Option<bool>,
    pub freeness: FreenessStatus,
}

fn fail(msg: String) -> LemmaError {
    LemmaError::PreconditionFailed(msg)
}

fn exact_delta(delta: f64) -> Option<u128> {
    (delta.fract() == 0.0 && (0.0..9.0e15).contains(&delta)).then_some(delta as u128)
}

/// `lhs ≥ δ² · rhs_factor`, exactly when δ is integral.
fn at_least_delta_squared(lhs: u128, delta: f64, rhs_factor: u128) -> bool {
    match exact_delta(delta) {
        Some(d) => lhs >= d * d * rhs_factor,
        None => lhs as f64 >= delta * delta * rhs_factor as f64,
    }
}

fn distinct(subset: &[VertexId]) -> Vec<VertexId> {
    let mut u = subset.to_vec();
    u.sort_unstable();
    u.dedup();
    u
}

fn check_min_degree(g: &BipartiteGraph, delta: f64) -> Result<(), LemmaError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(fail(format!("δ = {delta} must be positive")));
    }
    let min = g.min_degree_a().ok_or_else(|| fail("part A is empty".into()))?;
    if (min as f64) < delta {
        return Err(fail(format!("minimum degree over A is {min} < δ = {delta}")));
    }
    Ok(())
}

fn check_freeness(g: &BipartiteGraph, s: usize, t: usize, mode: Freeness) -> Result<FreenessStatus, LemmaError> {
    match mode {
        Freeness::Assume => Ok(FreenessStatus::Assumed),
        Freeness::Verify { .. } if g.order() > FREENESS_VERTEX_LIMIT => {
            Ok(FreenessStatus::AssumedAboveLimit { limit: FREENESS_VERTEX_LIMIT })
        }
        Freeness::Verify { budget } => {
            let pattern = Pattern::new(s, t)?.to_graph();
            match contains_subdivision(&g.to_general(), &pattern, budget) {
                Containment::No => Ok(FreenessStatus::Verified),
                Containment::BudgetExceeded => Ok(FreenessStatus::AssumedBudgetExceeded),
                Containment::Yes(_) => Err(fail(format!("host contains the subdivision of L_{{{s},{t}}}"))),
            }
        }
    }
}

/// `W(U) ≥ δ²/(2n) · C(|U|, 2)` for `U ⊆ A` with `δ|U| ≥ 2n`, where every
/// A-vertex has degree at least δ and `n = |B|`.
pub fn check_locallydense(g: &BipartiteGraph, subset: &[VertexId], delta: f64) -> Result<LemmaReport, LemmaError> {
    check_min_degree(g, delta)?;
    let u = distinct(subset);
    let n = g.n_b();
    if delta * (u.len() as f64) < 2.0 * n as f64 {
        return Err(fail(format!("δ|U| = {} is below 2n = {}", delta * u.len() as f64, 2 * n)));
    }
    let weight = NeighbourhoodWeights::new(g).total_weight(&u)?;
    let size = u.len() as u128;
    // 4n · W(U) ≥ δ² · |U|(|U| - 1).
    let holds = at_least_delta_squared(4 * n as u128 * weight as u128, delta, size * size.saturating_sub(1));
    Ok(LemmaReport {
        lemma: Lemma::Locallydense,
        holds,
        lhs: weight as f64,
        rhs: delta * delta / (2.0 * n as f64) * (size * size.saturating_sub(1) / 2) as f64,
        intermediate: None,
        intermediate_holds: None,
        freeness: FreenessStatus::NotRequired,
    })
}

/// At least `W(A)/(4(s+t)³)` pairs of A are light, given `W(A) ≥ 8(s+t)²n`
/// and no subdivided `L_{s,t}` in the host.
pub fn check_manylight(g: &BipartiteGraph, s: usize, t: usize, freeness: Freeness) -> Result<LemmaReport, LemmaError> {
    check_params(s, t)?;
    let weights = NeighbourhoodWeights::new(g);
    let total = weights.total() as u128;
    let st = (s + t) as u128;
    let n = g.n_b() as u128;
    if total < 8 * st * st * n {
        return Err(fail(format!("W(A) = {total} is below 8(s+t)²n = {}", 8 * st * st * n)));
    }
    let status = check_freeness(g, s, t, freeness)?;
    let light = weights.light_pair_count(s, t) as u128;
    Ok(LemmaReport {
        lemma: Lemma::Manylight,
        holds: 4 * st.pow(3) * light >= total,
        lhs: light as f64,
        rhs: total as f64 / (4 * st.pow(3)) as f64,
        intermediate: None,
        intermediate_holds: None,
        freeness: status,
    })
}

/// Light pairs inside `N(b)` number at least `k²/(4(s+t-2))` for `k = deg(b)
/// ≥ 2(s+t-2)`; the sharper `(s+t-2)·C(k/(s+t-2), 2)` is checked alongside.
pub fn check_turan_step(
    g: &BipartiteGraph,
    b: VertexId,
    s: usize,
    t: usize,
    freeness: Freeness,
) -> Result<LemmaReport, LemmaError> {
    check_params(s, t)?;
    if !g.in_b(b) {
        return Err(GraphError::InvalidSubset(b).into());
    }
    let r = (s + t - 2) as u128;
    let k = g.degree(b) as u128;
    if k < 2 * r {
        return Err(fail(format!("deg({b}) = {k} is below 2(s+t-2) = {}", 2 * r)));
    }
    let status = check_freeness(g, s, t, freeness)?;
    let threshold = heavy_threshold(s, t);
    let nb = g.neighbours(b);
    let light = nb
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| nb[i + 1..].iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| g.codegree(x, y).expect("neighbours of b lie in A") < threshold)
        .count() as u128;
    Ok(LemmaReport {
        lemma: Lemma::Turan,
        holds: 4 * r * light >= k * k,
        lhs: light as f64,
        rhs: (k * k) as f64 / (4 * r) as f64,
        // r · C(k/r, 2) = k(k - r)/(2r).
        intermediate: Some((k * (k - r)) as f64 / (2 * r) as f64),
        intermediate_holds: Some(2 * r * light >= k * (k - r)),
        freeness: status,
    })
}

/// Light pairs inside `U` number at least `δ²/(8(s+t)³n) · C(|U|, 2)` when
/// `|U| ≥ 8(s+t)n/δ`, every A-vertex has degree at least δ, and the host has
/// no subdivided `L_{s,t}`.
pub fn check_lightcorollary(
    g: &BipartiteGraph,
    subset: &[VertexId],
    s: usize,
    t: usize,
    delta: f64,
    freeness: Freeness,
) -> Result<LemmaReport, LemmaError> {
    check_params(s, t)?;
    check_min_degree(g, delta)?;
    let u = distinct(subset);
    let n = g.n_b();
    let st = (s + t) as u128;
    if u.len() < 2 {
        return Err(fail(format!("|U| = {} is below 2", u.len())));
    }
    if delta * (u.len() as f64) < (8 * st) as f64 * n as f64 {
        return Err(fail(format!(
            "|U| = {} is below 8(s+t)n/δ = {:.3}",
            u.len(),
            (8 * st) as f64 * n as f64 / delta
        )));
    }
    let status = check_freeness(g, s, t, freeness)?;
    let light = NeighbourhoodWeights::new(g).light_pairs_within(&u, s, t)? as u128;
    let size = u.len() as u128;
    let pairs = size * (size - 1) / 2;
    Ok(LemmaReport {
        lemma: Lemma::Lightcorollary,
        // 8(s+t)³n · light ≥ δ² · C(|U|, 2).
        holds: at_least_delta_squared(8 * st.pow(3) * n as u128 * light, delta, pairs),
        lhs: light as f64,
        rhs: delta * delta / ((8 * st.pow(3)) as f64 * n as f64) * pairs as f64,
        intermediate: None,
        intermediate_holds: None,
        freeness: status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gq_incidence, grid_incidence, random_bipartite};

    fn grid(r: usize, c: usize) -> BipartiteGraph {
        grid_incidence(r, c).unwrap()
    }

    #[test]
    fn complete_bipartite_locallydense_is_twice_the_bound() {
        let edges: Vec<_> = (0..6).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let g = BipartiteGraph::new(6, 4, &edges).unwrap();
        let r = check_locallydense(&g, &(0..6).collect::<Vec<_>>(), 4.0).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, 4.0 * 15.0);
        assert_eq!(r.lhs, 2.0 * r.rhs);
    }

    #[test]
    fn locallydense_preconditions() {
        let g = random_bipartite(10, 10, 0.5, 3).unwrap();
        let delta = g.min_degree_a().unwrap() as f64;
        assert!(matches!(check_locallydense(&g, &[0], delta), Err(LemmaError::PreconditionFailed(_))));
        assert!(matches!(
            check_locallydense(&g, &(0..10).collect::<Vec<_>>(), delta + 1.0),
            Err(LemmaError::PreconditionFailed(_))
        ));
        assert!(matches!(check_locallydense(&g, &[0, 15], 1.0), Err(LemmaError::Graph(_)) | Err(LemmaError::PreconditionFailed(_))));
    }

    #[test]
    fn gq_fires_the_manylight_and_turan_preconditions() {
        let gq = gq_incidence(2).unwrap();
        // W(A) = 15 · C(3, 2) = 45 < 8 · 16 · 15.
        let err = check_manylight(&gq, 1, 3, Freeness::Verify { budget: None }).unwrap_err();
        assert!(matches!(err, LemmaError::PreconditionFailed(ref m) if m.contains("W(A) = 45")));
        for b in gq.part_b() {
            assert!(matches!(check_turan_step(&gq, b, 1, 3, Freeness::Assume), Err(LemmaError::PreconditionFailed(_))));
        }
    }

    #[test]
    fn grid_satisfies_manylight_turan_and_corollary() {
        let g = grid(17, 17);
        let r = check_manylight(&g, 1, 3, Freeness::Verify { budget: None }).unwrap();
        assert!(r.holds);
        assert_eq!(r.freeness, FreenessStatus::AssumedAboveLimit { limit: FREENESS_VERTEX_LIMIT });
        // Every pair of cells on a common line has codegree 1.
        assert_eq!(r.lhs, (34 * 17 * 16 / 2) as f64);

        let b = g.part_b().next().unwrap();
        let r = check_turan_step(&g, b, 1, 3, Freeness::Assume).unwrap();
        assert!(r.holds && r.intermediate_holds == Some(true));
        assert_eq!(r.lhs, 136.0);

        let g = grid(32, 32);
        let all: Vec<_> = g.part_a().collect();
        let r = check_lightcorollary(&g, &all, 1, 3, 2.0, Freeness::Assume).unwrap();
        assert!(r.holds);
        assert!(matches!(
            check_lightcorollary(&g, &all[..1023], 1, 3, 2.0, Freeness::Assume),
            Err(LemmaError::PreconditionFailed(_))
        ));
        assert!(matches!(
            check_lightcorollary(&g, &all[..1], 1, 3, 2.0, Freeness::Assume),
            Err(LemmaError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn freeness_is_verified_on_small_hosts() {
        let g = grid(4, 4);
        let b = g.part_b().next().unwrap();
        let r = check_turan_step(&g, b, 1, 3, Freeness::Verify { budget: None }).unwrap();
        assert_eq!(r.freeness, FreenessStatus::Verified);
        // K_{4,4} contains a 6-cycle.
        let edges: Vec<_> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let dense = BipartiteGraph::new(4, 4, &edges).unwrap();
        let err = check_turan_step(&dense, 4, 1, 3, Freeness::Verify { budget: None }).unwrap_err();
        assert!(matches!(err, LemmaError::PreconditionFailed(ref m) if m.contains("contains")));
        let r = check_turan_step(&dense, 4, 1, 3, Freeness::Verify { budget: Some(1) }).unwrap();
        assert_eq!(r.freeness, FreenessStatus::AssumedBudgetExceeded);
    }

    #[test]
    fn all_light_neighbourhood_meets_turan_bound() {
        // b adjacent to exactly 2(s+t-2) = 4 vertices, all pairwise light.
        let g = grid(4, 6);
        let b = g.part_b().next().unwrap() + 4; // first column, degree 4
        assert_eq!(g.degree(b), 4);
        let r = check_turan_step(&g, b, 1, 3, Freeness::Assume).unwrap();
        assert_eq!(r.lhs, 6.0);
        assert!(r.holds);
    }

    #[test]
    fn fractional_delta_uses_floating_comparison() {
        let g = grid(32, 32);
        let all: Vec<_> = g.part_a().collect();
        let r = check_lightcorollary(&g, &all, 1, 3, 1.5, Freeness::Assume);
        // |U| · δ = 1536 is below 8(s+t)n = 2048.
        assert!(matches!(r, Err(LemmaError::PreconditionFailed(_))));
        let r = check_locallydense(&g, &all, 1.5).unwrap();
        assert!(r.holds);
    }
}
