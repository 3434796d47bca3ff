//! Constructive embedding of the 1-subdivision of `L_{s,t}` into a balanced
//! bipartite host whose degrees all lie in `[δ, Kδ]`.
//!
//! The search works in the neighbourhood graph on part A, where a pair is
//! *light* when its codegree is in `[1, C(s+t-1, 2))` and *heavy* above that.
//!
//! 1. If `s + t - 1` A-vertices are pairwise heavy, every pattern edge can get
//!    its own common neighbour and we are done.
//! 2. Otherwise pick `u_1, …, u_{t-1}` one at a time. Each `u_i` comes from
//!    the candidate set `U` of vertices light to all earlier `u_j` and sharing
//!    no neighbour with any earlier pair `u_j, u_k`; the vertex of largest
//!    light degree inside `U` is taken.
//! 3. Among the vertices light to every `u_i`, greedily accept `v_1, …, v_s`
//!    avoiding common neighbours of `u_i, u_j, v` and of `u_i, v_j, v`.
//! 4. Route each pattern edge through the smallest common neighbour of its
//!    ends. The avoidance conditions make these midpoints distinct.
//!
//! All counting thresholds along the way are the asymptotic ones scaled by
//! `slack`; a threshold miss is reported with the full trace rather than
//! treated as a bug.

pub mod certificate;
pub mod clique;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::delta_threshold;
use crate::graph::{degree_stats, sorted_intersection_count, Adjacency, BipartiteGraph, GeneralGraph, GraphError, VertexId};
use crate::pattern::Pattern;
use crate::regularize::{regularize, RegularizeError, RegularizeParams, RegularizeReport};
use crate::weights::{check_params, heavy_threshold, NeighbourhoodWeights};

pub use certificate::{validate_certificate, validate_in_graph, SubdivisionCertificate};
pub use clique::{find_heavy_clique, HeavyCliqueSearch, EXACT_CLIQUE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbedParams {
    pub s: usize,
    pub t: usize,
    /// Degree-ratio bound of the host; `None` uses the host's own `max/min`.
    #[serde(rename = "K")]
    pub k: Option<f64>,
    /// Constant in the density requirement `δ ≥ c·n^{(t-2)/(2t-3)}`.
    pub c: f64,
    /// Multiplier on every counting threshold; `0` disables them.
    pub slack: f64,
    /// Node budget for heavy-clique searches above [`EXACT_CLIQUE_LIMIT`].
    pub heavy_budget: u64,
}

impl EmbedParams {
    pub fn new(s: usize, t: usize) -> Self {
        Self { s, t, k: None, c: 1.0, slack: 1.0, heavy_budget: 1_000_000 }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn validate(&self) -> Result<(), EmbedError> {
        check_params(self.s, self.t)?;
        let bad = |msg: String| Err(EmbedError::InvalidParams(msg));
        if let Some(k) = self.k {
            if !(k >= 1.0) {
                return bad(format!("K = {k} must be >= 1"));
            }
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return bad(format!("c = {} must be positive", self.c));
        }
        if !(self.slack >= 0.0) || !self.slack.is_finite() {
            return bad(format!("slack = {} must be non-negative", self.slack));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    /// `|U| ≥ slack · 8(s+t)n/δ`, the size needed before picking `u_i`.
    CandidateSet,
    /// `#{v light to u_1..u_i} ≥ slack · (δ²/(32(s+t)³n))^i · |A|`.
    LightToAll,
    /// `|V| > slack · (C(t-1,2) + (t-1)(s-1)) · C(s+t-1,2) · Kδ`.
    SelectionPool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "phase", rename_all = "kebab-case")]
pub enum TraceEvent {
    HeavyClique {
        size: usize,
        found: bool,
        nodes: u64,
        exact: bool,
    },
    Branch {
        step: usize,
        /// Vertices light to every earlier `u_j`.
        u0: usize,
        /// `u0` minus vertices sharing a neighbour with an earlier pair.
        u: usize,
        /// Proven cap on `u0 - u`: `C(i-1,2) · C(s+t-1,2) · Kδ`.
        removal_bound: f64,
        candidate_demand: f64,
        chosen: Option<VertexId>,
        light_degree: usize,
        light_to_all: usize,
        threshold: f64,
    },
    Selection {
        pool: usize,
        pool_demand: f64,
    },
    Pick {
        k: usize,
        chosen: VertexId,
        rejected_uu: usize,
        rejected_uv: usize,
    },
}

/// Step-by-step log of one embedding attempt.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EmbedTrace {
    pub events: Vec<TraceEvent>,
}

impl EmbedTrace {
    pub fn branch_steps(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(|e| matches!(e, TraceEvent::Branch { .. }))
    }

    pub fn picks(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(|e| matches!(e, TraceEvent::Pick { .. }))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("host precondition failed: {0}")]
    Precondition(String),
    #[error("threshold failure at step {step} ({kind:?}): observed {observed}, demanded {demanded:.3}")]
    ThresholdFailure {
        step: usize,
        kind: ThresholdKind,
        observed: usize,
        demanded: f64,
        trace: Box<EmbedTrace>,
    },
    #[error("selection failure: accepted {accepted} of {needed} from a pool of {pool} ({rejected_uu} blocked by u-pairs, {rejected_uv} by (u, v) pairs)")]
    SelectionFailure {
        accepted: usize,
        needed: usize,
        pool: usize,
        rejected_uu: usize,
        rejected_uv: usize,
        trace: Box<EmbedTrace>,
    },
    #[error("invalid branch set: {0}")]
    InvalidBranchSet(String),
    #[error("internal invariant violated: pattern edges {first} and {second} share midpoint {vertex}")]
    MidpointCollision { first: usize, second: usize, vertex: VertexId },
}

impl EmbedError {
    /// Failures that mean "this host does not meet the requirements at this
    /// scale", as opposed to bad input or a bug.
    pub fn is_structured_failure(&self) -> bool {
        matches!(
            self,
            EmbedError::Precondition(_)
                | EmbedError::ThresholdFailure { .. }
                | EmbedError::SelectionFailure { .. }
        )
    }

    pub fn trace(&self) -> Option<&EmbedTrace> {
        match self {
            EmbedError::ThresholdFailure { trace, .. } | EmbedError::SelectionFailure { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssemblyMode {
    LightPath,
    HeavyClique,
}

/// Host quantities the thresholds are computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HostSummary {
    pub n_a: usize,
    /// `n = |B|`.
    pub n: usize,
    pub delta: usize,
    pub max_degree: usize,
    #[serde(rename = "K")]
    pub k: f64,
    /// `c · n^{(t-2)/(2t-3)}`.
    pub delta_required: f64,
    /// `δ² / (32(s+t)³n)`.
    pub rho: f64,
}

impl HostSummary {
    fn measure(host: &BipartiteGraph, p: &EmbedParams) -> Result<Self, EmbedError> {
        let (delta, max_degree) = degree_stats(host)?;
        let n = host.n_b();
        let st = (p.s + p.t) as f64;
        Ok(Self {
            n_a: host.n_a(),
            n,
            delta,
            max_degree,
            k: p.k.unwrap_or(if delta == 0 { f64::INFINITY } else { max_degree as f64 / delta as f64 }),
            delta_required: delta_threshold(p.t as u32, p.c, n),
            rho: (delta * delta) as f64 / (32.0 * st.powi(3) * n.max(1) as f64),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbedOutcome {
    pub certificate: SubdivisionCertificate,
    pub mode: AssemblyMode,
    pub host: HostSummary,
    pub trace: EmbedTrace,
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn is_light(w: &NeighbourhoodWeights<'_>, u: VertexId, v: VertexId, threshold: usize) -> bool {
    let c = w.weight(u, v);
    c >= 1 && c < threshold
}

/// Marks every A-vertex that shares a neighbour with both `x` and `y`.
fn mark_common_neighbourhood(host: &BipartiteGraph, x: VertexId, y: VertexId, mask: &mut [bool]) {
    let (nx, ny) = (host.neighbours(x), host.neighbours(y));
    let (mut i, mut j) = (0, 0);
    while i < nx.len() && j < ny.len() {
        match nx[i].cmp(&ny[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                for &a in host.neighbours(nx[i]) {
                    mask[a as usize] = true;
                }
                i += 1;
                j += 1;
            }
        }
    }
}

fn threshold_failure(
    step: usize,
    kind: ThresholdKind,
    observed: usize,
    demanded: f64,
    trace: &EmbedTrace,
) -> EmbedError {
    EmbedError::ThresholdFailure { step, kind, observed, demanded, trace: Box::new(trace.clone()) }
}

/// Chooses `u_1, …, u_{t-1}`; appends one `Branch` event per step.
fn branch_vertices_into(
    weights: &NeighbourhoodWeights<'_>,
    p: &EmbedParams,
    summary: &HostSummary,
    trace: &mut EmbedTrace,
) -> Result<Vec<VertexId>, EmbedError> {
    let host = weights.graph();
    let threshold = heavy_threshold(p.s, p.t);
    let st = (p.s + p.t) as f64;
    let candidate_demand = if summary.delta == 0 {
        f64::INFINITY
    } else {
        p.slack * 8.0 * st * summary.n as f64 / summary.delta as f64
    };
    let kd = summary.k * summary.delta as f64;
    let mut us: Vec<VertexId> = Vec::with_capacity(p.t - 1);
    let mut light_to_all: Vec<VertexId> = host.part_a().collect();
    for step in 1..p.t {
        let mut blocked = vec![false; host.n_a()];
        for (j, &x) in us.iter().enumerate() {
            for &y in &us[j + 1..] {
                mark_common_neighbourhood(host, x, y, &mut blocked);
            }
        }
        let candidates: Vec<VertexId> = light_to_all.iter().copied().filter(|&v| !blocked[v as usize]).collect();
        let mut event = TraceEvent::Branch {
            step,
            u0: light_to_all.len(),
            u: candidates.len(),
            removal_bound: (binom2(step - 1) * threshold) as f64 * kd,
            candidate_demand,
            chosen: None,
            light_degree: 0,
            light_to_all: 0,
            threshold: p.slack * summary.rho.powi(step as i32) * summary.n_a as f64,
        };
        let demand = candidate_demand.max(1.0);
        if (candidates.len() as f64) < demand {
            trace.events.push(event);
            return Err(threshold_failure(step, ThresholdKind::CandidateSet, candidates.len(), demand, trace));
        }

        let mut inside = vec![false; host.n_a()];
        for &v in &candidates {
            inside[v as usize] = true;
        }
        let (chosen, light_degree) = candidates
            .iter()
            .map(|&u| {
                let d = weights
                    .row(u)
                    .iter()
                    .filter(|&&(v, c)| inside[v as usize] && (c as usize) < threshold)
                    .count();
                (u, d)
            })
            // Largest light degree; smallest id among equals.
            .min_by_key(|&(u, d)| (std::cmp::Reverse(d), u))
            .expect("candidate set is nonempty");
        us.push(chosen);
        light_to_all.retain(|&v| v != chosen && is_light(weights, chosen, v, threshold));

        let TraceEvent::Branch { chosen: c, light_degree: ld, light_to_all: lta, threshold: thr, .. } = &mut event
        else {
            unreachable!()
        };
        *c = Some(chosen);
        *ld = light_degree;
        *lta = light_to_all.len();
        let demand = thr.max(1.0);
        trace.events.push(event);
        if (light_to_all.len() as f64) < demand {
            return Err(threshold_failure(step, ThresholdKind::LightToAll, light_to_all.len(), demand, trace));
        }
    }
    Ok(us)
}

/// Picks `t - 1` branch vertices for `T` following the recursive light-edge construction.
pub fn find_branch_vertices(
    weights: &NeighbourhoodWeights<'_>,
    p: &EmbedParams,
) -> Result<(Vec<VertexId>, EmbedTrace), EmbedError> {
    p.validate()?;
    let summary = HostSummary::measure(weights.graph(), p)?;
    let mut trace = EmbedTrace::default();
    let us = branch_vertices_into(weights, p, &summary, &mut trace)?;
    Ok((us, trace))
}

fn s_vertices_into(
    weights: &NeighbourhoodWeights<'_>,
    us: &[VertexId],
    p: &EmbedParams,
    summary: &HostSummary,
    trace: &mut EmbedTrace,
) -> Result<Vec<VertexId>, EmbedError> {
    let host = weights.graph();
    let threshold = heavy_threshold(p.s, p.t);
    if us.len() != p.t - 1 {
        return Err(EmbedError::InvalidBranchSet(format!("expected {} u-vertices, got {}", p.t - 1, us.len())));
    }
    if let Some(&u) = us.iter().find(|&&u| !host.in_a(u)) {
        return Err(EmbedError::InvalidBranchSet(format!("vertex {u} is not in part A")));
    }
    for (i, &x) in us.iter().enumerate() {
        for &y in &us[i + 1..] {
            if !is_light(weights, x, y, threshold) {
                return Err(EmbedError::InvalidBranchSet(format!("pair ({x}, {y}) is not light")));
            }
            for &z in &us[i + 1..] {
                if z != y && triple_meets(host, x, y, z) {
                    return Err(EmbedError::InvalidBranchSet(format!("({x}, {y}, {z}) share a neighbour")));
                }
            }
        }
    }

    let pool: Vec<VertexId> = host
        .part_a()
        .filter(|v| !us.contains(v) && us.iter().all(|&u| is_light(weights, u, *v, threshold)))
        .collect();
    let pool_bound = (binom2(p.t - 1) + (p.t - 1) * (p.s - 1)) as f64
        * threshold as f64
        * summary.k
        * summary.delta as f64;
    let pool_demand = p.slack * pool_bound;
    trace.events.push(TraceEvent::Selection { pool: pool.len(), pool_demand });
    if !(pool.len() as f64 > pool_demand) {
        return Err(threshold_failure(p.t, ThresholdKind::SelectionPool, pool.len(), pool_demand, trace));
    }

    let mut blocked_uu = vec![false; host.n_a()];
    for (i, &x) in us.iter().enumerate() {
        for &y in &us[i + 1..] {
            mark_common_neighbourhood(host, x, y, &mut blocked_uu);
        }
    }
    let mut blocked_uv = vec![false; host.n_a()];
    let (mut rejected_uu, mut rejected_uv) = (0, 0);
    let mut vs = Vec::with_capacity(p.s);
    for &v in &pool {
        if vs.len() == p.s {
            break;
        }
        if blocked_uu[v as usize] {
            rejected_uu += 1;
            continue;
        }
        if blocked_uv[v as usize] {
            rejected_uv += 1;
            continue;
        }
        vs.push(v);
        trace.events.push(TraceEvent::Pick { k: vs.len(), chosen: v, rejected_uu, rejected_uv });
        for &u in us {
            mark_common_neighbourhood(host, u, v, &mut blocked_uv);
        }
    }
    if vs.len() < p.s {
        return Err(EmbedError::SelectionFailure {
            accepted: vs.len(),
            needed: p.s,
            pool: pool.len(),
            rejected_uu,
            rejected_uv,
            trace: Box::new(trace.clone()),
        });
    }
    Ok(vs)
}

fn triple_meets(host: &BipartiteGraph, x: VertexId, y: VertexId, z: VertexId) -> bool {
    host.neighbours(x)
        .iter()
        .any(|b| host.neighbours(y).binary_search(b).is_ok() && host.neighbours(z).binary_search(b).is_ok())
}

/// Greedily picks `s` vertices for `S`, light to every `u_i` and free of shared
/// neighbours with any `(u_i, u_j)` or `(u_i, v_j)` pair.
pub fn find_s_vertices(
    weights: &NeighbourhoodWeights<'_>,
    us: &[VertexId],
    p: &EmbedParams,
) -> Result<(Vec<VertexId>, EmbedTrace), EmbedError> {
    p.validate()?;
    let summary = HostSummary::measure(weights.graph(), p)?;
    let mut trace = EmbedTrace::default();
    let vs = s_vertices_into(weights, us, p, &summary, &mut trace)?;
    Ok((vs, trace))
}

/// Routes every pattern edge through a midpoint in B.
///
/// `branch[x]` is the image of pattern vertex `x` (S first, then T).
pub fn assemble_subdivision(
    host: &BipartiteGraph,
    branch: &[VertexId],
    pattern: &Pattern,
    mode: AssemblyMode,
) -> Result<SubdivisionCertificate, EmbedError> {
    if branch.len() != pattern.vertex_count() {
        return Err(EmbedError::InvalidBranchSet(format!(
            "expected {} branch vertices, got {}",
            pattern.vertex_count(),
            branch.len()
        )));
    }
    if let Some(&v) = branch.iter().find(|&&v| !host.in_a(v)) {
        return Err(EmbedError::InvalidBranchSet(format!("vertex {v} is not in part A")));
    }
    let mut sorted = branch.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != branch.len() {
        return Err(EmbedError::InvalidBranchSet("branch vertices repeat".into()));
    }
    if mode == AssemblyMode::HeavyClique {
        let threshold = heavy_threshold(pattern.s(), pattern.t());
        for (i, &x) in branch.iter().enumerate() {
            for &y in &branch[i + 1..] {
                if sorted_intersection_count(host.neighbours(x), host.neighbours(y)) < threshold {
                    return Err(EmbedError::InvalidBranchSet(format!("pair ({x}, {y}) is not heavy")));
                }
            }
        }
    }

    let mut owner = std::collections::HashMap::new();
    let mut midpoints = Vec::with_capacity(pattern.edges().len());
    for (e, &(x, y)) in pattern.edges().iter().enumerate() {
        let (bx, by) = (branch[x], branch[y]);
        let mut common = host.neighbours(bx).iter().copied().filter(|b| host.neighbours(by).binary_search(b).is_ok());
        let chosen = match mode {
            AssemblyMode::LightPath => common.next(),
            AssemblyMode::HeavyClique => common.find(|b| !owner.contains_key(b)),
        }
        .ok_or_else(|| EmbedError::InvalidBranchSet(format!("{bx} and {by} have no usable common neighbour")))?;
        if let Some(&first) = owner.get(&chosen) {
            return Err(EmbedError::MidpointCollision { first, second: e, vertex: chosen });
        }
        owner.insert(chosen, e);
        midpoints.push(chosen);
    }
    Ok(SubdivisionCertificate { s: pattern.s(), t: pattern.t(), branch: branch.to_vec(), midpoints })
}

fn check_host(host: &BipartiteGraph, summary: &HostSummary) -> Result<(), EmbedError> {
    if !host.is_balanced() {
        return Err(EmbedError::Precondition(format!(
            "host is not balanced (|A| = {}, |B| = {})",
            host.n_a(),
            host.n_b()
        )));
    }
    if summary.delta == 0 {
        return Err(EmbedError::Precondition("host has an isolated vertex".into()));
    }
    if summary.max_degree as f64 > summary.k * summary.delta as f64 {
        return Err(EmbedError::Precondition(format!(
            "max degree {} exceeds K·δ = {}·{}",
            summary.max_degree, summary.k, summary.delta
        )));
    }
    if (summary.delta as f64) < summary.delta_required {
        return Err(EmbedError::Precondition(format!(
            "δ = {} is below c·n^((t-2)/(2t-3)) = {:.3}",
            summary.delta, summary.delta_required
        )));
    }
    Ok(())
}

/// Finds a copy of the 1-subdivision of `L_{s,t}` in `host`.
///
/// The heavy-clique shortcut is tried first and needs no preconditions; the
/// light-edge construction requires a balanced host with degrees in `[δ, Kδ]`
/// and `δ ≥ c·n^{(t-2)/(2t-3)}`.
pub fn embed(host: &BipartiteGraph, p: &EmbedParams) -> Result<EmbedOutcome, EmbedError> {
    p.validate()?;
    let pattern = Pattern::new(p.s, p.t)?;
    let summary = HostSummary::measure(host, p)?;
    let weights = NeighbourhoodWeights::new(host);
    let mut trace = EmbedTrace::default();

    let heavy = find_heavy_clique(&weights, p.s, p.t, p.heavy_budget);
    trace.events.push(TraceEvent::HeavyClique {
        size: pattern.vertex_count(),
        found: heavy.clique.is_some(),
        nodes: heavy.nodes,
        exact: heavy.exact,
    });
    if let Some(clique) = heavy.clique {
        let certificate = assemble_subdivision(host, &clique, &pattern, AssemblyMode::HeavyClique)?;
        return Ok(EmbedOutcome { certificate, mode: AssemblyMode::HeavyClique, host: summary, trace });
    }

    check_host(host, &summary)?;
    let us = branch_vertices_into(&weights, p, &summary, &mut trace)?;
    let vs = s_vertices_into(&weights, &us, p, &summary, &mut trace)?;
    let branch: Vec<VertexId> = vs.into_iter().chain(us).collect();
    let certificate = assemble_subdivision(host, &branch, &pattern, AssemblyMode::LightPath)?;
    Ok(EmbedOutcome { certificate, mode: AssemblyMode::LightPath, host: summary, trace })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    Regularize(#[from] RegularizeError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOutcome {
    pub regularization: RegularizeReport,
    /// Embedding inside the extracted subgraph, in its local ids.
    pub local: EmbedOutcome,
    /// The same copy in the ids of the input graph.
    pub certificate: SubdivisionCertificate,
}

/// Regularizes a dense general graph with `α = (t-2)/(2t-3)` and embeds into
/// the extracted subgraph. `ep.k` defaults to the achieved degree ratio.
pub fn pipeline_embed(
    g: &GeneralGraph,
    rp: &RegularizeParams,
    ep: &EmbedParams,
) -> Result<PipelineOutcome, PipelineError> {
    ep.validate()?;
    let alpha = (ep.t - 2) as f64 / (2 * ep.t - 3) as f64;
    let rp = RegularizeParams { alpha, ..*rp };
    let regularization = regularize(g, &rp)?;
    let ep = EmbedParams { k: ep.k.or(Some(regularization.achieved_k)), ..*ep };
    let local = embed(&regularization.subgraph, &ep)?;
    let certificate = local.certificate.translate(&regularization.origin);
    debug_assert!(validate_in_graph(g, &certificate, &certificate.pattern()));
    Ok(PipelineOutcome { regularization, local, certificate })
}

#[cfg(test)]
mod tests;
