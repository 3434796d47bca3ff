use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use subdivlab::constructions::{random_bipartite, random_graph};
use subdivlab::embed::{
    embed, pipeline_embed, validate_certificate, validate_in_graph, EmbedError, PipelineError, ThresholdKind,
};
use subdivlab::graph::degree_stats;
use subdivlab::regularize::RegularizeError;
use subdivlab::{Adjacency, Pattern};

use crate::args::{Cli, ExperimentArgs, ExperimentKind, Format};
use crate::commands::{csv_preamble, embed_params, regularize_params};
use crate::report::{envelope, CliError, Output};

/// One CSV row per seed. Columns are stable; `wall_ms` only appears with `--timing`.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub seed: u64,
    pub host_vertices: usize,
    pub host_edges: usize,
    /// Vertices of the graph handed to the embedder.
    pub m: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    #[serde(rename = "achieved_K")]
    pub achieved_k: f64,
    pub outcome: &'static str,
    pub mode: String,
    pub failure_step: Option<usize>,
    pub failure_kind: String,
    pub certificate_vertices: usize,
    /// Independent validator verdict; empty on failure.
    pub valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub all_valid: bool,
}

pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let text = text.trim();
    let bad = || CliError::input(format!("cannot read seeds from {text:?}"));
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        return match b.strip_prefix('=') {
            Some(b) => Ok((a..=b.trim().parse().map_err(|_| bad())?).collect()),
            None => Ok((a..b.trim().parse().map_err(|_| bad())?).collect()),
        };
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn failure_kind(e: &EmbedError) -> (Option<usize>, &'static str) {
    match e {
        EmbedError::Precondition(_) => (None, "precondition"),
        EmbedError::ThresholdFailure { step, kind, .. } => (
            Some(*step),
            match kind {
                ThresholdKind::CandidateSet => "candidate-set",
                ThresholdKind::LightToAll => "light-to-all",
                ThresholdKind::SelectionPool => "selection-pool",
            },
        ),
        EmbedError::SelectionFailure { .. } => (None, "selection"),
        _ => (None, "internal"),
    }
}

fn regularize_kind(e: &RegularizeError) -> &'static str {
    match e {
        RegularizeError::InvalidParams(_) => "invalid-params",
        RegularizeError::TooSparse { .. } => "too-sparse",
        RegularizeError::DegenerateOutput { .. } => "degenerate-output",
        RegularizeError::TargetUnreached { .. } => "target-unreached",
    }
}

fn run_seed(cli: &Cli, args: &ExperimentArgs, p: f64, seed: u64) -> Result<Row, CliError> {
    let started = Instant::now();
    let params = embed_params(&args.embed, None)?;
    let pattern = Pattern::new(args.embed.s, args.embed.t).map_err(|e| CliError::input(e.to_string()))?;
    let to_input = |e: subdivlab::constructions::ConstructionError| CliError::input(e.to_string());
    let mut row = match args.run {
        ExperimentKind::Embed => {
            let host = random_bipartite(args.n, args.n, p, seed).map_err(to_input)?;
            let (min, max) = degree_stats(&host).unwrap_or((0, 0));
            let mut row = Row {
                seed,
                host_vertices: host.order(),
                host_edges: host.edge_count(),
                m: host.order(),
                n_a: host.n_a(),
                n_b: host.n_b(),
                edges: host.edge_count(),
                min_degree: min,
                max_degree: max,
                achieved_k: if min == 0 { f64::INFINITY } else { max as f64 / min as f64 },
                outcome: "failure",
                mode: String::new(),
                failure_step: None,
                failure_kind: String::new(),
                certificate_vertices: 0,
                valid: None,
                wall_ms: None,
            };
            match embed(&host, &params) {
                Ok(out) => {
                    row.outcome = "success";
                    row.mode = crate::report::to_value(&out.mode).as_str().unwrap_or_default().to_owned();
                    row.certificate_vertices = out.certificate.branch.len() + out.certificate.midpoints.len();
                    row.valid = Some(validate_certificate(&host, &out.certificate, &pattern));
                }
                Err(e) if e.is_structured_failure() => {
                    let (step, kind) = failure_kind(&e);
                    row.failure_step = step;
                    row.failure_kind = kind.to_owned();
                }
                Err(e) => return Err(CliError::input(e.to_string())),
            }
            row
        }
        ExperimentKind::Pipeline => {
            let t = args.embed.t;
            let alpha = (t - 2) as f64 / (2 * t - 3) as f64;
            let rp = regularize_params(alpha, args.c_density, args.k, cli.seed ^ seed)?;
            let g = random_graph(args.n, p, seed).map_err(to_input)?;
            let mut row = Row {
                seed,
                host_vertices: g.order(),
                host_edges: g.edge_count(),
                m: 0,
                n_a: 0,
                n_b: 0,
                edges: 0,
                min_degree: 0,
                max_degree: 0,
                achieved_k: 0.0,
                outcome: "failure",
                mode: String::new(),
                failure_step: None,
                failure_kind: String::new(),
                certificate_vertices: 0,
                valid: None,
                wall_ms: None,
            };
            match pipeline_embed(&g, &rp, &params) {
                Ok(out) => {
                    let r = &out.regularization;
                    let (min, max) = degree_stats(&r.subgraph).unwrap_or((0, 0));
                    (row.m, row.n_a, row.n_b, row.edges) = (r.m, r.n_a, r.n_b, r.edges);
                    (row.min_degree, row.max_degree, row.achieved_k) = (min, max, r.achieved_k);
                    row.outcome = "success";
                    row.mode = crate::report::to_value(&out.local.mode).as_str().unwrap_or_default().to_owned();
                    row.certificate_vertices = out.certificate.branch.len() + out.certificate.midpoints.len();
                    row.valid = Some(validate_in_graph(&g, &out.certificate, &pattern));
                }
                Err(PipelineError::Regularize(e)) => row.failure_kind = regularize_kind(&e).to_owned(),
                Err(PipelineError::Embed(e)) if e.is_structured_failure() => {
                    let (step, kind) = failure_kind(&e);
                    row.failure_step = step;
                    row.failure_kind = kind.to_owned();
                }
                Err(PipelineError::Embed(e)) => return Err(CliError::input(e.to_string())),
            }
            row
        }
    };
    if args.timing {
        row.wall_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    Ok(row)
}

pub fn summarize(rows: &[Row]) -> Summary {
    let successes = rows.iter().filter(|r| r.outcome == "success").count();
    Summary {
        runs: rows.len(),
        successes,
        success_rate: if rows.is_empty() { 0.0 } else { successes as f64 / rows.len() as f64 },
        all_valid: rows.iter().all(|r| r.valid != Some(false)),
    }
}

const COLUMNS: &[&str] = &[
    "seed",
    "host_vertices",
    "host_edges",
    "m",
    "n_a",
    "n_b",
    "edges",
    "min_degree",
    "max_degree",
    "achieved_K",
    "outcome",
    "mode",
    "failure_step",
    "failure_kind",
    "certificate_vertices",
    "valid",
];

pub fn experiment_cmd(cli: &Cli, args: &ExperimentArgs) -> Result<Output, CliError> {
    let seeds = parse_seeds(&args.seeds)?;
    embed_params(&args.embed, None)?;
    if !(args.n >= 1) {
        return Err(CliError::input("--n must be positive"));
    }
    let p = args.p.unwrap_or_else(|| (args.n as f64).powf(args.degree_exponent - 1.0).min(1.0));
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::input(format!("edge probability {p} is not in [0, 1]")));
    }
    let rows: Vec<Row> = seeds.par_iter().map(|&seed| run_seed(cli, args, p, seed)).collect::<Result<_, _>>()?;
    let summary = summarize(&rows);
    let text = match cli.format {
        Format::Json => envelope(cli, &json!({ "p": p, "rows": rows, "summary": summary })),
        Format::Csv => {
            let mut text = csv_preamble(cli);
            text.push_str(&format!("# p: {p}\n"));
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            let mut header: Vec<&str> = COLUMNS.to_vec();
            if args.timing {
                header.push("wall_ms");
            }
            w.write_record(&header).map_err(|e| CliError::input(e.to_string()))?;
            for row in &rows {
                w.serialize(row).map_err(|e| CliError::input(e.to_string()))?;
            }
            text.push_str(&String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"));
            if !rows.is_empty() {
                text.push_str(&format!(
                    "# summary: runs={} successes={} success_rate={} all_valid={}\n",
                    summary.runs, summary.successes, summary.success_rate, summary.all_valid
                ));
            }
            text
        }
    };
    Ok(Output::ok(text))
}
