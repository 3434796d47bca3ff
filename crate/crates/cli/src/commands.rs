use serde::Serialize;
use serde_json::{json, Value};

use subdivlab::bounds::{bound_table, BoundRow};
use subdivlab::constructions::{
    deletion_lower_bound, gq_incidence, grid_incidence, random_bipartite, ConstructionError, DeletionMode,
};
use subdivlab::embed::{embed, pipeline_embed, EmbedError, EmbedParams, PipelineError};
use subdivlab::graph::{degree_stats, girth};
use subdivlab::io::{write_bipartite, write_general};
use subdivlab::oracle::{
    check_lightcorollary, check_locallydense, check_manylight, check_turan_step, extremal_number, ExtremalError,
    ExtremalMode, Freeness, LemmaError, LemmaReport,
};
use subdivlab::regularize::{regularize, RegularizeError, RegularizeParams};
use subdivlab::{subdivide, Adjacency, BipartiteGraph, GeneralGraph, Pattern, VertexId};

use crate::args::*;
use crate::report::*;

pub fn embed_params(flags: &EmbedFlags, k: Option<f64>) -> Result<EmbedParams, CliError> {
    let heavy_budget = match flags.heavy_budget {
        Some(b) => b,
        None => env_budget()?.unwrap_or(1_000_000),
    };
    let params = EmbedParams { k, heavy_budget, ..EmbedParams::new(flags.s, flags.t).with_c(flags.c).with_slack(flags.slack) };
    params.validate().map_err(|e| CliError::input(e.to_string()))?;
    Ok(params)
}

/// JSON body for an embedding failure, or an input error for bad parameters.
pub fn embed_failure(e: &EmbedError) -> Result<Value, CliError> {
    let detail = match e {
        EmbedError::Precondition(msg) => json!({ "error": "precondition", "detail": msg }),
        EmbedError::ThresholdFailure { step, kind, observed, demanded, trace } => json!({
            "error": "threshold-failure",
            "step": step,
            "kind": kind,
            "observed": observed,
            "demanded": demanded,
            "trace": trace,
        }),
        EmbedError::SelectionFailure { accepted, needed, pool, rejected_uu, rejected_uv, trace } => json!({
            "error": "selection-failure",
            "accepted": accepted,
            "needed": needed,
            "pool": pool,
            "rejected_uu": rejected_uu,
            "rejected_uv": rejected_uv,
            "trace": trace,
        }),
        other => return Err(CliError::input(other.to_string())),
    };
    let mut body = json!({ "status": "failure", "message": e.to_string() });
    merge(&mut body, detail);
    Ok(body)
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

pub fn gen(cli: &Cli, args: &GenArgs) -> Result<Output, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::input(format!("--kind {:?} needs --{flag}", args.kind)));
    let construction = |e: ConstructionError| CliError::input(e.to_string());
    let (text, report) = match args.kind {
        GenKind::Random => {
            let (na, nb) = (need(args.na, "na")?, need(args.nb, "nb")?);
            let p = args.p.ok_or_else(|| CliError::input("--kind random needs --p"))?;
            let g = random_bipartite(na, nb, p, cli.seed).map_err(construction)?;
            (write_bipartite(&g), bipartite_summary(&g))
        }
        GenKind::Gq => {
            let q = args.q.ok_or_else(|| CliError::input("--kind gq needs --q"))?;
            let g = gq_incidence(q).map_err(construction)?;
            let mut summary = bipartite_summary(&g);
            merge(&mut summary, json!({ "girth": girth(&g) }));
            (write_bipartite(&g), summary)
        }
        GenKind::Grid => {
            let g = grid_incidence(need(args.rows, "rows")?, need(args.cols, "cols")?).map_err(construction)?;
            (write_bipartite(&g), bipartite_summary(&g))
        }
        GenKind::Deletion => {
            let n = need(args.n, "n")?;
            let budget = match args.budget {
                Some(b) => Some(b),
                None if n > subdivlab::constructions::EXACT_DELETION_LIMIT => env_budget()?,
                None => None,
            };
            let mode = budget.map_or(DeletionMode::Exact, DeletionMode::Budgeted);
            let (g, report) = deletion_lower_bound(n, args.t, cli.seed, args.scale, mode).map_err(construction)?;
            (write_general(&g), to_value(&report))
        }
    };
    let sidecar = envelope(cli, &report);
    match (&args.report, &cli.out) {
        (Some(path), _) => write_text(path, &sidecar)?,
        (None, Some(out)) => {
            let mut path = out.clone().into_os_string();
            path.push(".json");
            write_text(path.as_ref(), &sidecar)?;
        }
        (None, None) => eprint!("{sidecar}"),
    }
    Ok(Output::ok(text))
}

fn bipartite_summary(g: &BipartiteGraph) -> Value {
    let (min, max) = degree_stats(g).unwrap_or((0, 0));
    json!({ "n_a": g.n_a(), "n_b": g.n_b(), "edges": g.edge_count(), "min_degree": min, "max_degree": max })
}

fn regularize_failure(e: &RegularizeError) -> Result<Value, CliError> {
    let kind = match e {
        RegularizeError::InvalidParams(_) => return Err(CliError::input(e.to_string())),
        RegularizeError::TooSparse { .. } => "too-sparse",
        RegularizeError::DegenerateOutput { .. } => "degenerate-output",
        RegularizeError::TargetUnreached { .. } => "target-unreached",
    };
    Ok(json!({ "status": "failure", "error": kind, "message": e.to_string() }))
}

pub fn regularize_params(alpha: f64, c: f64, k: Option<f64>, seed: u64) -> Result<RegularizeParams, CliError> {
    let base = RegularizeParams::new(alpha, c).with_seed(seed);
    let params = RegularizeParams { k_target: k.unwrap_or(base.k_target), ..base };
    params.validate().map_err(|e| CliError::input(e.to_string()))?;
    Ok(params)
}

pub fn regularize_cmd(cli: &Cli, args: &RegularizeArgs) -> Result<Output, CliError> {
    let g = read_general(&args.input)?;
    let params = regularize_params(args.alpha, args.c, args.k, cli.seed)?;
    match regularize(&g, &params) {
        Ok(report) => {
            if let Some(path) = &args.output {
                write_text(path, &write_bipartite(&report.subgraph))?;
            }
            let mut body = json!({ "status": "success" });
            merge(&mut body, to_value(&report));
            merge(&mut body, json!({ "params": params }));
            Ok(Output::ok(envelope(cli, &body)))
        }
        Err(e) => Ok(Output::failed(envelope(cli, &regularize_failure(&e)?))),
    }
}

pub fn embed_cmd(cli: &Cli, args: &EmbedArgs) -> Result<Output, CliError> {
    let file = read_graph(&args.host)?;
    let (host, origin) = file
        .to_bipartite_with_origin()
        .ok_or_else(|| CliError::GraphFile { path: args.host.clone(), msg: "graph is not bipartite".into() })?;
    let params = embed_params(&args.embed, args.k)?;
    match embed(&host, &params) {
        Ok(out) => {
            let certificate = out.certificate.translate(&origin);
            let mut body = json!({ "status": "success", "mode": out.mode });
            merge(&mut body, to_value(&certificate));
            merge(&mut body, json!({ "host": out.host, "trace": out.trace }));
            Ok(Output::ok(envelope(cli, &body)))
        }
        Err(e) => Ok(Output::failed(envelope(cli, &embed_failure(&e)?))),
    }
}

pub fn pipeline_cmd(cli: &Cli, args: &PipelineArgs) -> Result<Output, CliError> {
    let g = read_general(&args.input)?;
    let t = args.embed.t.max(3);
    let alpha = (t - 2) as f64 / (2 * t - 3) as f64;
    let rp = regularize_params(alpha, args.c_density, args.k, cli.seed)?;
    let ep = embed_params(&args.embed, None)?;
    match pipeline_embed(&g, &rp, &ep) {
        Ok(out) => {
            let mut body = json!({ "status": "success", "mode": out.local.mode });
            merge(&mut body, to_value(&out.certificate));
            merge(
                &mut body,
                json!({
                    "regularization": out.regularization,
                    "local_certificate": out.local.certificate,
                    "host": out.local.host,
                    "trace": out.local.trace,
                }),
            );
            Ok(Output::ok(envelope(cli, &body)))
        }
        Err(PipelineError::Regularize(e)) => Ok(Output::failed(envelope(cli, &regularize_failure(&e)?))),
        Err(PipelineError::Embed(e)) => Ok(Output::failed(envelope(cli, &embed_failure(&e)?))),
    }
}

fn parse_subset(text: &str, host: &BipartiteGraph) -> Result<Vec<VertexId>, CliError> {
    if text.trim() == "all" {
        return Ok(host.part_a().collect());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| CliError::input(format!("bad vertex id {s:?} in --subset"))))
        .collect()
}

pub fn verify_cmd(cli: &Cli, args: &VerifyArgs) -> Result<Output, CliError> {
    let host = read_bipartite(&args.host)?;
    let delta = match args.delta {
        Some(d) => d,
        None => host.min_degree_a().unwrap_or(0) as f64,
    };
    let freeness = if args.assume_free { Freeness::Assume } else { Freeness::Verify { budget: env_budget()? } };
    let result: Result<LemmaReport, LemmaError> = match args.which {
        LemmaChoice::Locallydense => check_locallydense(&host, &parse_subset(&args.subset, &host)?, delta),
        LemmaChoice::Manylight => check_manylight(&host, args.s, args.t, freeness),
        LemmaChoice::Turan => {
            let b = match args.b {
                Some(b) => b,
                None => host
                    .part_b()
                    .max_by_key(|&b| (host.degree(b), std::cmp::Reverse(b)))
                    .ok_or_else(|| CliError::input("host has no B-vertices"))?,
            };
            check_turan_step(&host, b, args.s, args.t, freeness)
        }
        LemmaChoice::Lightcorollary => {
            check_lightcorollary(&host, &parse_subset(&args.subset, &host)?, args.s, args.t, delta, freeness)
        }
    };
    match result {
        Ok(report) => {
            let holds = report.holds;
            let mut body = json!({ "status": if holds { "holds" } else { "violated" }, "delta": delta });
            merge(&mut body, to_value(&report));
            let text = envelope(cli, &body);
            Ok(if holds { Output::ok(text) } else { Output::failed(text) })
        }
        Err(LemmaError::PreconditionFailed(msg)) => {
            let body = json!({ "status": "precondition-failed", "message": msg, "delta": delta });
            Ok(Output::failed(envelope(cli, &body)))
        }
        Err(e) => Err(CliError::input(e.to_string())),
    }
}

/// The forbidden graph named by `L<s>,<t>`, `K<t>`, `K<a>,<b>` (each
/// subdivided) or `C<k>` (a cycle), with its display name.
pub fn parse_pattern(text: &str) -> Result<(GeneralGraph, String), CliError> {
    let bad = || CliError::input(format!("unknown pattern {text:?}; expected L<s>,<t>, K<t>, K<a>,<b> or C<k>"));
    let numbers = |rest: &str| -> Result<Vec<usize>, CliError> {
        rest.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
    };
    let text = text.trim();
    let (head, rest) = text.split_at(text.char_indices().nth(1).map_or(text.len(), |(i, _)| i));
    let nums = numbers(rest)?;
    let graph = match (head, nums.as_slice()) {
        ("L", &[s, t]) => subdivide(&Pattern::new(s, t).map_err(|e| CliError::input(e.to_string()))?.to_graph()),
        ("K", &[t]) if t >= 2 => subdivide(&GeneralGraph::complete(t)),
        ("K", &[a, b]) if a >= 1 && b >= 1 => subdivide(&GeneralGraph::complete_bipartite(a, b)),
        ("C", &[k]) if k >= 3 => return Ok((GeneralGraph::cycle(k), text.to_owned())),
        _ => return Err(bad()),
    };
    Ok((graph, format!("{text}'")))
}

pub fn extremal_cmd(cli: &Cli, args: &ExtremalArgs) -> Result<Output, CliError> {
    let (forbidden, name) = parse_pattern(&args.pattern)?;
    let mode = match args.mode {
        ModeChoice::Exhaustive => ExtremalMode::Exhaustive,
        ModeChoice::Pruned => ExtremalMode::Pruned,
    };
    let record = extremal_number(args.n, &forbidden, &name, mode).map_err(|e: ExtremalError| CliError::input(e.to_string()))?;
    let mut body = to_value(&record);
    merge(&mut body, json!({ "forbidden_vertices": forbidden.order(), "forbidden_edges": forbidden.edge_count() }));
    Ok(Output::ok(envelope(cli, &body)))
}

#[derive(Serialize)]
struct UpperOnly {
    t: u32,
    upper: String,
    upper_value: f64,
}

impl From<&BoundRow> for UpperOnly {
    fn from(r: &BoundRow) -> Self {
        Self { t: r.t, upper: r.upper.clone(), upper_value: r.upper_value }
    }
}

pub fn bound_table_cmd(cli: &Cli, args: &BoundTableArgs) -> Result<Output, CliError> {
    if args.t_min < 3 || args.t_max > 64 || args.t_min > args.t_max {
        return Err(CliError::input(format!("t range {}..={} must lie within 3..=64", args.t_min, args.t_max)));
    }
    let rows = bound_table(args.t_min, args.t_max);
    let all_ordered = bound_table(3, 64).iter().all(|r| r.ordered);
    let text = match (cli.format, args.no_comparisons) {
        (Format::Json, false) => envelope(cli, &json!({ "rows": rows, "ordered_3_to_64": all_ordered })),
        (Format::Json, true) => {
            let rows: Vec<UpperOnly> = rows.iter().map(UpperOnly::from).collect();
            envelope(cli, &json!({ "rows": rows, "ordered_3_to_64": all_ordered }))
        }
        (Format::Csv, no_comparisons) => {
            let mut text = csv_preamble(cli);
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                if no_comparisons {
                    w.serialize(UpperOnly::from(r))
                } else {
                    w.serialize(r)
                }
                .map_err(|e| CliError::input(e.to_string()))?;
            }
            text.push_str(&String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8"));
            text.push_str(&format!("# ordered_3_to_64: {all_ordered}\n"));
            text
        }
    };
    Ok(Output::ok(text))
}

/// `# version` and `# config` comment lines for CSV output.
pub fn csv_preamble(cli: &Cli) -> String {
    format!("# version: {VERSION}\n# config: {}\n", serde_json::to_string(cli).expect("config serializes"))
}
