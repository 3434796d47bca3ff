use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "subdivlab", version, about = "Find 1-subdivisions of L_{s,t} in dense graphs and check the bounds behind them")]
pub struct Cli {
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format for tabular commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Generate a host graph in edge-list format.
    Gen(GenArgs),
    /// Extract a balanced, almost-regular bipartite subgraph.
    Regularize(RegularizeArgs),
    /// Embed the 1-subdivision of L_{s,t} into a bipartite host.
    Embed(EmbedArgs),
    /// Regularize a general graph, then embed into the result.
    Pipeline(PipelineArgs),
    /// Evaluate one of the counting inequalities on a host.
    VerifyLemma(VerifyArgs),
    /// Exact ex(n, H) for small n, where H is the 1-subdivision of the pattern.
    Extremal(ExtremalArgs),
    /// Exponents of the upper and lower bounds for each t.
    BoundTable(BoundTableArgs),
    /// Run embed or pipeline over a batch of seeded random hosts.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Random,
    Deletion,
    Gq,
    Grid,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// random: size of part A.
    #[arg(long)]
    pub na: Option<usize>,
    /// random: size of part B.
    #[arg(long)]
    pub nb: Option<usize>,
    /// random: edge probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// deletion: number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    /// deletion: forbid the subdivision of K_t.
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    /// deletion: constant factor on the sampling probability.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// deletion: cap containment searches at this many nodes instead of running exactly.
    #[arg(long)]
    pub budget: Option<u64>,
    /// gq: prime order of the field.
    #[arg(long)]
    pub q: Option<u64>,
    /// grid: rows.
    #[arg(long)]
    pub rows: Option<usize>,
    /// grid: columns.
    #[arg(long)]
    pub cols: Option<usize>,
    /// Sidecar report path; defaults to `<out>.json`, or stderr without `--out`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RegularizeArgs {
    /// Density exponent, as a decimal or a fraction such as 1/3.
    #[arg(long, value_parser = parse_fraction, default_value = "1/3")]
    pub alpha: f64,
    #[arg(long = "C", default_value_t = 1.0)]
    #[serde(rename = "C")]
    pub c: f64,
    /// Degree-ratio target; defaults to 60 · 2^(1 + 1/α²).
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub input: PathBuf,
    /// Where to write the extracted subgraph.
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct EmbedFlags {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
    /// Constant in the minimum-degree requirement δ ≥ c·n^((t-2)/(2t-3)).
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Multiplier on every counting threshold.
    #[arg(long, default_value_t = 1.0)]
    pub slack: f64,
    /// Node budget for heavy-clique searches; defaults to $SUBDIVLAB_BUDGET or 1000000.
    #[arg(long)]
    pub heavy_budget: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct EmbedArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub embed: EmbedFlags,
    /// Degree-ratio bound of the host; defaults to its measured max/min.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub host: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub embed: EmbedFlags,
    #[arg(long = "C", default_value_t = 1.0)]
    #[serde(rename = "C")]
    pub c_density: f64,
    /// Degree-ratio target for the regularization step.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaChoice {
    Locallydense,
    Manylight,
    Turan,
    Lightcorollary,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub which: LemmaChoice,
    pub host: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    /// Minimum-degree parameter; defaults to the minimum degree over A.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Comma-separated A-vertices, or "all".
    #[arg(long, default_value = "all")]
    pub subset: String,
    /// turan: the B-vertex whose neighbourhood is examined; defaults to one of maximum degree.
    #[arg(long)]
    pub b: Option<u32>,
    /// Skip the containment check and trust that the host is free of the subdivision.
    #[arg(long)]
    pub assume_free: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Exhaustive,
    Pruned,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub n: usize,
    /// L<s>,<t> | K<t> | K<a>,<b> (subdivided), or C<k> (a plain cycle).
    #[arg(long)]
    pub pattern: String,
    #[arg(long, value_enum, default_value_t = ModeChoice::Pruned)]
    pub mode: ModeChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundTableArgs {
    #[arg(long, default_value_t = 3)]
    pub t_min: u32,
    #[arg(long, default_value_t = 10)]
    pub t_max: u32,
    /// Print only the new upper-bound exponent.
    #[arg(long)]
    pub no_comparisons: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Embed,
    Pipeline,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    #[arg(long, value_enum, default_value_t = ExperimentKind::Embed)]
    pub run: ExperimentKind,
    /// Seeds as `a..b`, `a..=b`, or a comma list; empty for none.
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    /// Vertices per side (embed) or in total (pipeline).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Edge probability; defaults to n^(degree_exponent - 1).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0.7)]
    pub degree_exponent: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub embed: EmbedFlags,
    /// pipeline: density constant of the regularization step.
    #[arg(long = "C", default_value_t = 1.0)]
    #[serde(rename = "C")]
    pub c_density: f64,
    /// pipeline: degree-ratio target of the regularization step.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<f64>,
    /// Add a wall-clock column; the output is then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
}

pub fn parse_fraction(text: &str) -> Result<f64, String> {
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
            num / den
        }
        None => text.trim().parse().map_err(|_| format!("{text:?} is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{text:?} is not finite"))
    }
}
