use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use subdivlab::io::{parse_graph, GraphFile};
use subdivlab::{BipartiteGraph, GeneralGraph};

pub const VERSION: &str = concat!("subdivlab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    GraphFile { path: PathBuf, msg: String },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

/// Text to emit and whether it describes a structured failure (exit 2).
pub struct Output {
    pub text: String,
    pub failure: bool,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Self { text, failure: false }
    }

    pub fn failed(text: String) -> Self {
        Self { text, failure: true }
    }
}

/// `{"version", "config", "result"}` as pretty JSON with a trailing newline.
pub fn envelope<C: Serialize, R: Serialize>(config: &C, result: &R) -> String {
    let value = json!({ "version": VERSION, "config": config, "result": result });
    let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
    text.push('\n');
    text
}

pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn read_graph(path: &Path) -> Result<GraphFile, CliError> {
    parse_graph(&read_text(path)?).map_err(|e| CliError::GraphFile { path: path.to_owned(), msg: e.to_string() })
}

pub fn read_bipartite(path: &Path) -> Result<BipartiteGraph, CliError> {
    read_graph(path)?
        .to_bipartite()
        .ok_or_else(|| CliError::GraphFile { path: path.to_owned(), msg: "graph is not bipartite".into() })
}

pub fn read_general(path: &Path) -> Result<GeneralGraph, CliError> {
    Ok(read_graph(path)?.to_general())
}

/// Budget from `SUBDIVLAB_BUDGET`, if set.
pub fn env_budget() -> Result<Option<u64>, CliError> {
    match std::env::var("SUBDIVLAB_BUDGET") {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::input(format!("SUBDIVLAB_BUDGET = {text:?} is not a node count"))),
        Err(_) => Ok(None),
    }
}
