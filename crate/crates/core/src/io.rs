//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! bip 2 3        # or: graph <n>
//! 0 2
//! 1 4
//! ```
//!
//! Indices are 0-based; in bipartite files the B-vertices are numbered from `nA`.

use std::fmt::Write as _;

use crate::graph::{Adjacency, BipartiteGraph, GeneralGraph, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFile {
    Bipartite(BipartiteGraph),
    General(GeneralGraph),
}

impl GraphFile {
    /// The graph without its bipartition, if any.
    pub fn to_general(&self) -> GeneralGraph {
        match self {
            GraphFile::Bipartite(g) => g.to_general(),
            GraphFile::General(g) => g.clone(),
        }
    }

    /// The bipartite host, two-colouring a general graph when possible.
    ///
    /// A general graph is split by its two-colouring, placing in part A the
    /// colour class of vertex 0 in every component.
    pub fn to_bipartite(&self) -> Option<BipartiteGraph> {
        self.to_bipartite_with_origin().map(|(g, _)| g)
    }

    /// As [`GraphFile::to_bipartite`], also returning the file id of each host vertex.
    pub fn to_bipartite_with_origin(&self) -> Option<(BipartiteGraph, Vec<VertexId>)> {
        match self {
            GraphFile::Bipartite(g) => Some((g.clone(), (0..g.order() as VertexId).collect())),
            GraphFile::General(g) => {
                let colour = g.two_colouring()?;
                let origin: Vec<VertexId> = (0..g.order() as VertexId)
                    .filter(|&v| colour[v as usize] == 0)
                    .chain((0..g.order() as VertexId).filter(|&v| colour[v as usize] == 1))
                    .collect();
                let n_a = colour.iter().filter(|&&c| c == 0).count();
                let mut id = vec![0usize; g.order()];
                for (i, &v) in origin.iter().enumerate() {
                    id[v as usize] = i;
                }
                let edges: Vec<_> =
                    g.edge_list().iter().map(|&(u, v)| (id[u as usize], id[v as usize])).collect();
                let host = BipartiteGraph::from_global_edges(n_a, g.order() - n_a, &edges).ok()?;
                Some((host, origin))
            }
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile, GraphError> {
    let mut header: Option<(bool, usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        match header {
            None => {
                let kind = toks.next().unwrap_or("");
                header = Some(match kind {
                    "bip" => {
                        let n_a = parse_count(toks.next(), lineno, "nA")?;
                        let n_b = parse_count(toks.next(), lineno, "nB")?;
                        (true, n_a, n_b)
                    }
                    "graph" => (false, parse_count(toks.next(), lineno, "n")?, 0),
                    other => {
                        return Err(parse_err(
                            lineno,
                            format!("expected `bip <nA> <nB>` or `graph <n>`, found `{other}`"),
                        ))
                    }
                });
            }
            Some(_) => {
                let u = parse_count(toks.next(), lineno, "vertex")?;
                let v = parse_count(toks.next(), lineno, "vertex")?;
                edges.push((u, v));
            }
        }
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
    }
    match header {
        None => Err(parse_err(0, "missing header")),
        Some((true, n_a, n_b)) => {
            Ok(GraphFile::Bipartite(BipartiteGraph::from_global_edges(n_a, n_b, &edges)?))
        }
        Some((false, n, _)) => Ok(GraphFile::General(GeneralGraph::new(n, &edges)?)),
    }
}

pub fn write_bipartite(g: &BipartiteGraph) -> String {
    let mut out = format!("bip {} {}\n", g.n_a(), g.n_b());
    for (u, v) in g.edge_list() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_general(g: &GeneralGraph) -> String {
    let mut out = format!("graph {}\n", g.order());
    for (u, v) in g.edge_list() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_graph(file: &GraphFile) -> String {
    match file {
        GraphFile::Bipartite(g) => write_bipartite(g),
        GraphFile::General(g) => write_general(g),
    }
}
