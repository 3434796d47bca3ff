//! Finding 1-subdivisions of `L_{s,t}` (a complete graph on `s + t - 1`
//! vertices minus the edges of a `K_s`) inside dense bipartite hosts.
//!
//! The crate covers the whole experimental loop:
//!
//! - [`graph`], [`pattern`], [`weights`]: host graphs, the pattern family and
//!   the codegree ("neighbourhood") graph with its light/heavy classification;
//! - [`regularize`]: extraction of a balanced, almost-regular bipartite subgraph
//!   from a dense host;
//! - [`embed`]: the constructive embedding of the subdivision, with a full trace
//!   and an independent certificate checker;
//! - [`oracle`]: brute-force ground truth (subgraph containment, small extremal
//!   numbers, and numeric checks of the counting lemmas);
//! - [`constructions`]: random hosts, deletion-method lower-bound witnesses and
//!   girth-8 incidence graphs;
//! - [`bounds`]: the exponents of the known upper and lower bounds.

pub mod bounds;
pub mod constructions;
pub mod embed;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pattern;
pub mod regularize;
pub mod weights;

pub use graph::{Adjacency, BipartiteGraph, GeneralGraph, GraphError, VertexId};
pub use pattern::{subdivide, Pattern};
pub use weights::{EdgeClass, NeighbourhoodWeights};
