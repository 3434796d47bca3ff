//! Embedded subdivisions and their independent checker.
//!
//! The checker only uses adjacency queries on the host; it shares no code
//! with the search that produced the certificate.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::graph::{Adjacency, BipartiteGraph, GeneralGraph, VertexId};
use crate::pattern::Pattern;

/// A copy of the 1-subdivision of `L_{s,t}` in a host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionCertificate {
    pub s: usize,
    pub t: usize,
    /// Image of each pattern vertex (S first, then T).
    pub branch: Vec<VertexId>,
    /// Image of the midpoint of each pattern edge, in `Pattern::edges` order.
    pub midpoints: Vec<VertexId>,
}

impl SubdivisionCertificate {
    pub fn pattern(&self) -> Pattern {
        Pattern::new(self.s, self.t).expect("certificate parameters come from a valid pattern")
    }

    /// Relabels every vertex through `origin` (e.g. back to the ids of a larger host).
    pub fn translate(&self, origin: &[VertexId]) -> Self {
        Self {
            s: self.s,
            t: self.t,
            branch: self.branch.iter().map(|&v| origin[v as usize]).collect(),
            midpoints: self.midpoints.iter().map(|&v| origin[v as usize]).collect(),
        }
    }
}

struct Labelled<'a> {
    labels: Vec<String>,
    ids: &'a [VertexId],
}

impl Serialize for Labelled<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.ids.len()))?;
        for (label, id) in self.labels.iter().zip(self.ids) {
            map.serialize_entry(label, id)?;
        }
        map.end()
    }
}

impl Serialize for SubdivisionCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pattern = self.pattern();
        let branch = Labelled {
            labels: (0..pattern.vertex_count()).map(|x| pattern.vertex_label(x)).collect(),
            ids: &self.branch,
        };
        let midpoints = Labelled {
            labels: (0..pattern.edges().len()).map(|i| pattern.edge_label(i)).collect(),
            ids: &self.midpoints,
        };
        let mut st = serializer.serialize_struct("SubdivisionCertificate", 4)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("branch", &branch)?;
        st.serialize_field("midpoints", &midpoints)?;
        st.end()
    }
}

fn all_distinct(ids: impl Iterator<Item = VertexId>) -> bool {
    let mut v: Vec<VertexId> = ids.collect();
    let len = v.len();
    v.sort_unstable();
    v.dedup();
    v.len() == len
}

fn shape_and_edges<G: Adjacency + ?Sized>(
    host: &G,
    cert: &SubdivisionCertificate,
    pattern: &Pattern,
) -> bool {
    cert.s == pattern.s()
        && cert.t == pattern.t()
        && cert.branch.len() == pattern.vertex_count()
        && cert.midpoints.len() == pattern.edges().len()
        && cert.branch.iter().chain(&cert.midpoints).all(|&v| (v as usize) < host.order())
        && all_distinct(cert.branch.iter().chain(&cert.midpoints).copied())
        && pattern.edges().iter().zip(&cert.midpoints).all(|(&(x, y), &m)| {
            host.has_edge(m, cert.branch[x]) && host.has_edge(m, cert.branch[y])
        })
}

/// Branch vertices in A, midpoints in B, all images distinct, and every
/// midpoint adjacent to the branch images of its edge's endpoints.
pub fn validate_certificate(
    host: &BipartiteGraph,
    cert: &SubdivisionCertificate,
    pattern: &Pattern,
) -> bool {
    shape_and_edges(host, cert, pattern)
        && cert.branch.iter().all(|&v| host.in_a(v))
        && cert.midpoints.iter().all(|&v| host.in_b(v))
}

/// The same check in a host without a bipartition.
pub fn validate_in_graph(
    host: &GeneralGraph,
    cert: &SubdivisionCertificate,
    pattern: &Pattern,
) -> bool {
    shape_and_edges(host, cert, pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::subdivision_host;

    fn identity_certificate(s: usize, t: usize) -> (BipartiteGraph, SubdivisionCertificate) {
        let pattern = Pattern::new(s, t).unwrap();
        let host = subdivision_host(&pattern.to_graph());
        let k = pattern.vertex_count();
        let cert = SubdivisionCertificate {
            s,
            t,
            branch: (0..k as VertexId).collect(),
            midpoints: (0..pattern.edges().len()).map(|i| (k + i) as VertexId).collect(),
        };
        (host, cert)
    }

    #[test]
    fn identity_embedding_validates() {
        for (s, t) in [(1, 3), (2, 3), (3, 4)] {
            let (host, cert) = identity_certificate(s, t);
            assert!(validate_certificate(&host, &cert, &cert.pattern()));
            assert!(validate_in_graph(&host.to_general(), &cert, &cert.pattern()));
        }
    }

    #[test]
    fn shared_midpoint_is_rejected() {
        let (host, mut cert) = identity_certificate(1, 3);
        cert.midpoints[1] = cert.midpoints[0];
        assert!(!validate_certificate(&host, &cert, &cert.pattern()));
    }

    #[test]
    fn non_adjacent_midpoint_is_rejected() {
        let (host, mut cert) = identity_certificate(2, 3);
        cert.midpoints.swap(0, 4);
        assert!(!validate_certificate(&host, &cert, &cert.pattern()));
    }

    #[test]
    fn wrong_parts_and_shapes_are_rejected() {
        let (host, cert) = identity_certificate(1, 3);
        let swapped = SubdivisionCertificate { branch: cert.midpoints.clone(), midpoints: cert.branch.clone(), ..cert.clone() };
        assert!(!validate_certificate(&host, &swapped, &cert.pattern()));
        let short = SubdivisionCertificate { midpoints: cert.midpoints[..2].to_vec(), ..cert.clone() };
        assert!(!validate_certificate(&host, &short, &cert.pattern()));
        assert!(!validate_certificate(&host, &cert, &Pattern::new(2, 3).unwrap()));
    }

    #[test]
    fn serializes_with_pattern_labels() {
        let (_, cert) = identity_certificate(1, 3);
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            json,
            r#"{"s":1,"t":3,"branch":{"S0":0,"T0":1,"T1":2},"midpoints":{"S0-T0":3,"S0-T1":4,"T0-T1":5}}"#
        );
    }
}
