use proptest::prelude::*;

use super::*;
use crate::constructions::{gq_incidence, random_bipartite, random_graph};
use crate::pattern::subdivision_host;

fn codegree(g: &BipartiteGraph, x: VertexId, y: VertexId) -> usize {
    g.neighbours(x).iter().filter(|b| g.neighbours(y).contains(b)).count()
}

fn common_of_three(g: &BipartiteGraph, x: VertexId, y: VertexId, z: VertexId) -> bool {
    g.neighbours(x).iter().any(|b| g.neighbours(y).contains(b) && g.neighbours(z).contains(b))
}

/// Pairwise light and no triple with a common neighbour, checked directly.
fn branch_set_is_sound(g: &BipartiteGraph, us: &[VertexId], s: usize, t: usize) -> bool {
    let heavy = heavy_threshold(s, t);
    let light = |x, y| (1..heavy).contains(&codegree(g, x, y));
    us.iter().enumerate().all(|(i, &x)| {
        us[i + 1..].iter().enumerate().all(|(j, &y)| {
            light(x, y) && us[i + j + 2..].iter().all(|&z| !common_of_three(g, x, y, z))
        })
    })
}

#[test]
fn complete_bipartite_fails_at_the_first_candidate_set() {
    let host = BipartiteGraph::new(2, 3, &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]).unwrap();
    let err = embed(&host, &EmbedParams::new(1, 3)).unwrap_err();
    assert!(err.is_structured_failure());
    match err {
        EmbedError::ThresholdFailure { step, kind, observed, demanded, trace } => {
            assert_eq!((step, kind, observed), (1, ThresholdKind::CandidateSet, 2));
            // 8 (s + t) n / δ = 8 · 4 · 3 / 2.
            assert_eq!(demanded, 48.0);
            assert!(matches!(trace.events[0], TraceEvent::HeavyClique { found: false, .. }));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn subdivided_pattern_embeds_into_itself_without_slack() {
    let pattern = Pattern::new(2, 3).unwrap();
    let host = subdivision_host(&pattern.to_graph());
    let p = EmbedParams::new(2, 3).with_slack(0.0).with_c(0.5);
    let out = embed(&host, &p).unwrap();
    assert_eq!(out.mode, AssemblyMode::LightPath);
    assert!(validate_certificate(&host, &out.certificate, &pattern));
    assert_eq!(out.certificate.branch, vec![0, 1, 2, 3]);
    assert_eq!(out.trace.branch_steps().count(), 2);
    assert_eq!(out.trace.picks().count(), 2);
}

#[test]
fn generalized_quadrangle_yields_structured_failures() {
    let gq = gq_incidence(2).unwrap();
    let err = embed(&gq, &EmbedParams::new(1, 3)).unwrap_err();
    assert!(matches!(err, EmbedError::ThresholdFailure { step: 1, kind: ThresholdKind::CandidateSet, .. }));

    // Without thresholds the only vertex light to both u's is the third point
    // of their line, which the u-pair blocks.
    let err = embed(&gq, &EmbedParams::new(1, 3).with_slack(0.0)).unwrap_err();
    match err {
        EmbedError::SelectionFailure { accepted, needed, pool, rejected_uu, rejected_uv, .. } => {
            assert_eq!((accepted, needed, pool, rejected_uu, rejected_uv), (0, 1, 1, 1, 0));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn dense_random_host_takes_the_heavy_shortcut() {
    let host = random_bipartite(300, 300, 0.3, 5).unwrap();
    let out = embed(&host, &EmbedParams::new(2, 4)).unwrap();
    assert_eq!(out.mode, AssemblyMode::HeavyClique);
    assert!(validate_certificate(&host, &out.certificate, &Pattern::new(2, 4).unwrap()));
    assert_eq!(embed(&host, &EmbedParams::new(2, 4)).unwrap(), out);
}

#[test]
fn grid_light_path_with_small_slack() {
    // Lines of a 12 x 12 grid as A, cells as B: every pair of crossing lines
    // has codegree 1, parallel lines have none.
    let n = 12;
    let edges: Vec<_> = (0..n).flat_map(|r| (0..n).flat_map(move |c| [(r, r * n + c), (n + c, r * n + c)])).collect();
    let host = BipartiteGraph::new(2 * n, n * n, &edges).unwrap();
    let p = EmbedParams::new(1, 3).with_slack(0.0);
    // The grid is C6-free, and L_{1,3} subdivided is a 6-cycle.
    let err = embed(&host, &p.with_c(0.1)).unwrap_err();
    assert!(err.is_structured_failure(), "{err:?}");
}

#[test]
fn preconditions_are_checked_before_the_light_path() {
    // Unbalanced star-like host.
    let edges: Vec<_> = (0..20).map(|b| (0, b)).collect();
    let host = BipartiteGraph::new(1, 20, &edges).unwrap();
    assert!(matches!(embed(&host, &EmbedParams::new(1, 3)), Err(EmbedError::Precondition(_))));

    // δ below c · n^{1/3}.
    let cycle = BipartiteGraph::new(8, 8, &(0..8).flat_map(|i| [(i, i), (i, (i + 1) % 8)]).collect::<Vec<_>>()).unwrap();
    assert!(matches!(embed(&cycle, &EmbedParams::new(1, 3).with_c(2.0)), Err(EmbedError::Precondition(_))));

    // Degree ratio above K.
    let uneven = BipartiteGraph::new(2, 2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
    let err = embed(&uneven, &EmbedParams::new(1, 3).with_k(1.0).with_c(0.1)).unwrap_err();
    assert!(matches!(err, EmbedError::Precondition(_)));
}

#[test]
fn invalid_parameters_are_rejected() {
    let host = gq_incidence(2).unwrap();
    for p in [
        EmbedParams::new(0, 3),
        EmbedParams::new(1, 2),
        EmbedParams::new(1, 3).with_slack(-1.0),
        EmbedParams::new(1, 3).with_c(0.0),
        EmbedParams::new(1, 3).with_k(0.5),
    ] {
        let err = embed(&host, &p).unwrap_err();
        assert!(!err.is_structured_failure(), "{err:?}");
    }
}

#[test]
fn assembly_rejects_bad_branch_sets() {
    let pattern = Pattern::new(1, 3).unwrap();
    let host = subdivision_host(&pattern.to_graph());
    assert!(assemble_subdivision(&host, &[0, 1], &pattern, AssemblyMode::LightPath).is_err());
    assert!(assemble_subdivision(&host, &[0, 0, 1], &pattern, AssemblyMode::LightPath).is_err());
    assert!(assemble_subdivision(&host, &[0, 1, 3], &pattern, AssemblyMode::LightPath).is_err());
    assert!(assemble_subdivision(&host, &[0, 1, 2], &pattern, AssemblyMode::HeavyClique).is_err());
    let cert = assemble_subdivision(&host, &[0, 1, 2], &pattern, AssemblyMode::LightPath).unwrap();
    assert!(validate_certificate(&host, &cert, &pattern));
}

#[test]
fn s_selection_rejects_unsound_branch_sets() {
    let host = random_bipartite(30, 30, 0.5, 1).unwrap();
    let w = NeighbourhoodWeights::new(&host);
    let p = EmbedParams::new(1, 3).with_slack(0.0);
    // Pairs here are heavy, so no pair is a valid branch set.
    assert!(matches!(find_s_vertices(&w, &[0, 1], &p), Err(EmbedError::InvalidBranchSet(_))));
    assert!(matches!(find_s_vertices(&w, &[0], &p), Err(EmbedError::InvalidBranchSet(_))));
}

#[test]
fn pipeline_returns_a_copy_in_input_ids() {
    let g = random_graph(120, 0.4, 2).unwrap();
    let out = pipeline_embed(&g, &RegularizeParams::new(0.5, 1.0), &EmbedParams::new(1, 3)).unwrap();
    assert!(validate_in_graph(&g, &out.certificate, &Pattern::new(1, 3).unwrap()));
    assert!(validate_certificate(&out.regularization.subgraph, &out.local.certificate, &Pattern::new(1, 3).unwrap()));
    assert_eq!(out.local.host.k, out.regularization.achieved_k);
}

#[test]
fn trace_serializes_with_phase_tags() {
    let gq = gq_incidence(2).unwrap();
    let err = embed(&gq, &EmbedParams::new(1, 3).with_slack(0.0)).unwrap_err();
    let json = serde_json::to_value(err.trace().unwrap()).unwrap();
    let phases: Vec<_> = json.as_array().unwrap().iter().map(|e| e["phase"].as_str().unwrap().to_owned()).collect();
    assert_eq!(phases, ["heavy-clique", "branch", "branch", "selection"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn successes_always_validate(n_a in 4usize..14, n_b in 4usize..14, p in 0.1f64..0.9, seed in 0u64..1000, s in 1usize..3, t in 3usize..5) {
        let host = random_bipartite(n_a, n_b, p, seed).unwrap();
        let params = EmbedParams::new(s, t).with_slack(0.0).with_c(0.01).with_k(1e9);
        match embed(&host, &params) {
            Ok(out) => prop_assert!(validate_certificate(&host, &out.certificate, &Pattern::new(s, t).unwrap())),
            Err(e) => prop_assert!(e.is_structured_failure(), "{:?}", e),
        }
    }

    #[test]
    fn branch_vertices_satisfy_their_invariants(n in 6usize..16, p in 0.1f64..0.6, seed in 0u64..1000, t in 3usize..6) {
        let host = random_bipartite(n, n, p, seed).unwrap();
        let w = NeighbourhoodWeights::new(&host);
        let params = EmbedParams::new(1, t).with_slack(0.0).with_k(1e9);
        if let Ok((us, trace)) = find_branch_vertices(&w, &params) {
            prop_assert_eq!(us.len(), t - 1);
            prop_assert!(branch_set_is_sound(&host, &us, 1, t));
            for e in trace.branch_steps() {
                if let TraceEvent::Branch { u0, u, removal_bound, .. } = e {
                    prop_assert!(((u0 - u) as f64) <= *removal_bound);
                }
            }
            if let Ok((vs, _)) = find_s_vertices(&w, &us, &params) {
                prop_assert!(vs.iter().all(|v| !us.contains(v)));
                let branch: Vec<_> = vs.into_iter().chain(us).collect();
                let pattern = Pattern::new(1, t).unwrap();
                let cert = assemble_subdivision(&host, &branch, &pattern, AssemblyMode::LightPath).unwrap();
                prop_assert!(validate_certificate(&host, &cert, &pattern));
            }
        }
    }
}
