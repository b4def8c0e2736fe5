//! Property tests for the generator, the graph format, the similarity
//! measures and the data model.

use proptest::prelude::*;
use std::collections::HashSet;

use recgraph_core::recommenders::{AlgorithmKind, RecommenderConfig, RecommenderModel};
use recgraph_core::similarity::{similarity, SimilarityKind, SparseRatings};
use recgraph_core::{
    generate, generate_with_trace, parse_graph, write_graph_string, GeneratorParams, ItemId,
    Modality, RatingDataModel, UserId,
};

fn params_strategy() -> impl Strategy<Value = GeneratorParams> {
    (
        1u32..6,
        0u32..120,
        0.0f64..=1.0,
        1u32..5,
        1u32..5,
        0.0f64..=1.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
        any::<u64>(),
        0u32..40,
    )
        .prop_map(|(m, t, p, u, v, alpha, beta, b, seed, holdout)| {
            GeneratorParams::new(m, t, p, u, v, alpha, beta, b, seed).with_holdout(holdout)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_respect_invariants(params in params_strategy()) {
        let (graph, trace) = generate_with_trace(params.clone()).unwrap();

        // Counting: every iteration adds exactly one node.
        let expected_nodes = 2 * params.m + params.iterations + params.holdout_steps;
        prop_assert_eq!(graph.node_count() as u32, expected_nodes);

        // Simplicity over training and holdout edges together.
        let mut seen = HashSet::new();
        for edge in graph.edges().iter().chain(graph.holdout_edges()) {
            prop_assert!(seen.insert((edge.user, edge.item)));
            prop_assert!(params.rating_values.contains(&edge.rating));
        }

        // Degrees cover training edges only.
        let user_sum: u32 = graph.user_degrees().iter().sum();
        let item_sum: u32 = graph.item_degrees().iter().sum();
        prop_assert_eq!(user_sum as usize, graph.edge_count());
        prop_assert_eq!(item_sum as usize, graph.edge_count());

        // Trace counts account for every requested edge.
        prop_assert_eq!(trace.iterations.len() as u32, params.iterations + params.holdout_steps);
        for it in &trace.iterations {
            let quota = match it.modality.0 {
                Modality::User => params.u,
                Modality::Item => params.v,
            };
            prop_assert_eq!(it.attached() + it.shortfall, quota);
        }
    }

    #[test]
    fn generation_is_deterministic(params in params_strategy()) {
        let a = generate(params.clone()).unwrap();
        let b = generate(params).unwrap();
        prop_assert_eq!(write_graph_string(&a), write_graph_string(&b));
    }

    #[test]
    fn graph_files_round_trip(params in params_strategy()) {
        let graph = generate(params).unwrap();
        let text = write_graph_string(&graph);
        let reread = parse_graph(&text).unwrap();
        prop_assert_eq!(&reread, &graph);
        prop_assert_eq!(write_graph_string(&reread), text);
    }
}

fn sparse_vector() -> impl Strategy<Value = SparseRatings> {
    proptest::collection::vec((0u32..12, 0i32..=5), 0..9)
        .prop_map(|entries| SparseRatings::from_ints(&entries))
}

proptest! {
    #[test]
    fn similarity_is_symmetric(x in sparse_vector(), y in sparse_vector()) {
        for kind in SimilarityKind::ALL {
            let xy = similarity(kind, &x, &y, 40);
            let yx = similarity(kind, &y, &x, 40);
            prop_assert_eq!(xy, yx, "kind {}", kind);
        }
    }

    #[test]
    fn similarity_ranges_hold(x in sparse_vector(), y in sparse_vector()) {
        for kind in SimilarityKind::ALL {
            if let Some(s) = similarity(kind, &x, &y, 40) {
                prop_assert!((-1.0..=1.0).contains(&s), "kind {} value {}", kind, s);
                let non_negative = matches!(
                    kind,
                    SimilarityKind::Euclidean | SimilarityKind::LogLikelihood | SimilarityKind::Tanimoto
                );
                if non_negative {
                    prop_assert!(s >= 0.0, "kind {} value {}", kind, s);
                }
            }
        }
    }

    #[test]
    fn self_similarity_is_one_when_defined(x in sparse_vector()) {
        for kind in [
            SimilarityKind::Pearson,
            SimilarityKind::Spearman,
            SimilarityKind::Euclidean,
            SimilarityKind::Tanimoto,
        ] {
            if let Some(s) = similarity(kind, &x, &x, 40) {
                prop_assert!((s - 1.0).abs() < 1e-12, "kind {} value {}", kind, s);
            }
        }
    }

    #[test]
    fn pearson_is_shift_invariant(x in sparse_vector(), y in sparse_vector(), shift in -3i32..=3) {
        let shifted = SparseRatings::new(
            x.entries().iter().map(|&(d, r)| (d, r + shift as f64)).collect(),
        );
        let a = similarity(SimilarityKind::Pearson, &x, &y, 40);
        let b = similarity(SimilarityKind::Pearson, &shifted, &y, 40);
        match (a, b) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}"),
            (a, b) => prop_assert_eq!(a.is_some(), b.is_some()),
        }
    }

    #[test]
    fn spearman_equals_pearson_on_distinct_ranks(
        n in 2usize..8,
        xs_seed in any::<proptest::sample::Index>(),
        ys_seed in any::<proptest::sample::Index>(),
    ) {
        // Build two permutations of 1..=n; values that already are distinct
        // ranks make ranking the identity, so the measures must agree.
        let make_perm = |seed: proptest::sample::Index| {
            let mut vals: Vec<f64> = (1..=n).map(|v| v as f64).collect();
            let mut state = seed.index(usize::MAX - 1) as u64;
            for i in (1..vals.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                vals.swap(i, (state % (i as u64 + 1)) as usize);
            }
            vals
        };
        let xs = make_perm(xs_seed);
        let ys = make_perm(ys_seed);
        let x = SparseRatings::new(xs.iter().enumerate().map(|(d, &r)| (d as u32, r)).collect());
        let y = SparseRatings::new(ys.iter().enumerate().map(|(d, &r)| (d as u32, r)).collect());
        let s = similarity(SimilarityKind::Spearman, &x, &y, 40);
        let p = similarity(SimilarityKind::Pearson, &x, &y, 40);
        match (s, p) {
            (Some(s), Some(p)) => prop_assert!((s - p).abs() < 1e-12, "{s} vs {p}"),
            (s, p) => prop_assert_eq!(s.is_some(), p.is_some()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimates_stay_clamped(
        ratings in proptest::collection::hash_set((0u32..6, 0u32..6), 1..20)
            .prop_flat_map(|pairs| {
                let pairs: Vec<(u32, u32)> = pairs.into_iter().collect();
                let n = pairs.len();
                (Just(pairs), proptest::collection::vec(0i32..=5, n))
            })
            .prop_map(|(pairs, values)| {
                pairs
                    .into_iter()
                    .zip(values)
                    .map(|((u, i), r)| (u, i, r))
                    .collect::<Vec<_>>()
            })
    ) {
        let data = RatingDataModel::from_ratings(&ratings).unwrap();
        let (lo, hi) = data.rating_bounds();
        for kind in AlgorithmKind::ALL {
            let mut config = RecommenderConfig::new(kind);
            if kind == AlgorithmKind::UserThreshold {
                config = config.with_threshold(0.0);
            }
            let model = RecommenderModel::build(config, data.clone()).unwrap();
            for u in 0..data.user_count() as u32 {
                for i in 0..data.item_count() as u32 {
                    if let Some(est) = model.estimate(UserId(u), ItemId(i)) {
                        prop_assert!(
                            est >= lo && est <= hi,
                            "{kind}: estimate {est} outside [{lo}, {hi}]"
                        );
                    }
                }
            }
        }
    }
}

/// Spearman rank agreement needs real ranks; the generator property above is
/// deliberately weak, so pin the exact agreement here.
#[test]
fn spearman_matches_pearson_on_rank_valued_vectors() {
    let x = SparseRatings::new(vec![(0, 3.0), (1, 1.0), (2, 2.0), (3, 4.0)]);
    let y = SparseRatings::new(vec![(0, 2.0), (1, 4.0), (2, 1.0), (3, 3.0)]);
    let s = similarity(SimilarityKind::Spearman, &x, &y, 10).unwrap();
    let p = similarity(SimilarityKind::Pearson, &x, &y, 10).unwrap();
    assert!((s - p).abs() < 1e-12, "{s} vs {p}");
}

/// The raw-mean degree law needs large T; at T = 10 000 both modalities sit
/// within 5% of eta/p and eta/(1-p).
#[test]
fn degree_law_at_large_t() {
    for seed in 0..3 {
        let params = GeneratorParams::new(100, 10_000, 0.5, 7, 7, 0.5, 0.5, 0.2, seed).with_holdout(0);
        let (graph, trace) = generate_with_trace(params).unwrap();
        assert!(!trace.has_shortfall());
        let mean_user = graph.edge_count() as f64 / graph.user_count() as f64;
        let mean_item = graph.edge_count() as f64 / graph.item_count() as f64;
        assert!((mean_user - 14.0).abs() / 14.0 < 0.05, "user {mean_user}");
        assert!((mean_item - 14.0).abs() / 14.0 < 0.05, "item {mean_item}");
    }
}
