//! The seven built-in benchmark suites, reconstructed at two scales: desk
//! scale (T = 2 000 baseline) for quick trend runs, and `--paper-scale`
//! (scale 5.0, T = 10 000 baseline) for full-size graphs.

use crate::params::GeneratorParams;
use crate::recommenders::{AlgorithmKind, RecommenderConfig};
use crate::similarity::SimilarityKind;

use super::Scenario;

/// Baseline iteration count of most suites at scale 1.0.
pub const DESK_T: u32 = 2_000;
/// `--paper-scale` multiplies baselines by this factor.
pub const PAPER_SCALE: f64 = 5.0;

pub const SUITE_NAMES: [&str; 7] = [
    "scalability",
    "density",
    "proportion",
    "clustering",
    "shapes",
    "similarity",
    "neighborhood",
];

fn scaled(base: u32, scale: f64) -> u32 {
    ((base as f64 * scale).round() as u32).max(1)
}

fn base_params(iterations: u32, seed: u64) -> GeneratorParams {
    GeneratorParams::new(100, iterations, 0.5, 7, 7, 0.5, 0.5, 0.3, seed)
}

/// All six algorithms with the stated defaults; the threshold variant runs
/// with the non-negative cutoff at zero.
pub fn standard_algorithms() -> Vec<RecommenderConfig> {
    AlgorithmKind::ALL
        .iter()
        .map(|&kind| {
            let config = RecommenderConfig::new(kind);
            if kind == AlgorithmKind::UserThreshold {
                config.with_threshold(0.0)
            } else {
                config
            }
        })
        .collect()
}

/// Returns the named suite, or `None` for an unknown name.
pub fn suite(name: &str, scale: f64, seed: u64) -> Option<Scenario> {
    match name {
        "scalability" => Some(scalability_suite(scale, seed)),
        "density" => Some(density_suite(scale, seed)),
        "proportion" => Some(proportion_suite(scale, seed)),
        "clustering" => Some(clustering_suite(scale, seed)),
        "shapes" => Some(shapes_suite(scale, seed)),
        "similarity" => Some(similarity_suite(scale, seed)),
        "neighborhood" => Some(neighborhood_suite(scale, seed)),
        _ => None,
    }
}

pub fn builtin_suites(scale: f64, seed: u64) -> Vec<Scenario> {
    SUITE_NAMES
        .iter()
        .map(|name| suite(name, scale, seed).unwrap())
        .collect()
}

/// Same parameters, growing iteration counts.
pub fn scalability_suite(scale: f64, seed: u64) -> Scenario {
    let ts = [250u32, 500, 1_000, 2_000, 4_000];
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for (idx, &t) in ts.iter().enumerate() {
        let t = scaled(t, scale);
        graphs.push(base_params(t, seed.wrapping_add(idx as u64)));
        labels.push(format!("T={t}"));
    }
    let mut s = Scenario::new("scalability", graphs, standard_algorithms());
    s.x_name = "T".into();
    s.graph_labels = labels;
    s.log_scale = true;
    s
}

/// Constant node budget, edge counts swept through `u` and `v`: the four
/// symmetric settings plus five asymmetric pairs and their mirrors.
pub fn density_suite(scale: f64, seed: u64) -> Scenario {
    let mut uv: Vec<(u32, u32)> = vec![(3, 3), (6, 6), (12, 12), (24, 24)];
    for k in [4u32, 6, 9, 12, 15] {
        uv.push((3, k));
        uv.push((k, 3));
    }
    let t = scaled(DESK_T, scale);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for (idx, &(u, v)) in uv.iter().enumerate() {
        let mut params = base_params(t, seed.wrapping_add(idx as u64));
        params.u = u;
        params.v = v;
        graphs.push(params);
        labels.push(format!("u={u} v={v}"));
    }
    let mut s = Scenario::new("density", graphs, standard_algorithms());
    s.x_name = "uv".into();
    s.graph_labels = labels;
    s
}

/// Constant node and edge totals (`u = v` keeps eta fixed), sweeping the
/// user proportion `p` over 0.1 ..= 0.9.
pub fn proportion_suite(scale: f64, seed: u64) -> Scenario {
    let t = scaled(DESK_T, scale);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for i in 1..=9u32 {
        let p = i as f64 / 10.0;
        let mut params = base_params(t, seed.wrapping_add(i as u64));
        params.p = p;
        graphs.push(params);
        labels.push(format!("p={p}"));
    }
    let mut s = Scenario::new("proportion", graphs, standard_algorithms());
    s.x_name = "p".into();
    s.graph_labels = labels;
    s
}

/// Bouncing swept from 0.0 to 1.0 in 0.1 steps at alpha = beta = 0.8.
/// The paper-scale baseline is T = 9 900 (10 100 nodes).
pub fn clustering_suite(scale: f64, seed: u64) -> Scenario {
    let t = scaled(1_980, scale);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..=10u32 {
        let b = i as f64 / 10.0;
        let mut params = base_params(t, seed.wrapping_add(i as u64));
        params.u = 12;
        params.v = 12;
        params.alpha = 0.8;
        params.beta = 0.8;
        params.b = b;
        graphs.push(params);
        labels.push(format!("b={b}"));
    }
    let mut s = Scenario::new("clustering", graphs, standard_algorithms());
    s.x_name = "b".into();
    s.graph_labels = labels;
    s
}

/// The full 6x6 grid of alpha and beta over {0.0, 0.2, ..., 1.0}.
pub fn shapes_suite(scale: f64, seed: u64) -> Scenario {
    let t = scaled(DESK_T, scale);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    let mut idx = 0u64;
    for ai in 0..=5u32 {
        for bi in 0..=5u32 {
            let alpha = ai as f64 / 5.0;
            let beta = bi as f64 / 5.0;
            let mut params = base_params(t, seed.wrapping_add(idx));
            params.alpha = alpha;
            params.beta = beta;
            graphs.push(params);
            labels.push(format!("alpha={alpha} beta={beta}"));
            idx += 1;
        }
    }
    let mut s = Scenario::new("shapes", graphs, standard_algorithms());
    s.x_name = "alpha_beta".into();
    s.graph_labels = labels;
    s
}

fn density_quartet(scale: f64, seed: u64) -> (Vec<GeneratorParams>, Vec<String>) {
    let t = scaled(DESK_T, scale);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for (idx, k) in [3u32, 6, 12, 24].into_iter().enumerate() {
        let mut params = base_params(t, seed.wrapping_add(idx as u64));
        params.u = k;
        params.v = k;
        graphs.push(params);
        labels.push(format!("u=v={k}"));
    }
    (graphs, labels)
}

/// UserBased over the four symmetric density graphs with each of the five
/// similarity measures.
pub fn similarity_suite(scale: f64, seed: u64) -> Scenario {
    let (graphs, labels) = density_quartet(scale, seed);
    let algorithms = SimilarityKind::ALL
        .iter()
        .map(|&kind| RecommenderConfig::new(AlgorithmKind::UserBased).with_similarity(kind))
        .collect();
    let mut s = Scenario::new("similarity", graphs, algorithms);
    s.x_name = "uv".into();
    s.graph_labels = labels;
    s
}

/// UserBased over the four symmetric density graphs at four neighborhood
/// levels.
pub fn neighborhood_suite(scale: f64, seed: u64) -> Scenario {
    let (graphs, labels) = density_quartet(scale, seed);
    let algorithms = [50usize, 100, 200, 400]
        .into_iter()
        .map(|n| RecommenderConfig::new(AlgorithmKind::UserBased).with_neighborhood(n))
        .collect();
    let mut s = Scenario::new("neighborhood", graphs, algorithms);
    s.x_name = "uv".into();
    s.graph_labels = labels;
    s
}
