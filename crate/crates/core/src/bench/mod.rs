//! The experiment protocol: generate graph suites, run every recommender
//! against each graph, and measure BUILD, MEMORY, LATENCY and UPDATE.
//!
//! Cells (graph x algorithm x repetition) are independent; by default they
//! fan out across the worker pool, and `--sequential` pins everything to one
//! thread for low-noise timing. Within one graph every algorithm is timed
//! against the identical seeded user sample, so cross-algorithm latency
//! ratios are paired.

pub mod export;
pub mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::format::{read_graph, write_graph};
use crate::generator::generate;
use crate::ids::{ItemId, UserId};
use crate::model::RatingDataModel;
use crate::params::GeneratorParams;
use crate::recommenders::{AlgorithmKind, RecommenderConfig, RecommenderModel};
use crate::similarity::SimilarityKind;
use crate::stats::{summarize_mode, GraphSummary};

pub const DEFAULT_LATENCY_SAMPLE: usize = 500;
pub const DEFAULT_UPDATE_BATCH: usize = 100;
pub const DEFAULT_REPETITIONS: usize = 3;

/// One benchmark plan: a list of graphs crossed with a list of recommender
/// configurations, repeated `repetitions` times per cell.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    /// Name of the independent variable the suite sweeps (for aggregates).
    pub x_name: String,
    pub graphs: Vec<GeneratorParams>,
    /// One label per graph, the x value in aggregate exports.
    pub graph_labels: Vec<String>,
    pub algorithms: Vec<RecommenderConfig>,
    pub latency_sample_size: usize,
    pub update_batch_size: usize,
    pub repetitions: usize,
    /// Hint that plots of this suite want a logarithmic value axis.
    pub log_scale: bool,
}

impl Scenario {
    pub fn new(name: impl Into<String>, graphs: Vec<GeneratorParams>, algorithms: Vec<RecommenderConfig>) -> Self {
        let graph_labels = (0..graphs.len()).map(|i| format!("g{i}")).collect();
        Scenario {
            name: name.into(),
            x_name: "graph".to_string(),
            graphs,
            graph_labels,
            algorithms,
            latency_sample_size: DEFAULT_LATENCY_SAMPLE,
            update_batch_size: DEFAULT_UPDATE_BATCH,
            repetitions: DEFAULT_REPETITIONS,
            log_scale: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.graphs.is_empty() {
            return Err(Error::Scenario("scenario has no graphs".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Scenario("scenario has no algorithms".into()));
        }
        if self.graph_labels.len() != self.graphs.len() {
            return Err(Error::Scenario("graph labels out of sync".into()));
        }
        for params in &self.graphs {
            params.validate()?;
        }
        for config in &self.algorithms {
            config.validate()?;
        }
        if self.repetitions < 1 {
            return Err(Error::Scenario("repetitions must be at least 1".into()));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.graphs.len() * self.algorithms.len() * self.repetitions
    }

    /// Parses the TOML scenario file format (see the README for the schema).
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Scenario(format!("scenario file: {e}")))?;
        file.into_scenario()
    }
}

#[derive(Deserialize)]
struct ScenarioFile {
    name: Option<String>,
    latency_sample_size: Option<usize>,
    update_batch_size: Option<usize>,
    repetitions: Option<usize>,
    graphs: Vec<GeneratorParams>,
    algorithms: Vec<AlgorithmEntry>,
}

#[derive(Deserialize)]
struct AlgorithmEntry {
    algo: String,
    similarity: Option<String>,
    neighborhood: Option<usize>,
    threshold: Option<f64>,
    knn_k: Option<usize>,
    factors: Option<usize>,
    iterations: Option<usize>,
    learning_rate: Option<f64>,
    regularization: Option<f64>,
    top_n: Option<usize>,
    seed: Option<u64>,
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<Scenario> {
        let mut algorithms = Vec::new();
        for entry in self.algorithms {
            let kind: AlgorithmKind = entry
                .algo
                .parse()
                .map_err(|e: String| Error::Scenario(e))?;
            let mut config = RecommenderConfig::new(kind);
            if let Some(s) = entry.similarity {
                config.similarity = s
                    .parse::<SimilarityKind>()
                    .map_err(Error::Scenario)?;
            }
            if let Some(n) = entry.neighborhood {
                config.neighborhood_size = n;
            }
            config.threshold = entry.threshold.or(config.threshold);
            if let Some(k) = entry.knn_k {
                config.knn_k = k;
            }
            if let Some(f) = entry.factors {
                config.factors = f;
            }
            if let Some(i) = entry.iterations {
                config.training_iterations = i;
            }
            if let Some(lr) = entry.learning_rate {
                config.learning_rate = lr;
            }
            if let Some(reg) = entry.regularization {
                config.regularization = reg;
            }
            if let Some(n) = entry.top_n {
                config.top_n = n;
            }
            if let Some(s) = entry.seed {
                config.seed = s;
            }
            algorithms.push(config);
        }
        let mut scenario = Scenario::new(
            self.name.unwrap_or_else(|| "custom".to_string()),
            self.graphs,
            algorithms,
        );
        if let Some(n) = self.latency_sample_size {
            scenario.latency_sample_size = n;
        }
        if let Some(n) = self.update_batch_size {
            scenario.update_batch_size = n;
        }
        if let Some(n) = self.repetitions {
            scenario.repetitions = n;
        }
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Latency sample statistics over one cell, in real-valued milliseconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatencyStats {
    pub mean_ms: f64,
    pub p50_ms: f64,
    pub p90_ms: f64,
    pub p99_ms: f64,
    pub sample_size: usize,
}

/// One benchmark observation.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub suite: String,
    pub graph_index: usize,
    pub graph_label: String,
    pub params: GeneratorParams,
    pub summary: GraphSummary,
    pub config_index: usize,
    pub config: RecommenderConfig,
    pub repetition: usize,
    pub build_ms: f64,
    pub memory_bytes: u64,
    pub latency: LatencyStats,
    pub update_ms: f64,
    pub update_batch: usize,
}

/// A cell that failed; the run continues without it.
#[derive(Clone, Debug)]
pub struct CellFailure {
    pub graph_index: usize,
    pub config_index: usize,
    pub repetition: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<CellFailure>,
}

/// Runtime knobs for [`run_scenario`].
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub mode: ExecMode,
    /// Directory holding the `graphs/` cache (and where exports land).
    pub out_dir: PathBuf,
    /// Base seed for latency sampling; shared per graph across algorithms.
    pub seed: u64,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunOptions {
            mode: ExecMode::default(),
            out_dir: out_dir.into(),
            seed: 42,
        }
    }

    pub fn sequential(mut self) -> Self {
        self.mode = ExecMode::Sequential;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

struct GraphContext {
    path: PathBuf,
    summary: GraphSummary,
    holdout: Vec<(UserId, ItemId, i32)>,
    user_count: usize,
}

/// Reads the graph from a per-parameter cache, generating it on a miss.
/// The summary always comes from the file-parsed graph, so cached reruns
/// reproduce it exactly.
fn prepare_graph(params: &GeneratorParams, cache_dir: &Path, mode: ExecMode) -> Result<GraphContext> {
    let path = cache_dir.join(format!("graph_{:016x}.txt", params_hash(params)));
    if !path.exists() {
        let graph = generate(params.clone())?;
        write_graph(&graph, &path)?;
    }
    let graph = read_graph(&path)?;
    let summary = summarize_mode(&graph, mode);
    let holdout = graph
        .holdout_edges()
        .iter()
        .map(|e| (e.user, e.item, e.rating))
        .collect();
    Ok(GraphContext {
        path,
        summary,
        holdout,
        user_count: graph.user_count(),
    })
}

/// FNV-1a over the serialized parameters; keys the graph cache.
fn params_hash(params: &GeneratorParams) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in params.header_string().bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

/// Wall-clock span of `read_graph` + model build, per the BUILD definition.
pub fn measure_build(config: &RecommenderConfig, graph_file: &Path) -> Result<(RecommenderModel, f64)> {
    let start = Instant::now();
    let graph = read_graph(graph_file)?;
    let data = RatingDataModel::from_bigraph(&graph);
    let model = RecommenderModel::build(config.clone(), data)?;
    Ok((model, ms_since(start)))
}

/// The seeded user sample for latency measurement: uniform without
/// replacement, clamped to all users when the sample exceeds them.
pub fn draw_user_sample(user_count: usize, sample_size: usize, seed: u64) -> Vec<UserId> {
    use rand::seq::SliceRandom;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<UserId> = (0..user_count as u32).map(UserId).collect();
    ids.shuffle(&mut rng);
    ids.truncate(sample_size.min(user_count));
    ids
}

/// Times one `recommend` call per sampled user. Empty recommendations still
/// count; they cost time like any other call.
pub fn measure_latency(model: &RecommenderModel, sample: &[UserId]) -> LatencyStats {
    let top_n = model.config().top_n;
    let mut timings_ms: Vec<f64> = Vec::with_capacity(sample.len());
    for &user in sample {
        let start = Instant::now();
        let rec = model.recommend(user, top_n);
        timings_ms.push(ms_since(start));
        std::hint::black_box(rec);
    }
    latency_stats(timings_ms)
}

fn latency_stats(mut timings_ms: Vec<f64>) -> LatencyStats {
    let n = timings_ms.len();
    if n == 0 {
        return LatencyStats {
            mean_ms: 0.0,
            p50_ms: 0.0,
            p90_ms: 0.0,
            p99_ms: 0.0,
            sample_size: 0,
        };
    }
    let mean = timings_ms.iter().sum::<f64>() / n as f64;
    timings_ms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    LatencyStats {
        mean_ms: mean,
        p50_ms: percentile(&timings_ms, 0.50),
        p90_ms: percentile(&timings_ms, 0.90),
        p99_ms: percentile(&timings_ms, 0.99),
        sample_size: n,
    }
}

/// Nearest-rank percentile over a sorted slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Times one `update` call with the batch.
pub fn measure_update(model: &mut RecommenderModel, batch: &[(UserId, ItemId, i32)]) -> f64 {
    let start = Instant::now();
    let outcome = model.update(batch);
    let elapsed = ms_since(start);
    std::hint::black_box(outcome);
    elapsed
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs every cell of the scenario. Per-cell failures are collected, not
/// fatal. Graphs are cached under `<out_dir>/graphs`.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput> {
    scenario.validate()?;
    let cache_dir = opts.out_dir.join("graphs");
    fs::create_dir_all(&cache_dir)?;

    let contexts: Vec<Result<GraphContext>> = map_indexed(scenario.graphs.len(), opts.mode, |g| {
        prepare_graph(&scenario.graphs[g], &cache_dir, ExecMode::Sequential)
    });
    let mut graphs = Vec::with_capacity(contexts.len());
    for ctx in contexts {
        graphs.push(ctx?);
    }
    for (g, ctx) in graphs.iter().enumerate() {
        if ctx.holdout.len() < scenario.update_batch_size {
            return Err(Error::Scenario(format!(
                "graph {g} has {} holdout ratings, fewer than the update batch of {}",
                ctx.holdout.len(),
                scenario.update_batch_size
            )));
        }
    }

    let n_algos = scenario.algorithms.len();
    let n_cells = scenario.cell_count();
    let cells: Vec<std::result::Result<BenchRecord, CellFailure>> =
        map_indexed(n_cells, opts.mode, |cell| {
            let g = cell / (n_algos * scenario.repetitions);
            let rest = cell % (n_algos * scenario.repetitions);
            let a = rest / scenario.repetitions;
            let rep = rest % scenario.repetitions;
            run_cell(scenario, opts, &graphs[g], g, a, rep)
                .map_err(|e| CellFailure {
                    graph_index: g,
                    config_index: a,
                    repetition: rep,
                    message: e.to_string(),
                })
        });

    let mut output = RunOutput::default();
    for cell in cells {
        match cell {
            Ok(record) => output.records.push(record),
            Err(failure) => output.failures.push(failure),
        }
    }
    Ok(output)
}

fn run_cell(
    scenario: &Scenario,
    opts: &RunOptions,
    ctx: &GraphContext,
    g: usize,
    a: usize,
    rep: usize,
) -> Result<BenchRecord> {
    let config = &scenario.algorithms[a];
    let (mut model, build_ms) = measure_build(config, &ctx.path)?;
    let memory_bytes = model.footprint_bytes();
    // Same seed per graph: every algorithm and repetition sees the same
    // user sample.
    let sample = draw_user_sample(
        ctx.user_count,
        scenario.latency_sample_size,
        opts.seed.wrapping_add(g as u64),
    );
    let latency = measure_latency(&model, &sample);
    let batch = &ctx.holdout[..scenario.update_batch_size];
    let update_ms = measure_update(&mut model, batch);
    Ok(BenchRecord {
        suite: scenario.name.clone(),
        graph_index: g,
        graph_label: scenario.graph_labels[g].clone(),
        params: scenario.graphs[g].clone(),
        summary: ctx.summary.clone(),
        config_index: a,
        config: config.clone(),
        repetition: rep,
        build_ms,
        memory_bytes,
        latency,
        update_ms,
        update_batch: scenario.update_batch_size,
    })
}
