//! `recgraph` — generate random bipartite rating graphs, inspect their
//! topology, train recommenders, and run performance benchmark suites.
//!
//! Exit codes: 0 success, 1 validation error (bad flags or parameters),
//! 2 runtime failure (I/O, malformed files).

use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};

use recgraph_core::bench::export::{stats_csv_row, write_run, STATS_HEADER};
use recgraph_core::bench::suites::{self, PAPER_SCALE};
use recgraph_core::bench::{RunOptions, Scenario};
use recgraph_core::recommenders::{AlgorithmKind, RecommenderConfig, RecommenderModel};
use recgraph_core::similarity::SimilarityKind;
use recgraph_core::{
    generate, read_graph, summarize, write_graph, Error, GeneratorParams, RatingDataModel, UserId,
};

#[derive(Parser)]
#[command(name = "recgraph", version, about = "Random bipartite rating graphs and recommender benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random bipartite rating graph file
    Generate(GenerateArgs),
    /// Summarize graph files as a stats CSV
    Stats(StatsArgs),
    /// Train one recommender and print a top-N recommendation
    Recommend(RecommendArgs),
    /// Run benchmark suites or a custom scenario
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Initial loose edges (seed users/items)
    #[arg(long)]
    m: u32,
    /// Growth iterations
    #[arg(long = "T")]
    iterations: u32,
    /// Probability that a new node is a user
    #[arg(long)]
    p: f64,
    /// Edges per new user
    #[arg(long)]
    u: u32,
    /// Edges per new item
    #[arg(long)]
    v: u32,
    /// Preferential-attachment probability for new-user edges
    #[arg(long)]
    alpha: f64,
    /// Preferential-attachment probability for new-item edges
    #[arg(long)]
    beta: f64,
    /// Fraction of preferential edges re-routed through bouncing
    #[arg(long)]
    b: f64,
    /// RNG seed (an integer, or `random`)
    #[arg(long, default_value = "42")]
    seed: String,
    /// Extra iterations generating the holdout (update) edge set
    #[arg(long, default_value_t = 100)]
    holdout_steps: u32,
    /// Comma-separated integer rating values
    #[arg(long, default_value = "0,1,2,3,4,5")]
    rating_values: String,
    /// Output file (defaults to bigraph_m<m>_T<T>_seed<seed>.txt)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Graph files to summarize
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecommendArgs {
    /// Graph file to train on
    #[arg(long)]
    graph: PathBuf,
    /// Algorithm: userbased|itembased|slopeone|userthreshold|knnitem|svd
    #[arg(long)]
    algo: String,
    /// User id to recommend for
    #[arg(long)]
    user: u32,
    #[arg(long, default_value_t = 10)]
    top_n: usize,
    /// Similarity: pearson|euclidean|loglikelihood|spearman|tanimoto
    #[arg(long, default_value = "pearson")]
    similarity: String,
    /// Neighborhood size for userbased
    #[arg(long, default_value_t = 200)]
    neighborhood: usize,
    /// Similarity cutoff, required for userthreshold
    #[arg(long)]
    threshold: Option<f64>,
    /// Item neighbors for knnitem
    #[arg(long, default_value_t = 200)]
    knn_k: usize,
    /// Latent factors for svd
    #[arg(long, default_value_t = 10)]
    factors: usize,
    /// Training iterations for svd
    #[arg(long, default_value_t = 200)]
    iterations: usize,
    #[arg(long, default_value_t = 0.01)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.02)]
    regularization: f64,
    /// RNG seed (an integer, or `random`)
    #[arg(long, default_value = "42")]
    seed: String,
}

#[derive(Args)]
struct BenchArgs {
    #[command(subcommand)]
    command: BenchCommand,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run a built-in suite: scalability|density|proportion|clustering|shapes|similarity|neighborhood
    Suite(SuiteArgs),
    /// Run a scenario from a TOML file
    Custom(CustomArgs),
}

#[derive(Args)]
struct SuiteArgs {
    name: String,
    /// Iteration-count multiplier over the desk-scale baseline
    #[arg(long, conflicts_with = "paper_scale")]
    scale: Option<f64>,
    /// Full-size graphs (scale 5.0, T = 10 000 baseline)
    #[arg(long)]
    paper_scale: bool,
    #[command(flatten)]
    run: BenchRunArgs,
}

#[derive(Args)]
struct CustomArgs {
    /// Scenario TOML file
    file: PathBuf,
    #[command(flatten)]
    run: BenchRunArgs,
}

#[derive(Args)]
struct BenchRunArgs {
    /// RNG seed (an integer, or `random`)
    #[arg(long, default_value = "42")]
    seed: String,
    /// Run every cell on one thread (low-noise timing)
    #[arg(long)]
    sequential: bool,
    /// Output directory (records.csv, aggregates, graph cache)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override repetitions per cell
    #[arg(long)]
    reps: Option<usize>,
    /// Override the latency user-sample size
    #[arg(long)]
    latency_sample: Option<usize>,
    /// Override the update batch size
    #[arg(long)]
    update_batch: Option<usize>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                err.print().ok();
                std::process::exit(0);
            }
            err.print().ok();
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(if err.is_validation() { 1 } else { 2 });
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Recommend(args) => cmd_recommend(args),
        Command::Bench(args) => match args.command {
            BenchCommand::Suite(suite) => cmd_bench_suite(suite),
            BenchCommand::Custom(custom) => cmd_bench_custom(custom),
        },
    }
}

fn parse_seed(raw: &str) -> Result<u64, Error> {
    if raw == "random" {
        return Ok(rand::random());
    }
    raw.parse()
        .map_err(|_| Error::invalid("seed", format!("expected an integer or `random`, got `{raw}`")))
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Error> {
    let seed = parse_seed(&args.seed)?;
    let mut rating_values = Vec::new();
    for part in args.rating_values.split(',') {
        let value = part.trim().parse().map_err(|_| {
            Error::invalid("rating_values", format!("malformed entry `{part}`"))
        })?;
        rating_values.push(value);
    }
    let params = GeneratorParams {
        m: args.m,
        iterations: args.iterations,
        p: args.p,
        u: args.u,
        v: args.v,
        alpha: args.alpha,
        beta: args.beta,
        b: args.b,
        seed,
        holdout_steps: args.holdout_steps,
        rating_values,
    };
    params.validate()?;
    let out = args.out.unwrap_or_else(|| {
        PathBuf::from(format!(
            "bigraph_m{}_T{}_seed{}.txt",
            params.m, params.iterations, params.seed
        ))
    });
    let graph = generate(params)?;
    write_graph(&graph, &out)?;
    let s = summarize(&graph);
    println!(
        "wrote {} users={} items={} edges={} holdout={} mean_user_degree={:.4} mean_item_degree={:.4} mean_blcc_users={:.6} neighbors={:.4} second_items={:.4} newman={:.4}",
        out.display(),
        s.users,
        s.items,
        s.edges,
        graph.holdout_edges().len(),
        s.mean_user_degree,
        s.mean_item_degree,
        s.mean_blcc_users,
        s.mean_neighbors,
        s.mean_second_items,
        s.newman_second_neighbors,
    );
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<(), Error> {
    let mut csv = String::from(STATS_HEADER);
    csv.push('\n');
    for path in &args.graphs {
        let graph = read_graph(path)?;
        let summary = summarize(&graph);
        let label = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        csv.push_str(&stats_csv_row(&label, graph.params(), &summary));
        csv.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_recommend(args: RecommendArgs) -> Result<(), Error> {
    let algorithm: AlgorithmKind = args
        .algo
        .parse()
        .map_err(|e: String| Error::invalid("algo", e))?;
    let similarity: SimilarityKind = args
        .similarity
        .parse()
        .map_err(|e: String| Error::invalid("similarity", e))?;
    let config = RecommenderConfig {
        algorithm,
        similarity,
        neighborhood_size: args.neighborhood,
        threshold: args.threshold,
        knn_k: args.knn_k,
        factors: args.factors,
        training_iterations: args.iterations,
        learning_rate: args.learning_rate,
        regularization: args.regularization,
        top_n: args.top_n,
        seed: parse_seed(&args.seed)?,
    };
    config.validate()?;
    let graph = read_graph(&args.graph)?;
    let data = RatingDataModel::from_bigraph(&graph);
    let model = RecommenderModel::build(config, data)?;
    let recommendation = model.recommend(UserId(args.user), args.top_n);
    if recommendation.unknown_user {
        eprintln!("warning: user {} is unknown to the model", args.user);
    }
    for (item, estimate) in &recommendation.items {
        println!("{item}\t{estimate:.4}");
    }
    Ok(())
}

fn apply_run_args(scenario: &mut Scenario, run: &BenchRunArgs) {
    if let Some(reps) = run.reps {
        scenario.repetitions = reps;
    }
    if let Some(sample) = run.latency_sample {
        scenario.latency_sample_size = sample;
    }
    if let Some(batch) = run.update_batch {
        scenario.update_batch_size = batch;
    }
}

fn execute(scenario: &Scenario, run: &BenchRunArgs, default_dir: &str) -> Result<(), Error> {
    let seed = parse_seed(&run.seed)?;
    let out_dir = run
        .run_dir()
        .unwrap_or_else(|| PathBuf::from("bench_out").join(default_dir));
    let mut opts = RunOptions::new(&out_dir).with_seed(seed);
    if run.sequential {
        opts = opts.sequential();
    }
    let output = recgraph_core::bench::run_scenario(scenario, &opts)?;
    write_run(&out_dir, &scenario.name, &scenario.x_name, scenario.log_scale, &output)?;
    println!(
        "suite={} cells={} records={} failures={} out={}",
        scenario.name,
        scenario.cell_count(),
        output.records.len(),
        output.failures.len(),
        out_dir.display()
    );
    Ok(())
}

impl BenchRunArgs {
    fn run_dir(&self) -> Option<PathBuf> {
        self.out.clone()
    }
}

fn cmd_bench_suite(args: SuiteArgs) -> Result<(), Error> {
    let scale = if args.paper_scale {
        PAPER_SCALE
    } else {
        args.scale.unwrap_or(1.0)
    };
    if !(scale > 0.0) {
        return Err(Error::invalid("scale", "must be positive"));
    }
    let seed = parse_seed(&args.run.seed)?;
    let mut scenario = suites::suite(&args.name, scale, seed).ok_or_else(|| {
        Error::invalid(
            "suite",
            format!(
                "unknown suite `{}` (expected one of {})",
                args.name,
                suites::SUITE_NAMES.join("|")
            ),
        )
    })?;
    apply_run_args(&mut scenario, &args.run);
    execute(&scenario, &args.run, &args.name)
}

fn cmd_bench_custom(args: CustomArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.file)?;
    let mut scenario = Scenario::from_toml(&text)?;
    apply_run_args(&mut scenario, &args.run);
    let stem = Path::new(&args.file)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".to_string());
    execute(&scenario, &args.run, &stem)
}

#[allow(dead_code)]
fn assert_cli_wiring() {
    Cli::command().debug_assert();
}
