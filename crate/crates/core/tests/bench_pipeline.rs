//! Integration tests of the benchmark runner and its exports.

use tempfile::tempdir;

use recgraph_core::bench::export::{aggregate_csv, records_csv, AGGREGATE_HEADER, RECORDS_HEADER};
use recgraph_core::bench::{
    draw_user_sample, measure_build, measure_update, run_scenario, RunOptions, RunOutput, Scenario,
};
use recgraph_core::recommenders::{AlgorithmKind, RecommenderConfig};
use recgraph_core::{generate, write_graph, ExecMode, GeneratorParams, UserId};

fn small_scenario() -> Scenario {
    let graphs = vec![
        GeneratorParams::new(20, 150, 0.5, 3, 3, 0.6, 0.6, 0.3, 5),
        GeneratorParams::new(20, 150, 0.4, 2, 4, 0.3, 0.7, 0.1, 6),
    ];
    let algorithms = vec![
        RecommenderConfig::new(AlgorithmKind::UserBased),
        RecommenderConfig::new(AlgorithmKind::SlopeOne),
        RecommenderConfig::new(AlgorithmKind::Svd),
    ];
    let mut scenario = Scenario::new("small", graphs, algorithms);
    scenario.repetitions = 2;
    scenario.latency_sample_size = 15;
    scenario.update_batch_size = 20;
    scenario
}

/// Timing columns by header name; everything else must be reproducible.
fn strip_timing_columns(csv: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let keep: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, name)| !name.ends_with("_ms") && !name.starts_with("latency_ms"))
        .map(|(i, _)| i)
        .collect();
    let mut out = String::new();
    for line in std::iter::once(header.join(",")).chain(lines.map(str::to_string)) {
        let fields: Vec<&str> = line.split(',').collect();
        let kept: Vec<&str> = keep.iter().map(|&i| fields[i]).collect();
        out.push_str(&kept.join(","));
        out.push('\n');
    }
    out
}

#[test]
fn cell_counting_is_exact() {
    let dir = tempdir().unwrap();
    let scenario = small_scenario();
    let output = run_scenario(&scenario, &RunOptions::new(dir.path()).sequential()).unwrap();
    assert_eq!(output.records.len(), 2 * 3 * 2);
    assert!(output.failures.is_empty());
}

#[test]
fn cached_rerun_reproduces_summaries() {
    let dir = tempdir().unwrap();
    let scenario = small_scenario();
    let opts = RunOptions::new(dir.path()).sequential();
    let first = run_scenario(&scenario, &opts).unwrap();
    // Second run hits the graph cache.
    let second = run_scenario(&scenario, &opts).unwrap();
    assert_eq!(
        strip_timing_columns(&records_csv(&first.records)),
        strip_timing_columns(&records_csv(&second.records))
    );
}

#[test]
fn parallel_and_sequential_runs_agree_on_non_timing_columns() {
    let dir_a = tempdir().unwrap();
    let dir_b = tempdir().unwrap();
    let scenario = small_scenario();
    let par = run_scenario(&scenario, &RunOptions::new(dir_a.path())).unwrap();
    let seq = run_scenario(&scenario, &RunOptions::new(dir_b.path()).sequential()).unwrap();
    assert_eq!(
        strip_timing_columns(&records_csv(&par.records)),
        strip_timing_columns(&records_csv(&seq.records))
    );
}

#[test]
fn latency_percentiles_are_ordered_and_positive() {
    let dir = tempdir().unwrap();
    let scenario = small_scenario();
    let output = run_scenario(&scenario, &RunOptions::new(dir.path()).sequential()).unwrap();
    for r in &output.records {
        assert!(r.build_ms > 0.0);
        assert!(r.latency.p50_ms <= r.latency.p90_ms);
        assert!(r.latency.p90_ms <= r.latency.p99_ms);
        assert_eq!(r.latency.sample_size, 15);
        assert!(r.update_ms >= 0.0);
        assert!(r.memory_bytes > 0);
    }
}

#[test]
fn identical_builds_recommend_identically() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let graph = generate(GeneratorParams::new(20, 200, 0.5, 3, 3, 0.5, 0.5, 0.2, 9)).unwrap();
    write_graph(&graph, &path).unwrap();
    let config = RecommenderConfig::new(AlgorithmKind::Svd);
    let sample = draw_user_sample(graph.user_count(), 10, 3);
    let mut lists = Vec::new();
    for _ in 0..3 {
        let (model, build_ms) = measure_build(&config, &path).unwrap();
        assert!(build_ms > 0.0);
        let recs: Vec<_> = sample.iter().map(|&u| model.recommend(u, 10)).collect();
        lists.push(recs);
    }
    assert_eq!(lists[0], lists[1]);
    assert_eq!(lists[1], lists[2]);
}

#[test]
fn empty_update_batch_is_a_timed_no_op() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let graph = generate(GeneratorParams::new(10, 80, 0.5, 2, 2, 0.5, 0.5, 0.2, 4)).unwrap();
    write_graph(&graph, &path).unwrap();
    let (mut model, _) = measure_build(&RecommenderConfig::new(AlgorithmKind::SlopeOne), &path).unwrap();
    let fp = model.footprint_bytes();
    let est = model.estimate(UserId(0), recgraph_core::ItemId(1));
    let ms = measure_update(&mut model, &[]);
    assert!(ms < 1.0);
    assert_eq!(model.footprint_bytes(), fp);
    assert_eq!(model.estimate(UserId(0), recgraph_core::ItemId(1)), est);
}

#[test]
fn post_update_estimates_reflect_the_batch() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let graph = generate(GeneratorParams::new(20, 200, 0.5, 3, 3, 0.5, 0.5, 0.2, 12)).unwrap();
    write_graph(&graph, &path).unwrap();
    let (mut model, _) = measure_build(&RecommenderConfig::new(AlgorithmKind::SlopeOne), &path).unwrap();
    let batch: Vec<_> = graph
        .holdout_edges()
        .iter()
        .take(50)
        .map(|e| (e.user, e.item, e.rating))
        .collect();
    let user = batch[0].0;
    let item = batch[0].1;
    let before = model.estimate(user, item);
    measure_update(&mut model, &batch);
    // The updated pair is now a known rating feeding SlopeOne's diffs.
    let after = model.estimate(user, item);
    assert_ne!(before, after);
}

#[test]
fn holdout_shortage_is_a_scenario_error() {
    let dir = tempdir().unwrap();
    let mut scenario = small_scenario();
    scenario.update_batch_size = 10_000;
    let err = run_scenario(&scenario, &RunOptions::new(dir.path()).sequential());
    assert!(err.is_err());
}

#[test]
fn csv_schemas_are_consistent() {
    let dir = tempdir().unwrap();
    let scenario = small_scenario();
    let output = run_scenario(&scenario, &RunOptions::new(dir.path()).sequential()).unwrap();

    let records = records_csv(&output.records);
    let mut lines = records.lines();
    let header_count = lines.next().unwrap().split(',').count();
    assert_eq!(header_count, RECORDS_HEADER.split(',').count());
    let mut rows = 0;
    for line in lines {
        assert_eq!(line.split(',').count(), header_count, "row: {line}");
        rows += 1;
    }
    assert_eq!(rows, output.records.len());

    // 12 records over 2 reps collapse to 6 aggregate rows.
    let aggregate = aggregate_csv(&output.records, &scenario.x_name, scenario.log_scale);
    let mut lines = aggregate.lines();
    let header_count = lines.next().unwrap().split(',').count();
    assert_eq!(header_count, AGGREGATE_HEADER.split(',').count());
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row.split(',').count(), header_count);
        assert!(row.ends_with(",0"), "log_scale hint column");
    }
}

#[test]
fn aggregate_of_constant_columns_is_the_constant() {
    let dir = tempdir().unwrap();
    let scenario = small_scenario();
    let output = run_scenario(&scenario, &RunOptions::new(dir.path()).sequential()).unwrap();
    let aggregate = aggregate_csv(&output.records, &scenario.x_name, scenario.log_scale);
    let memory_col = AGGREGATE_HEADER.split(',').position(|c| c == "memory_bytes").unwrap();
    for line in aggregate.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let mem: f64 = fields[memory_col].parse().unwrap();
        // Memory is identical across repetitions, so its mean is integral.
        assert_eq!(mem.fract(), 0.0, "row {line}");
    }
}

#[test]
fn run_output_is_exportable_without_records() {
    let out = RunOutput::default();
    let csv = records_csv(&out.records);
    assert_eq!(csv.lines().count(), 1);
    let _ = ExecMode::default();
}
