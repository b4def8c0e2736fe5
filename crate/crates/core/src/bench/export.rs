//! CSV export of benchmark records and per-suite aggregates.
//!
//! Column layouts are fixed; timing columns are the ones named `*_ms`.
//! Everything else is deterministic under a fixed seed, which reruns rely
//! on. The aggregate table averages over repetitions per (graph, config)
//! cell and is keyed by the suite's independent variable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::params::GeneratorParams;
use crate::stats::GraphSummary;

use super::{BenchRecord, RunOutput};

pub const RECORDS_HEADER: &str = "suite,graph,graph_label,m,T,p,u,v,alpha,beta,b,graph_seed,holdout_steps,\
n_users,n_items,n_edges,mean_user_degree,mean_item_degree,mean_blcc_users,blcc_defined_users,\
mean_neighbors,mean_second_items,mean_second_items_incl,newman_second_neighbors,\
algo,similarity,neighborhood,threshold,knn_k,factors,train_iterations,top_n,rep,\
build_ms,memory_bytes,latency_ms_mean,latency_ms_p50,latency_ms_p90,latency_ms_p99,latency_sample,\
update_ms,update_batch";

pub const AGGREGATE_HEADER: &str =
    "suite,x_name,x_value,algo,similarity,neighborhood,threshold,knn_k,cells,\
build_ms,memory_bytes,latency_ms_mean,latency_ms_p50,latency_ms_p90,latency_ms_p99,update_ms,log_scale";

pub const STATS_HEADER: &str = "graph,m,T,p,u,v,alpha,beta,b,seed,holdout_steps,\
n_users,n_items,n_edges,mean_user_degree,mean_item_degree,mean_blcc_users,blcc_defined_users,\
mean_neighbors,mean_second_items,mean_second_items_incl,newman_second_neighbors";

fn fmt(value: f64) -> String {
    format!("{value:.6}")
}

fn params_fields(params: &GeneratorParams) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        params.m,
        params.iterations,
        params.p,
        params.u,
        params.v,
        params.alpha,
        params.beta,
        params.b,
        params.seed,
        params.holdout_steps,
    )
}

fn summary_fields(summary: &GraphSummary) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        summary.users,
        summary.items,
        summary.edges,
        fmt(summary.mean_user_degree),
        fmt(summary.mean_item_degree),
        fmt(summary.mean_blcc_users),
        summary.blcc_defined_users,
        fmt(summary.mean_neighbors),
        fmt(summary.mean_second_items),
        fmt(summary.mean_second_items_incl),
        fmt(summary.newman_second_neighbors),
    )
}

fn record_row(record: &BenchRecord) -> String {
    let config = &record.config;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        record.suite,
        record.graph_index,
        record.graph_label,
        params_fields(&record.params),
        summary_fields(&record.summary),
        config.algorithm,
        config.similarity,
        config.neighborhood_size,
        config.threshold.map_or(String::new(), |t| t.to_string()),
        config.knn_k,
        config.factors,
        config.training_iterations,
        config.top_n,
        record.repetition,
        fmt(record.build_ms),
        record.memory_bytes,
        fmt(record.latency.mean_ms),
        fmt(record.latency.p50_ms),
        fmt(record.latency.p90_ms),
        fmt(record.latency.p99_ms),
        record.latency.sample_size,
        fmt(record.update_ms),
        record.update_batch,
    )
}

pub fn records_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&record_row(record));
        out.push('\n');
    }
    out
}

/// Mean over repetitions per (graph, config) cell, keyed by the suite's
/// independent variable.
pub fn aggregate_csv(records: &[BenchRecord], x_name: &str, log_scale: bool) -> String {
    #[derive(Default)]
    struct Acc {
        n: usize,
        build: f64,
        memory: f64,
        mean: f64,
        p50: f64,
        p90: f64,
        p99: f64,
        update: f64,
    }
    let mut groups: BTreeMap<(usize, usize), Acc> = BTreeMap::new();
    for r in records {
        let acc = groups.entry((r.graph_index, r.config_index)).or_default();
        acc.n += 1;
        acc.build += r.build_ms;
        acc.memory += r.memory_bytes as f64;
        acc.mean += r.latency.mean_ms;
        acc.p50 += r.latency.p50_ms;
        acc.p90 += r.latency.p90_ms;
        acc.p99 += r.latency.p99_ms;
        acc.update += r.update_ms;
    }
    let by_cell: BTreeMap<(usize, usize), &BenchRecord> = records
        .iter()
        .map(|r| ((r.graph_index, r.config_index), r))
        .collect();

    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for ((g, a), acc) in &groups {
        let rep = by_cell[&(*g, *a)];
        let config = &rep.config;
        let n = acc.n as f64;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            rep.suite,
            x_name,
            rep.graph_label,
            config.algorithm,
            config.similarity,
            config.neighborhood_size,
            config.threshold.map_or(String::new(), |t| t.to_string()),
            config.knn_k,
            acc.n,
            fmt(acc.build / n),
            fmt(acc.memory / n),
            fmt(acc.mean / n),
            fmt(acc.p50 / n),
            fmt(acc.p90 / n),
            fmt(acc.p99 / n),
            fmt(acc.update / n),
            u8::from(log_scale),
        ));
    }
    out
}

/// One row of the `stats` CSV: parameters (blank when the graph carries
/// none) plus the summary.
pub fn stats_csv_row(label: &str, params: Option<&GeneratorParams>, summary: &GraphSummary) -> String {
    let params_part = match params {
        Some(p) => params_fields(p),
        None => ",".repeat(9),
    };
    format!("{},{},{}", label, params_part, summary_fields(summary))
}

pub fn failures_log(output: &RunOutput) -> String {
    let mut out = String::new();
    for f in &output.failures {
        out.push_str(&format!(
            "graph={} config={} rep={}: {}\n",
            f.graph_index, f.config_index, f.repetition, f.message
        ));
    }
    out
}

/// Writes `records.csv`, `aggregate_<suite>.csv` and `failures.log` under
/// `dir`.
pub fn write_run(dir: &Path, suite: &str, x_name: &str, log_scale: bool, output: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("records.csv"), records_csv(&output.records))?;
    fs::write(
        dir.join(format!("aggregate_{suite}.csv")),
        aggregate_csv(&output.records, x_name, log_scale),
    )?;
    fs::write(dir.join("failures.log"), failures_log(output))?;
    Ok(())
}
