//! The five similarity measures over sparse rating vectors.
//!
//! An undefined similarity (no co-rated dimensions, zero variance, …) is a
//! first-class `None` result, never coerced to zero: callers distinguish
//! "no evidence" from "orthogonal".

use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    Pearson,
    Euclidean,
    LogLikelihood,
    Spearman,
    Tanimoto,
}

impl SimilarityKind {
    pub const ALL: [SimilarityKind; 5] = [
        SimilarityKind::Pearson,
        SimilarityKind::Euclidean,
        SimilarityKind::LogLikelihood,
        SimilarityKind::Spearman,
        SimilarityKind::Tanimoto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SimilarityKind::Pearson => "pearson",
            SimilarityKind::Euclidean => "euclidean",
            SimilarityKind::LogLikelihood => "loglikelihood",
            SimilarityKind::Spearman => "spearman",
            SimilarityKind::Tanimoto => "tanimoto",
        }
    }
}

impl FromStr for SimilarityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pearson" => Ok(SimilarityKind::Pearson),
            "euclidean" => Ok(SimilarityKind::Euclidean),
            "loglikelihood" => Ok(SimilarityKind::LogLikelihood),
            "spearman" => Ok(SimilarityKind::Spearman),
            "tanimoto" => Ok(SimilarityKind::Tanimoto),
            other => Err(format!(
                "unknown similarity `{other}` (expected pearson|euclidean|loglikelihood|spearman|tanimoto)"
            )),
        }
    }
}

impl std::fmt::Display for SimilarityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A sparse rating vector: dimension ids strictly ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRatings {
    entries: Vec<(u32, f64)>,
}

impl SparseRatings {
    pub fn new(mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_unstable_by_key(|&(d, _)| d);
        entries.dedup_by_key(|&mut (d, _)| d);
        SparseRatings { entries }
    }

    pub fn from_ints(entries: &[(u32, i32)]) -> Self {
        Self::new(entries.iter().map(|&(d, r)| (d, r as f64)).collect())
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Computes `kind` between two vectors. `universe_size` is the total number
/// of dimensions and only enters the log-likelihood contingency table; it
/// must be at least the size of the union of non-empty dimensions.
pub fn similarity(
    kind: SimilarityKind,
    x: &SparseRatings,
    y: &SparseRatings,
    universe_size: usize,
) -> Option<f64> {
    similarity_entries(kind, x.entries(), y.entries(), universe_size)
}

/// Slice-level variant used by the recommenders; `x` and `y` must be sorted
/// by dimension id.
pub fn similarity_entries(
    kind: SimilarityKind,
    x: &[(u32, f64)],
    y: &[(u32, f64)],
    universe_size: usize,
) -> Option<f64> {
    match kind {
        SimilarityKind::Pearson => {
            let pairs = co_rated(x, y);
            pearson_of_pairs(&pairs)
        }
        SimilarityKind::Euclidean => {
            let pairs = co_rated(x, y);
            if pairs.is_empty() {
                return None;
            }
            let d2: f64 = pairs.iter().map(|&(a, b)| (a - b) * (a - b)).sum();
            Some(1.0 / (1.0 + d2.sqrt()))
        }
        SimilarityKind::LogLikelihood => {
            let both = co_rated_count(x, y) as u64;
            let nx = x.len() as u64;
            let ny = y.len() as u64;
            let k11 = both;
            let k12 = nx - both;
            let k21 = ny - both;
            let union = nx + ny - both;
            let k22 = (universe_size as u64).saturating_sub(union);
            let g2 = log_likelihood_ratio(k11, k12, k21, k22);
            Some(1.0 - 1.0 / (1.0 + g2))
        }
        SimilarityKind::Spearman => {
            let pairs = co_rated(x, y);
            if pairs.len() < 2 {
                return None;
            }
            let xs: Vec<f64> = pairs.iter().map(|&(a, _)| a).collect();
            let ys: Vec<f64> = pairs.iter().map(|&(_, b)| b).collect();
            let rx = average_ranks(&xs);
            let ry = average_ranks(&ys);
            let ranked: Vec<(f64, f64)> = rx.into_iter().zip(ry).collect();
            pearson_of_pairs(&ranked)
        }
        SimilarityKind::Tanimoto => {
            let both = co_rated_count(x, y);
            let union = x.len() + y.len() - both;
            if union == 0 {
                return None;
            }
            Some(both as f64 / union as f64)
        }
    }
}

/// Value pairs over the co-rated dimensions, in ascending dimension order.
fn co_rated(x: &[(u32, f64)], y: &[(u32, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((x[i].1, y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn co_rated_count(x: &[(u32, f64)], y: &[(u32, f64)]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Centered cosine over value pairs; undefined below two pairs or when
/// either side has zero variance.
fn pearson_of_pairs(pairs: &[(f64, f64)]) -> Option<f64> {
    let n = pairs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|&(a, _)| a).sum::<f64>() / nf;
    let my = pairs.iter().map(|&(_, b)| b).sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for &(a, b) in pairs {
        let dx = a - mx;
        let dy = b - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// Ranks with ties resolved to the mean rank of the tied run (1-based).
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let mean_rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = mean_rank;
        }
        start = end;
    }
    ranks
}

/// Dunning's log-likelihood ratio statistic of a 2x2 contingency table.
pub fn log_likelihood_ratio(k11: u64, k12: u64, k21: u64, k22: u64) -> f64 {
    let total = x_log_x(k11 + k12 + k21 + k22);
    let row_entropy = total - x_log_x(k11 + k12) - x_log_x(k21 + k22);
    let column_entropy = total - x_log_x(k11 + k21) - x_log_x(k12 + k22);
    let matrix_entropy = total - x_log_x(k11) - x_log_x(k12) - x_log_x(k21) - x_log_x(k22);
    if row_entropy + column_entropy < matrix_entropy {
        // round-off
        0.0
    } else {
        2.0 * (row_entropy + column_entropy - matrix_entropy)
    }
}

fn x_log_x(x: u64) -> f64 {
    if x == 0 {
        0.0
    } else {
        (x as f64) * (x as f64).ln()
    }
}
