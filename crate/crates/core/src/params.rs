//! Parameters of the bipartite growth model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_HOLDOUT_STEPS: u32 = 100;

pub fn default_rating_values() -> Vec<i32> {
    (0..=5).collect()
}

/// The eight growth-model parameters plus the RNG seed and artifact knobs.
///
/// * `m` – initial loose user–item edges (also the initial count of each modality)
/// * `iterations` – growth iterations (`T`)
/// * `p` – probability that a new node is a user
/// * `u` / `v` – edges created by each new user / item
/// * `alpha` / `beta` – preferential-attachment probability for new-user /
///   new-item edges
/// * `b` – fraction of preferential edges re-routed through bouncing
/// * `holdout_steps` – extra iterations whose edges form the update batch
/// * `rating_values` – the ordered set edges draw integer ratings from
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub m: u32,
    #[serde(rename = "T")]
    pub iterations: u32,
    pub p: f64,
    pub u: u32,
    pub v: u32,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub seed: u64,
    #[serde(default = "default_holdout")]
    pub holdout_steps: u32,
    #[serde(default = "default_rating_values")]
    pub rating_values: Vec<i32>,
}

fn default_holdout() -> u32 {
    DEFAULT_HOLDOUT_STEPS
}

impl GeneratorParams {
    /// A convenience constructor with `holdout_steps = 100` and ratings `{0..5}`.
    pub fn new(m: u32, iterations: u32, p: f64, u: u32, v: u32, alpha: f64, beta: f64, b: f64, seed: u64) -> Self {
        GeneratorParams {
            m,
            iterations,
            p,
            u,
            v,
            alpha,
            beta,
            b,
            seed,
            holdout_steps: DEFAULT_HOLDOUT_STEPS,
            rating_values: default_rating_values(),
        }
    }

    pub fn with_holdout(mut self, holdout_steps: u32) -> Self {
        self.holdout_steps = holdout_steps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::invalid("m", "must be at least 1"));
        }
        if self.u < 1 {
            return Err(Error::invalid("u", "must be at least 1"));
        }
        if self.v < 1 {
            return Err(Error::invalid("v", "must be at least 1"));
        }
        check_probability("p", self.p)?;
        check_probability("alpha", self.alpha)?;
        check_probability("beta", self.beta)?;
        check_probability("b", self.b)?;
        if self.rating_values.is_empty() {
            return Err(Error::invalid("rating_values", "must not be empty"));
        }
        if self.rating_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "rating_values",
                "must be strictly ascending without duplicates",
            ));
        }
        Ok(())
    }

    /// Expected edges added per iteration, `pu + (1-p)v`.
    pub fn eta(&self) -> f64 {
        self.p * self.u as f64 + (1.0 - self.p) * self.v as f64
    }

    /// One-line `key=value` form used in graph file headers.
    pub fn header_string(&self) -> String {
        let ratings: Vec<String> = self.rating_values.iter().map(|r| r.to_string()).collect();
        format!(
            "m={} T={} p={} u={} v={} alpha={} beta={} b={} seed={} holdout_steps={} rating_values={}",
            self.m,
            self.iterations,
            self.p,
            self.u,
            self.v,
            self.alpha,
            self.beta,
            self.b,
            self.seed,
            self.holdout_steps,
            ratings.join(",")
        )
    }

    /// Parses the `key=value` form emitted by [`header_string`](Self::header_string).
    pub fn from_header_string(s: &str) -> Result<Self> {
        let mut params = GeneratorParams::new(1, 0, 0.0, 1, 1, 0.0, 0.0, 0.0, 0);
        let mut seen_m = false;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::invalid("params", format!("malformed token `{token}`")))?;
            fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
                value
                    .parse()
                    .map_err(|_| Error::invalid("params", format!("malformed value for `{key}`")))
            }
            match key {
                "m" => {
                    params.m = parsed(key, value)?;
                    seen_m = true;
                }
                "T" => params.iterations = parsed(key, value)?,
                "p" => params.p = parsed(key, value)?,
                "u" => params.u = parsed(key, value)?,
                "v" => params.v = parsed(key, value)?,
                "alpha" => params.alpha = parsed(key, value)?,
                "beta" => params.beta = parsed(key, value)?,
                "b" => params.b = parsed(key, value)?,
                "seed" => params.seed = parsed(key, value)?,
                "holdout_steps" => params.holdout_steps = parsed(key, value)?,
                "rating_values" => {
                    let mut values = Vec::new();
                    for part in value.split(',') {
                        values.push(part.trim().parse().map_err(|_| {
                            Error::invalid("rating_values", format!("malformed entry `{part}`"))
                        })?);
                    }
                    params.rating_values = values;
                }
                other => {
                    return Err(Error::invalid("params", format!("unknown key `{other}`")));
                }
            }
        }
        if !seen_m {
            return Err(Error::invalid("params", "missing key `m`"));
        }
        params.validate()?;
        Ok(params)
    }
}

fn check_probability(field: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::invalid(
            field,
            format!("probability must lie in [0, 1], got {value}"),
        ));
    }
    Ok(())
}
