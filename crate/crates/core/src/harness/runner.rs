//! Seeded replica execution and aggregation.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::experiments::{self, Prepared};
use crate::error::{Error, Result};
use crate::seeds::replica_seed;
use crate::stats::mean_se;

/// How a value was obtained. Lower bounds and estimates are never pooled
/// with exact values: they form separate summary rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Beam,
    /// Unbiased Monte Carlo estimate.
    Mc,
    McLowerBound,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Beam => "beam",
            Method::Mc => "mc",
            Method::McLowerBound => "mc-lower-bound",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    /// Grid point, e.g. `n=8`; empty for ungridded metrics.
    pub key: String,
    pub method: Method,
    pub value: f64,
}

impl Metric {
    pub fn new(name: &str, key: impl Into<String>, method: Method, value: f64) -> Metric {
        Metric {
            name: name.to_string(),
            key: key.into(),
            method,
            value,
        }
    }

    pub(crate) fn flag(name: &str, key: impl Into<String>, b: bool) -> Metric {
        Metric::new(name, key, Method::Exact, if b { 1.0 } else { 0.0 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicaResult {
    pub index: usize,
    pub seed: u64,
    pub metrics: Vec<Metric>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub metric: String,
    pub key: String,
    pub method: Method,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(count)`, or a jackknife error for
    /// derived rows.
    pub se: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    /// Scale actually used, when the experiment has one.
    pub r: Option<f64>,
    pub replicas: Vec<ReplicaResult>,
    pub summary: Vec<SummaryRow>,
}

impl RunOutput {
    pub fn row(&self, metric: &str, key: &str) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|r| r.metric == metric && r.key == key)
    }

    pub fn rows(&self, metric: &str) -> Vec<&SummaryRow> {
        self.summary.iter().filter(|r| r.metric == metric).collect()
    }
}

/// Mean and standard error per `(metric, key, method)`, in order of first
/// appearance when replicas are scanned by index.
pub fn summarize(replicas: &[ReplicaResult]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, String, Method)> = Vec::new();
    let mut values: HashMap<(String, String, Method), Vec<f64>> = HashMap::new();
    for rep in replicas {
        for m in &rep.metrics {
            let k = (m.name.clone(), m.key.clone(), m.method);
            let v = values.entry(k.clone()).or_default();
            if v.is_empty() {
                order.push(k);
            }
            v.push(m.value);
        }
    }
    order
        .into_iter()
        .map(|k| {
            let s = mean_se(&values[&k]);
            SummaryRow {
                metric: k.0,
                key: k.1,
                method: k.2,
                mean: s.mean,
                se: s.se,
                count: s.count,
            }
        })
        .collect()
}

fn tag_replica(e: Error, index: usize) -> Error {
    match e {
        Error::BudgetExceeded { budget, hint } => Error::BudgetExceeded {
            budget,
            hint: format!("replica {index}: {hint}"),
        },
        other => other,
    }
}

/// Runs every replica on a pool of `cfg.width` threads. Replica `k` uses the
/// seed `replica_seed(cfg.seed, experiment, k)` and results are kept in index
/// order, so the output does not depend on the width.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.width)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| {
        let prepared: Prepared = experiments::prepare(cfg)?;
        let name = cfg.experiment.as_str();
        let replicas: Vec<ReplicaResult> = (0..cfg.replicas)
            .into_par_iter()
            .map(|index| {
                let seed = replica_seed(cfg.seed, name, index as u64);
                let metrics =
                    experiments::replica(&prepared, seed).map_err(|e| tag_replica(e, index))?;
                Ok(ReplicaResult {
                    index,
                    seed,
                    metrics,
                })
            })
            .collect::<Result<_>>()?;
        let mut summary = summarize(&replicas);
        summary.extend(experiments::derived(&prepared, &replicas));
        Ok(RunOutput {
            config: cfg.clone(),
            r: prepared.r,
            replicas,
            summary,
        })
    })
}
