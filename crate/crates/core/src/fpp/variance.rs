//! Nested Monte Carlo for the variance of `T_n`, split into the part due to
//! the edge times and the part due to the point configuration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{assign_times, passage_time, EdgeTimeDist};
use crate::error::{Error, Result};
use crate::geom::{sample_delaunay, IntensityModel, Point, Window};
use crate::seeds::mix;
use crate::stats::{jackknife, mean, ols, variance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceConfig {
    pub intensity: IntensityModel,
    pub dist: EdgeTimeDist,
    pub n_list: Vec<f64>,
    /// Point configurations per `n`.
    pub outer: usize,
    /// Time assignments per configuration.
    pub inner: usize,
    pub seed: u64,
    /// Margin around `[0, n] x {0}`; `None` uses `6 + n / 4`.
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceRow {
    pub n: f64,
    pub var_total: f64,
    /// Mean over configurations of the variance over time assignments.
    pub var_within: f64,
    /// Variance over configurations of the mean over time assignments,
    /// corrected for the inner sampling noise.
    pub var_between: f64,
    pub se_total: f64,
    pub se_within: f64,
    pub se_between: f64,
    pub mean_t: f64,
}

impl VarianceRow {
    /// `|total - (within + between)| <= 3 se_total`.
    pub fn identity_holds(&self) -> bool {
        (self.var_total - self.var_within - self.var_between).abs() <= 3.0 * self.se_total
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceTable {
    pub rows: Vec<VarianceRow>,
    /// Least-squares slope of `log var_total` on `log n`.
    pub slope: f64,
}

fn total(cells: &[&Vec<f64>]) -> f64 {
    let all: Vec<f64> = cells.iter().flat_map(|c| c.iter().copied()).collect();
    variance(&all)
}

fn within(cells: &[&Vec<f64>]) -> f64 {
    let v: Vec<f64> = cells.iter().map(|c| variance(c)).collect();
    mean(&v)
}

fn between(cells: &[&Vec<f64>]) -> f64 {
    let s = cells[0].len() as f64;
    let means: Vec<f64> = cells.iter().map(|c| mean(c)).collect();
    variance(&means) - within(cells) / s
}

/// Samples of `T_n` for one configuration: `inner` independent time fields.
pub(crate) fn cell(
    intensity: IntensityModel,
    dist: EdgeTimeDist,
    n: f64,
    margin: Option<f64>,
    inner: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let m = margin.unwrap_or(6.0 + n / 4.0);
    let w = Window::new(-m, n + m, -m, m, 0.0)?;
    let tri = sample_delaunay(w, intensity, seed)?;
    let end = Point::new(n, 0.0);
    (0..inner)
        .map(|s| {
            let tg = assign_times(&tri, dist, mix(seed, s as u64 + 1))?;
            Ok(passage_time(&tg, Point::ORIGIN, end).0)
        })
        .collect()
}

/// Splits the variance of the samples in `cells` (one row per configuration,
/// equal lengths) with jackknife standard errors over configurations.
pub(crate) fn decompose(n: f64, cells: &[Vec<f64>]) -> VarianceRow {
    let (var_total, se_total) = jackknife(cells, total);
    let (var_within, se_within) = jackknife(cells, within);
    let (var_between, se_between) = jackknife(cells, between);
    let all: Vec<f64> = cells.iter().flatten().copied().collect();
    VarianceRow {
        n,
        var_total,
        var_within,
        var_between,
        se_total,
        se_within,
        se_between,
        mean_t: mean(&all),
    }
}

pub(crate) fn log_slope(rows: &[VarianceRow]) -> f64 {
    if rows.len() < 2 {
        return f64::NAN;
    }
    let x: Vec<f64> = rows.iter().map(|r| r.n.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.var_total.ln()).collect();
    ols(&x, &y).0
}

pub fn variance_experiment(cfg: &VarianceConfig) -> Result<VarianceTable> {
    if cfg.outer < 30 || cfg.inner < 30 {
        return Err(Error::invalid(
            "outer and inner replica counts must be at least 30",
        ));
    }
    if cfg.n_list.is_empty() || cfg.n_list.iter().any(|&n| !(n > 0.0)) {
        return Err(Error::invalid("n grid must be nonempty and positive"));
    }
    cfg.dist.validate()?;
    cfg.intensity.validate()?;
    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for (k, &n) in cfg.n_list.iter().enumerate() {
        let base = mix(cfg.seed, k as u64);
        let cells: Vec<Vec<f64>> = (0..cfg.outer)
            .into_par_iter()
            .map(|r| {
                cell(
                    cfg.intensity,
                    cfg.dist,
                    n,
                    cfg.margin,
                    cfg.inner,
                    mix(base, r as u64),
                )
            })
            .collect::<Result<_>>()?;
        rows.push(decompose(n, &cells));
    }
    let slope = log_slope(&rows);
    Ok(VarianceTable { rows, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dist: EdgeTimeDist) -> VarianceConfig {
        VarianceConfig {
            intensity: IntensityModel::homogeneous(1.0),
            dist,
            n_list: vec![4.0, 8.0],
            outer: 30,
            inner: 30,
            seed: 5,
            margin: None,
        }
    }

    #[test]
    fn deterministic_times_have_no_within_part() {
        let t = variance_experiment(&cfg(EdgeTimeDist::Deterministic { c: 1.0 })).unwrap();
        for r in &t.rows {
            assert_eq!(r.var_within, 0.0);
            assert!(r.identity_holds(), "{r:?}");
        }
    }

    #[test]
    fn exponential_identity() {
        let t = variance_experiment(&cfg(EdgeTimeDist::Exponential { rate: 1.0 })).unwrap();
        for r in &t.rows {
            assert!(r.var_within > 0.0);
            assert!(r.identity_holds(), "{r:?}");
        }
        assert!(t.slope.is_finite());
    }

    #[test]
    fn rejects_small_budgets() {
        let mut c = cfg(EdgeTimeDist::Exponential { rate: 1.0 });
        c.inner = 10;
        assert!(variance_experiment(&c).is_err());
    }
}
