//! Choice of the renormalization scale `r` from a target bad-box probability.
//!
//! A box is nice when all `18^2` sub-boxes of side `r/18` are occupied and good
//! when all `54^2` sub-boxes of side `r/54` are. Occupancy of a sub-box of area
//! `a` has probability `1 - exp(-lambda a)`, independently across sub-boxes, so
//! the Monte Carlo below draws one uniform per sub-box and a box is marked at
//! scale `r` iff some uniform exceeds `1 - exp(-lambda a(r))`. The same draws
//! serve every `r`, which makes the estimate monotone in `r` and `lambda`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Which;
use crate::seeds::mix;

fn cells(mode: Which) -> f64 {
    match mode {
        Which::Ugly => 18.0,
        Which::Bad => 54.0,
    }
}

/// Exact probability that a box of side `r` is ugly (or bad) under a
/// homogeneous process of intensity `lambda`.
pub fn p_bad_analytic(lambda: f64, r: f64, mode: Which) -> f64 {
    let k = cells(mode);
    let q = -(-lambda * (r / k).powi(2)).exp_m1();
    1.0 - q.powf(k * k)
}

/// Geometric grid `r_0 ratio^k` up to `r_max`.
pub fn r_grid(r0: f64, ratio: f64, r_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = r0;
    while r <= r_max {
        out.push(r);
        r *= ratio;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationConfig {
    pub lambda: f64,
    pub target: f64,
    pub mode: Which,
    pub replicas: usize,
    pub seed: u64,
    /// Increasing scan grid.
    pub grid: Vec<f64>,
}

impl CalibrationConfig {
    pub fn new(lambda: f64, target: f64, mode: Which) -> Self {
        CalibrationConfig {
            lambda,
            target,
            mode,
            replicas: 4000,
            seed: 0,
            grid: r_grid(0.25, 1.02, 4000.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub r: f64,
    pub p_hat: f64,
    pub se: f64,
    pub replicas: usize,
}

/// Largest sub-box uniform of each simulated box.
fn maxima(k: f64, replicas: usize, seed: u64) -> Vec<f64> {
    let n = (k * k) as usize;
    (0..replicas)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, j as u64));
            (0..n).map(|_| rng.random::<f64>()).fold(0.0, f64::max)
        })
        .collect()
}

/// Empirical bad probability and its binomial standard error at scale `r`.
pub fn p_bad_empirical(lambda: f64, r: f64, mode: Which, replicas: usize, seed: u64) -> (f64, f64) {
    let k = cells(mode);
    estimate(&maxima(k, replicas, seed), lambda, r, k)
}

fn estimate(max: &[f64], lambda: f64, r: f64, k: f64) -> (f64, f64) {
    let q = -(-lambda * (r / k).powi(2)).exp_m1();
    let hits = max.iter().filter(|&&m| m >= q).count();
    let n = max.len() as f64;
    let p = hits as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

/// Smallest grid `r` whose estimate satisfies `p + 3 se <= target`.
pub fn calibrate_r(cfg: &CalibrationConfig) -> Result<Calibration> {
    if !(cfg.target > 0.0 && cfg.target < 0.5) {
        return Err(Error::config("target", "must lie in (0, 0.5)"));
    }
    if !(cfg.lambda > 0.0 && cfg.lambda.is_finite()) {
        return Err(Error::config("lambda", "must be positive"));
    }
    if cfg.replicas < 2 {
        return Err(Error::config("replicas", "must be at least 2"));
    }
    if cfg.grid.is_empty() || cfg.grid.windows(2).any(|w| !(w[0] < w[1])) || !(cfg.grid[0] > 0.0) {
        return Err(Error::config("grid", "must be positive and increasing"));
    }
    let k = cells(cfg.mode);
    let max = maxima(k, cfg.replicas, cfg.seed);
    let mut best = (f64::INFINITY, cfg.grid[0]);
    for &r in &cfg.grid {
        let (p, se) = estimate(&max, cfg.lambda, r, k);
        if p + 3.0 * se <= cfg.target {
            return Ok(Calibration {
                r,
                p_hat: p,
                se,
                replicas: cfg.replicas,
            });
        }
        if p < best.0 {
            best = (p, r);
        }
    }
    Err(Error::CalibrationFailed {
        target: cfg.target,
        achieved: best.0,
        r: best.1,
    })
}
