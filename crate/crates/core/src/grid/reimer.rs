//! Monte Carlo and exact evaluation of the disjoint-cluster product bound
//! `E prod_i f(|C_i|) <= prod_x E f(|Cl(x)|)` for site percolation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Site;
use crate::error::{Error, Result};
use crate::greedy::WeightFn;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReimerEstimate {
    pub lhs: f64,
    pub lhs_se: f64,
    pub rhs: f64,
    pub rhs_se: f64,
    pub replicas: usize,
}

impl ReimerEstimate {
    /// `lhs <= rhs + 3 SE` with the two standard errors combined.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 3.0 * self.lhs_se.hypot(self.rhs_se) + 1e-12 * self.rhs.abs()
    }
}

/// Labels each bad site with a cluster id (L-infinity adjacency); good sites get `usize::MAX`.
fn label(w: usize, h: usize, bad: &[bool], comp: &mut [usize], size: &mut Vec<usize>) {
    size.clear();
    comp.fill(usize::MAX);
    let mut stack = Vec::new();
    for s in 0..w * h {
        if !bad[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = size.len();
        size.push(0);
        comp[s] = id;
        stack.push(s);
        while let Some(v) = stack.pop() {
            size[id] += 1;
            let (x, y) = ((v % w) as i64, (v / w) as i64);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let u = ny as usize * w + nx as usize;
                    if bad[u] && comp[u] == usize::MAX {
                        comp[u] = id;
                        stack.push(u);
                    }
                }
            }
        }
    }
}

struct Setup {
    w: usize,
    h: usize,
    lambda: Vec<usize>,
}

fn setup(dims: (usize, usize), p: f64, f: &WeightFn, lambda: &[Site]) -> Result<Setup> {
    let (w, h) = dims;
    if w == 0 || h == 0 {
        return Err(Error::invalid("grid dimensions must be positive"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "bernoulli parameter {p} outside [0, 1]"
        )));
    }
    f.validate()?;
    if f.eval(0.0) < 1.0 {
        return Err(Error::invalid(format!(
            "weight {} must be >= 1 from 0 on",
            f.name()
        )));
    }
    let mut idx = Vec::new();
    for &(x, y) in lambda {
        if x < 0 || y < 0 || x as usize >= w || y as usize >= h {
            return Err(Error::invalid(format!("site ({x}, {y}) outside the grid")));
        }
        let s = y as usize * w + x as usize;
        if !idx.contains(&s) {
            idx.push(s);
        }
    }
    if idx.is_empty() {
        return Err(Error::invalid("empty site set"));
    }
    Ok(Setup { w, h, lambda: idx })
}

/// Per-configuration values: the left-hand product and `f(|Cl(x)|)` per site.
fn evaluate(
    s: &Setup,
    f: &WeightFn,
    bad: &[bool],
    comp: &mut [usize],
    size: &mut Vec<usize>,
    used: &mut Vec<usize>,
    per_site: &mut [f64],
) -> f64 {
    label(s.w, s.h, bad, comp, size);
    used.clear();
    let mut prod = 1.0;
    for (k, &x) in s.lambda.iter().enumerate() {
        let c = comp[x];
        let n = if c == usize::MAX { 0 } else { size[c] };
        per_site[k] = f.eval(n as f64);
        if c != usize::MAX && !used.contains(&c) {
            used.push(c);
            prod *= f.eval(n as f64);
        } else {
            prod *= f.eval(0.0);
        }
    }
    prod
}

/// Monte Carlo estimate of both sides on a `dims` grid where each site is bad
/// with probability `p`.
pub fn reimer_probe(
    dims: (usize, usize),
    p: f64,
    f: &WeightFn,
    lambda: &[Site],
    replicas: usize,
    seed: u64,
) -> Result<ReimerEstimate> {
    let s = setup(dims, p, f, lambda)?;
    if replicas < 2 {
        return Err(Error::invalid("need at least 2 replicas"));
    }
    let n = s.w * s.h;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = vec![false; n];
    let mut comp = vec![0; n];
    let (mut size, mut used) = (Vec::new(), Vec::new());
    let k = s.lambda.len();
    let mut lhs = Vec::with_capacity(replicas);
    let mut sites = vec![vec![0.0; k]; replicas];
    for row in sites.iter_mut() {
        for b in bad.iter_mut() {
            *b = rng.random::<f64>() < p;
        }
        lhs.push(evaluate(&s, f, &bad, &mut comp, &mut size, &mut used, row));
    }
    let r = replicas as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var =
        |v: &[f64], m: f64| v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0);
    let lm = mean(&lhs);
    let means: Vec<f64> = (0..k)
        .map(|j| sites.iter().map(|row| row[j]).sum::<f64>() / r)
        .collect();
    let rhs: f64 = means.iter().product();
    // Delta method on log(rhs), keeping the covariance between sites.
    let g: Vec<f64> = sites
        .iter()
        .map(|row| row.iter().zip(&means).map(|(x, m)| x / m).sum())
        .collect();
    let gm = mean(&g);
    Ok(ReimerEstimate {
        lhs: lm,
        lhs_se: (var(&lhs, lm) / r).sqrt(),
        rhs,
        rhs_se: rhs * (var(&g, gm) / r).sqrt(),
        replicas,
    })
}

/// Exact values of both sides by enumerating all `2^(w h)` configurations.
pub fn reimer_exact(
    dims: (usize, usize),
    p: f64,
    f: &WeightFn,
    lambda: &[Site],
) -> Result<(f64, f64)> {
    let s = setup(dims, p, f, lambda)?;
    let n = s.w * s.h;
    if n > 24 {
        return Err(Error::BudgetExceeded {
            budget: 1 << 24,
            hint: format!("exact enumeration over {n} sites; use the Monte Carlo probe"),
        });
    }
    let mut bad = vec![false; n];
    let mut comp = vec![0; n];
    let (mut size, mut used) = (Vec::new(), Vec::new());
    let k = s.lambda.len();
    let mut row = vec![0.0; k];
    let mut lhs = 0.0;
    let mut site_means = vec![0.0; k];
    for mask in 0u32..(1u32 << n) {
        let ones = mask.count_ones() as i32;
        let weight = p.powi(ones) * (1.0 - p).powi(n as i32 - ones);
        if weight == 0.0 {
            continue;
        }
        for (i, b) in bad.iter_mut().enumerate() {
            *b = mask >> i & 1 == 1;
        }
        lhs += weight * evaluate(&s, f, &bad, &mut comp, &mut size, &mut used, &mut row);
        for j in 0..k {
            site_means[j] += weight * row[j];
        }
    }
    Ok((lhs, site_means.iter().product()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_one() -> WeightFn {
        WeightFn::Linear {
            slope: 1.0,
            intercept: 1.0,
        }
    }

    #[test]
    fn p_zero_is_one() {
        let lam = [(0, 0), (1, 1), (2, 2)];
        let e = reimer_probe((4, 4), 0.0, &plus_one(), &lam, 10, 1).unwrap();
        assert_eq!((e.lhs, e.rhs), (1.0, 1.0));
        let (l, r) = reimer_exact((4, 4), 0.0, &plus_one(), &lam).unwrap();
        assert_eq!((l, r), (1.0, 1.0));
    }

    #[test]
    fn p_one_single_cluster() {
        let lam: Vec<Site> = (3..6).flat_map(|x| (3..6).map(move |y| (x, y))).collect();
        let e = reimer_probe((9, 9), 1.0, &plus_one(), &lam, 10, 1).unwrap();
        assert_eq!(e.lhs, 82.0);
        assert_eq!(e.rhs, 82f64.powi(9));
        assert!(e.holds());
    }

    #[test]
    fn exact_matches_monte_carlo() {
        let lam = [(0, 0), (1, 2), (3, 3), (2, 0)];
        let (l, r) = reimer_exact((4, 4), 0.3, &plus_one(), &lam).unwrap();
        assert!(l <= r);
        let e = reimer_probe((4, 4), 0.3, &plus_one(), &lam, 40_000, 7).unwrap();
        assert!((e.lhs - l).abs() < 4.0 * e.lhs_se, "{} vs {l}", e.lhs);
        assert!((e.rhs - r).abs() < 4.0 * e.rhs_se, "{} vs {r}", e.rhs);
    }

    #[test]
    fn rejects_weights_below_one() {
        assert!(reimer_probe((3, 3), 0.5, &WeightFn::Identity, &[(0, 0)], 10, 0).is_err());
    }
}
