//! Edge passage-time laws and timed Delaunay graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{DelaunayGraph, Triangulation};
use crate::seeds::{edge_key, unit_f64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EdgeTimeDist {
    Exponential {
        rate: f64,
    },
    Uniform {
        a: f64,
        b: f64,
    },
    Deterministic {
        c: f64,
    },
    /// Mass `p` at 0 and `1 - p` at 1.
    BernoulliMix {
        p: f64,
    },
}

impl EdgeTimeDist {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EdgeTimeDist::Exponential { rate } => rate.is_finite() && rate > 0.0,
            EdgeTimeDist::Uniform { a, b } => a.is_finite() && b.is_finite() && 0.0 <= a && a < b,
            EdgeTimeDist::Deterministic { c } => c.is_finite() && c >= 0.0,
            EdgeTimeDist::BernoulliMix { p } => (0.0..=1.0).contains(&p),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("bad edge-time law {self:?}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EdgeTimeDist::Exponential { .. } => "exponential",
            EdgeTimeDist::Uniform { .. } => "uniform",
            EdgeTimeDist::Deterministic { .. } => "deterministic",
            EdgeTimeDist::BernoulliMix { .. } => "bernoulli-mix",
        }
    }

    /// First moment.
    pub fn m1(&self) -> f64 {
        match *self {
            EdgeTimeDist::Exponential { rate } => 1.0 / rate,
            EdgeTimeDist::Uniform { a, b } => (a + b) / 2.0,
            EdgeTimeDist::Deterministic { c } => c,
            EdgeTimeDist::BernoulliMix { p } => 1.0 - p,
        }
    }

    /// Second moment.
    pub fn m2(&self) -> f64 {
        match *self {
            EdgeTimeDist::Exponential { rate } => 2.0 / (rate * rate),
            EdgeTimeDist::Uniform { a, b } => (a * a + a * b + b * b) / 3.0,
            EdgeTimeDist::Deterministic { c } => c * c,
            EdgeTimeDist::BernoulliMix { p } => 1.0 - p,
        }
    }

    /// Mass at zero.
    pub fn atom_at_zero(&self) -> f64 {
        match *self {
            EdgeTimeDist::Deterministic { c: 0.0 } => 1.0,
            EdgeTimeDist::BernoulliMix { p } => p,
            _ => 0.0,
        }
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            EdgeTimeDist::Exponential { rate } => -(-u).ln_1p() / rate,
            EdgeTimeDist::Uniform { a, b } => a + (b - a) * u,
            EdgeTimeDist::Deterministic { c } => c,
            EdgeTimeDist::BernoulliMix { p } => {
                if u < p {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

/// Delaunay graph with a passage time on every edge.
///
/// `times[v][k]` belongs to the edge to `graph.neighbors(v)[k]`. Each time is
/// a function of the seed and the edge's endpoint coordinates only.
#[derive(Clone, Debug)]
pub struct TimedGraph {
    tri: Triangulation,
    dist: EdgeTimeDist,
    seed: u64,
    times: Vec<Vec<f64>>,
}

pub(crate) fn edge_times(tri: &Triangulation, dist: &EdgeTimeDist, seed: u64) -> Vec<Vec<f64>> {
    let g = tri.graph();
    (0..g.len())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&u| dist.quantile(unit_f64(edge_key(seed, tri.point(v), tri.point(u)))))
                .collect()
        })
        .collect()
}

pub fn assign_times(tri: &Triangulation, dist: EdgeTimeDist, seed: u64) -> Result<TimedGraph> {
    dist.validate()?;
    Ok(TimedGraph {
        times: edge_times(tri, &dist, seed),
        tri: tri.clone(),
        dist,
        seed,
    })
}

impl TimedGraph {
    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn graph(&self) -> &DelaunayGraph {
        self.tri.graph()
    }

    pub fn dist(&self) -> &EdgeTimeDist {
        &self.dist
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn times(&self) -> &[Vec<f64>] {
        &self.times
    }

    /// Time of edge `(u, v)`, if it is an edge.
    pub fn time(&self, u: usize, v: usize) -> Option<f64> {
        let k = self.graph().neighbors(u).binary_search(&v).ok()?;
        Some(self.times[u][k])
    }

    /// Same graph with every time `t` replaced by `f(t)`.
    pub fn map_times(&self, f: impl Fn(f64) -> f64) -> TimedGraph {
        let mut out = self.clone();
        for row in &mut out.times {
            for t in row {
                *t = f(*t);
            }
        }
        out
    }

    /// Rebuilds times on another triangulation with the same law and seed.
    pub fn retimed(&self, tri: Triangulation) -> TimedGraph {
        TimedGraph {
            times: edge_times(&tri, &self.dist, self.seed),
            tri,
            dist: self.dist,
            seed: self.seed,
        }
    }
}
