//! Pseudo-inverses and the `g, l, h, q` calculus of a weight function.

use serde::Serialize;

use super::WeightFn;
use crate::error::{Error, Result};

pub const PSEUDO_INVERSE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PseudoInverse {
    pub value: f64,
    /// Set when `u <= g(lo)`, in which case `value = lo`.
    pub clamped: bool,
}

/// `sup { x in [lo, hi] : g(x) < u }` for nondecreasing `g`, by bisection to
/// an absolute tolerance of `1e-10`.
pub fn pseudo_inverse(g: impl Fn(f64) -> f64, u: f64, lo: f64, hi: f64) -> Result<PseudoInverse> {
    if !(lo < hi) {
        return Err(Error::invalid(format!("bad bracket [{lo}, {hi}]")));
    }
    if u <= g(lo) {
        return Ok(PseudoInverse {
            value: lo,
            clamped: true,
        });
    }
    let g_hi = g(hi);
    if u > g_hi {
        return Err(Error::BracketTooSmall { u, g_hi });
    }
    // Invariant: g(a) < u <= g(b).
    let (mut a, mut b) = (lo, hi);
    for _ in 0..400 {
        if b - a <= PSEUDO_INVERSE_TOL {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if g(m) < u {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(PseudoInverse {
        value: 0.5 * (a + b),
        clamped: false,
    })
}

/// Pseudo-inverse on `[lo, inf)`, doubling the upper end until it brackets `u`.
pub fn pseudo_inverse_auto(g: impl Fn(f64) -> f64, u: f64, lo: f64) -> Result<PseudoInverse> {
    let mut hi = (lo + 1.0).max(2.0 * lo.abs()).max(u.abs());
    for _ in 0..2000 {
        if g(hi) >= u {
            return pseudo_inverse(&g, u, lo, hi);
        }
        hi *= 2.0;
        if !hi.is_finite() {
            break;
        }
    }
    Err(Error::BracketTooSmall { u, g_hi: g(hi) })
}

/// Derived functions of a weight `f`: `g(x) = x f(x)`, `l = g^-1`,
/// `h(y) = y l(y)` and `q = h^-1`, all on `[0, inf)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NiceCalc {
    f: WeightFn,
}

impl NiceCalc {
    pub fn new(f: WeightFn) -> Result<Self> {
        f.validate()?;
        Ok(NiceCalc { f })
    }

    pub fn f(&self) -> &WeightFn {
        &self.f
    }

    pub fn g(&self, x: f64) -> f64 {
        x * self.f.eval(x)
    }

    pub fn l(&self, y: f64) -> Result<f64> {
        Ok(pseudo_inverse_auto(|x| self.g(x), y, 0.0)?.value)
    }

    pub fn h(&self, y: f64) -> Result<f64> {
        Ok(y * self.l(y)?)
    }

    pub fn q(&self, u: f64) -> Result<f64> {
        // h is evaluated inside the bisection; errors there cannot occur for
        // valid presets, so they are mapped to +inf to keep the search monotone.
        Ok(pseudo_inverse_auto(|y| self.h(y).unwrap_or(f64::INFINITY), u, 0.0)?.value)
    }

    /// The tail rate `l(q(u))`.
    pub fn rate(&self, u: f64) -> Result<f64> {
        self.l(self.q(u)?)
    }

    /// Closed form of `l(q(u))` where one is known.
    pub fn closed_form(&self, u: f64) -> Option<f64> {
        match self.f {
            WeightFn::Identity => Some(u.cbrt()),
            WeightFn::Square => Some(u.powf(0.25)),
            WeightFn::Constant { c } => Some((u / c).sqrt()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentRow {
    pub u: f64,
    pub rate: f64,
    pub closed_form: Option<f64>,
    pub rel_err: Option<f64>,
}

/// Evaluates `l_f(q_f(u))` on a grid and compares with the closed form.
pub fn nice_exponent_probe(f: WeightFn, u_grid: &[f64]) -> Result<Vec<ExponentRow>> {
    let calc = NiceCalc::new(f)?;
    u_grid
        .iter()
        .map(|&u| {
            let rate = calc.rate(u)?;
            let cf = calc.closed_form(u);
            Ok(ExponentRow {
                u,
                rate,
                closed_form: cf,
                rel_err: cf.map(|c| ((rate - c) / c).abs()),
            })
        })
        .collect()
}

/// Log-spaced grid of `k` points from `10^a` to `10^b`.
pub fn log_grid(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (k.max(2) - 1) as f64))
        .collect()
}
