use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nondecreasing vertex weight `f`, evaluated at degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightFn {
    /// `f(x) = x`
    Identity,
    /// `f(x) = x^2`
    Square,
    /// `f(x) = log(1 + x) + 1`
    Log,
    /// `f(x) = c`, `c >= 1`
    Constant { c: f64 },
    /// `f(x) = slope * x + intercept`, `slope >= 0`
    Linear { slope: f64, intercept: f64 },
}

impl WeightFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            WeightFn::Identity => x,
            WeightFn::Square => x * x,
            WeightFn::Log => (1.0 + x).ln() + 1.0,
            WeightFn::Constant { c } => c,
            WeightFn::Linear { slope, intercept } => slope * x + intercept,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            WeightFn::Identity => "identity".into(),
            WeightFn::Square => "square".into(),
            WeightFn::Log => "log".into(),
            WeightFn::Constant { c } => format!("constant({c})"),
            WeightFn::Linear { slope, intercept } => format!("linear({slope},{intercept})"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightFn::Constant { c } if !(c >= 1.0 && c.is_finite()) => Err(Error::invalid(
                format!("constant weight must be >= 1, got {c}"),
            )),
            WeightFn::Linear { slope, intercept }
                if !(slope >= 0.0 && slope.is_finite() && intercept.is_finite()) =>
            {
                Err(Error::invalid(
                    "linear weight needs a finite nonnegative slope",
                ))
            }
            _ => Ok(()),
        }
    }
}
