use thiserror::Error;

/// Errors raised by the geometry, percolation and experiment layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("empty configuration: {0}")]
    EmptyConfiguration(String),

    #[error("duplicate point ({x}, {y})")]
    DuplicatePoint { x: f64, y: f64 },

    #[error("out of window: {0}")]
    OutOfWindow(String),

    #[error("enumeration budget of {budget} exceeded: {hint}")]
    BudgetExceeded { budget: u64, hint: String },

    #[error("pseudo-inverse bracket too small: g(hi) = {g_hi} < u = {u}")]
    BracketTooSmall { u: f64, g_hi: f64 },

    #[error(
        "calibration failed: best bad-probability {achieved} at r = {r} exceeds target {target}"
    )]
    CalibrationFailed { target: f64, achieved: f64, r: f64 },

    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
