//! Experiment configuration, read from TOML or JSON.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpp::EdgeTimeDist;
use crate::geom::{IntensityModel, Window};
use crate::greedy::WeightFn;
use crate::grid::Which;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    FnScaling,
    Kappa,
    GammaArea,
    FppVariance,
    SegmentWalk,
    ClusterTail,
    GoodBox,
    PathDensity,
    Stabbing,
    Confinement,
    Reimer,
    CoverAnimal,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 12] = [
        ExperimentName::FnScaling,
        ExperimentName::Kappa,
        ExperimentName::GammaArea,
        ExperimentName::FppVariance,
        ExperimentName::SegmentWalk,
        ExperimentName::ClusterTail,
        ExperimentName::GoodBox,
        ExperimentName::PathDensity,
        ExperimentName::Stabbing,
        ExperimentName::Confinement,
        ExperimentName::Reimer,
        ExperimentName::CoverAnimal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::FnScaling => "fn-scaling",
            ExperimentName::Kappa => "kappa",
            ExperimentName::GammaArea => "gamma-area",
            ExperimentName::FppVariance => "fpp-variance",
            ExperimentName::SegmentWalk => "segment-walk",
            ExperimentName::ClusterTail => "cluster-tail",
            ExperimentName::GoodBox => "good-box",
            ExperimentName::PathDensity => "path-density",
            ExperimentName::Stabbing => "stabbing",
            ExperimentName::Confinement => "confinement",
            ExperimentName::Reimer => "reimer",
            ExperimentName::CoverAnimal => "cover-animal",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::config("experiment", format!("unknown experiment `{s}`")))
    }
}

/// Experiment-specific settings. Unset fields take per-experiment defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_list: Option<Vec<f64>>,
    /// Open-bond probability, or bad-site probability for `reimer`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Outer-replica count is `replicas`; this is the per-replica inner count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beam_width: Option<usize>,
    /// Largest `n` solved exactly; beam search above.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_max_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Which>,
    /// Target bad probability when `r` is calibrated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites: Option<Vec<[i64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightFn>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<EdgeTimeDist>,
}

fn default_width() -> usize {
    1
}

fn default_intensity() -> IntensityModel {
    IntensityModel::homogeneous(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    /// Base seed; at most `2^63 - 1` so that it fits a TOML integer.
    pub seed: u64,
    pub replicas: usize,
    #[serde(default = "default_width")]
    pub width: usize,
    /// Renormalization scale; calibrated when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub window: Window,
    #[serde(default = "default_intensity")]
    pub intensity: IntensityModel,
    #[serde(default)]
    pub params: Params,
}

fn field<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(name, other.to_string()),
    })
}

fn nonempty<T>(name: &str, v: &Option<Vec<T>>) -> Result<()> {
    match v {
        Some(v) if v.is_empty() => Err(Error::config(name, "grid must be nonempty")),
        _ => Ok(()),
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => {
            Err(Error::config(name, format!("must be positive, got {x}")))
        }
        _ => Ok(()),
    }
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentName, window: Window, replicas: usize, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            seed,
            replicas,
            width: 1,
            r: None,
            window,
            intensity: default_intensity(),
            params: Params::default(),
        }
    }

    /// Checks everything that does not depend on the experiment's defaults.
    pub fn validate(&self) -> Result<()> {
        if self.seed > i64::MAX as u64 {
            return Err(Error::config("seed", "must be at most 2^63 - 1"));
        }
        if self.replicas < 1 {
            return Err(Error::config("replicas", "must be at least 1"));
        }
        if self.width < 1 {
            return Err(Error::config("width", "must be at least 1"));
        }
        positive("r", self.r)?;
        field("window", self.window.validate())?;
        field("intensity", self.intensity.validate())?;
        let p = &self.params;
        nonempty("params.n_list", &p.n_list)?;
        nonempty("params.r_list", &p.r_list)?;
        nonempty("params.m_list", &p.m_list)?;
        nonempty("params.a_list", &p.a_list)?;
        nonempty("params.l_list", &p.l_list)?;
        nonempty("params.sites", &p.sites)?;
        if let Some(l) = &p.l_list {
            for &x in l {
                positive("params.l_list", Some(x))?;
            }
        }
        if let Some(a) = &p.a_list {
            if a.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::config(
                    "params.a_list",
                    "densities must lie in [0, 1]",
                ));
            }
        }
        if let Some(x) = p.p {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::config(
                    "params.p",
                    format!("{x} is not a probability"),
                ));
            }
        }
        if let Some(t) = p.target {
            if !(t > 0.0 && t < 0.5) {
                return Err(Error::config("params.target", "must lie in (0, 0.5)"));
            }
        }
        for (name, v) in [
            ("params.inner", p.inner),
            ("params.samples", p.samples),
            ("params.beam_width", p.beam_width),
        ] {
            if v == Some(0) {
                return Err(Error::config(name, "must be at least 1"));
            }
        }
        if let Some(g) = p.grid {
            if g[0] == 0 || g[1] == 0 {
                return Err(Error::config("params.grid", "dimensions must be positive"));
            }
        }
        if let Some(w) = &p.weight {
            field("params.weight", w.validate())?;
        }
        if let Some(d) = &p.dist {
            field("params.dist", d.validate())?;
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            Error::config(guess_field(&msg, text, e.span()), msg)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(guess_field(&e.to_string(), "", None), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("toml encoding: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("json encoding: {e}")))
    }

    /// Reads `.json` files as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            ExperimentConfig::from_json(&text)
        } else {
            ExperimentConfig::from_toml(&text)
        }
    }
}

/// Best-effort field name for a parse error: a backquoted name in the
/// message, else the key on the offending line.
fn guess_field(msg: &str, text: &str, span: Option<std::ops::Range<usize>>) -> String {
    if let Some(a) = msg.find('`') {
        if let Some(b) = msg[a + 1..].find('`') {
            return msg[a + 1..a + 1 + b].to_string();
        }
    }
    if let Some(span) = span {
        let start = text[..span.start.min(text.len())]
            .rfind('\n')
            .map_or(0, |i| i + 1);
        let line = text[start..].lines().next().unwrap_or("");
        if let Some((key, _)) = line.split_once('=') {
            return key.trim().to_string();
        }
    }
    "config".to_string()
}
