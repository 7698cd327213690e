//! Configured, seeded and parallel runs of the experiments, with their
//! outputs.

mod calibrate;
mod config;
mod experiments;
mod output;
mod runner;
mod svg;
#[cfg(test)]
mod tests;

pub use calibrate::{
    calibrate_r, p_bad_analytic, p_bad_empirical, r_grid, Calibration, CalibrationConfig,
};
pub use config::{ExperimentConfig, ExperimentName, Params};
pub use output::{raw_csv, summary_csv, summary_json, write_outputs};
pub use runner::{run_experiment, summarize, Method, Metric, ReplicaResult, RunOutput, SummaryRow};
pub use svg::{render_svg, Overlay};
