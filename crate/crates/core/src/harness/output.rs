//! `raw.csv`, `summary.csv` and `summary.json`.

use std::fmt::Write;
use std::path::Path;

use super::runner::RunOutput;
use crate::error::{Error, Result};

/// One line per metric value: `replica,seed,metric,key,method,value`.
pub fn raw_csv(out: &RunOutput) -> String {
    let mut s = String::from("replica,seed,metric,key,method,value\n");
    for r in &out.replicas {
        for m in &r.metrics {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.index, r.seed, m.name, m.key, m.method, m.value
            );
        }
    }
    s
}

pub fn summary_csv(out: &RunOutput) -> String {
    let mut s = String::from("metric,key,method,mean,se,count\n");
    for r in &out.summary {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.metric, r.key, r.method, r.mean, r.se, r.count
        );
    }
    s
}

/// Config, scale and summary rows. Non-finite numbers become `null`. The
/// thread count is left out so that the file does not depend on it.
pub fn summary_json(out: &RunOutput) -> Result<String> {
    let mut config = serde_json::to_value(&out.config)
        .map_err(|e| Error::Internal(format!("json encoding: {e}")))?;
    if let Some(m) = config.as_object_mut() {
        m.remove("width");
    }
    let v = serde_json::json!({
        "experiment": out.config.experiment,
        "config": config,
        "r": out.r,
        "summary": out.summary,
    });
    serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(format!("json encoding: {e}")))
}

/// Writes the three files into `dir`, creating it if needed.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("raw.csv"), raw_csv(out))?;
    std::fs::write(dir.join("summary.csv"), summary_csv(out))?;
    std::fs::write(dir.join("summary.json"), summary_json(out)? + "\n")?;
    Ok(())
}
