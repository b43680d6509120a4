//! Risk reports: one JSON document per run plus one CSV row appended to a
//! campaign file.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::HarnessError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiskReport {
    pub experiment: String,
    /// Echo of the configuration the run actually used.
    pub config: ExperimentConfig,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    /// Closed-form reference value, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory: Option<f64>,
    pub reps: u64,
    pub seed: u64,
    pub elapsed_ms: u64,
    /// Experiment-specific scalars and tables.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl RiskReport {
    pub fn new(
        config: &ExperimentConfig,
        mc_estimate: f64,
        mc_stderr: f64,
        theory: Option<f64>,
    ) -> Self {
        Self {
            experiment: config.experiment.clone(),
            config: config.clone(),
            mc_estimate,
            mc_stderr,
            theory,
            reps: config.reps,
            seed: config.seed,
            elapsed_ms: 0,
            extra: BTreeMap::new(),
        }
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed_ms = elapsed.as_millis() as u64;
        self
    }

    pub fn insert_extra(&mut self, key: &str, value: impl Serialize) {
        self.extra.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable extra"),
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// Write the JSON document to `out`, or stdout when absent.
    pub fn write(&self) -> Result<(), HarnessError> {
        let text = self.to_json();
        match &self.config.out {
            Some(path) => {
                if let Some(dir) = path.parent() {
                    if !dir.as_os_str().is_empty() {
                        std::fs::create_dir_all(dir)?;
                    }
                }
                std::fs::write(path, text + "\n")?;
            }
            None => println!("{text}"),
        }
        Ok(())
    }

    /// Append the summary row to the campaign CSV, writing the header when
    /// the file is new.
    pub fn append_campaign(&self, path: &Path) -> Result<(), HarnessError> {
        let is_new = !path.exists();
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        if is_new {
            writeln!(
                file,
                "experiment,d,r,n,reps,seed,mc_estimate,mc_stderr,theory,elapsed_ms"
            )?;
        }
        let theory = self.theory.map(|t| format!("{t:.12e}")).unwrap_or_default();
        writeln!(
            file,
            "{},{},{},{},{},{},{:.12e},{:.12e},{},{}",
            self.experiment,
            self.config.d,
            self.config.r,
            self.config.n,
            self.reps,
            self.seed,
            self.mc_estimate,
            self.mc_stderr,
            theory,
            self.elapsed_ms
        )?;
        Ok(())
    }
}

/// Mean and standard error of a sample.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr_basics() {
        let (m, se) = mean_and_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-12);
        // sample variance 5/3, se = sqrt(5/12)
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
        let (m1, se1) = mean_and_stderr(&[7.0]);
        assert_eq!((m1, se1), (7.0, 0.0));
    }
}
