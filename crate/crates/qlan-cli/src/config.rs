//! JSON experiment configuration. Unknown keys are rejected so campaign
//! files stay honest about what a run actually used.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Prior variances used by the Bayes-risk and functional experiments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PriorVars {
    /// Per-mode Gaussian prior variance σ₀².
    pub sigma0_2: f64,
    /// Prior variance of the one-dimensional shift in functional runs.
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Which experiment this config drives; must match the subcommand.
    pub experiment: String,
    pub d: usize,
    pub r: usize,
    /// Center spectrum, strictly decreasing, positive, summing to one.
    pub mu: Vec<f64>,
    /// Total number of copies per replicate.
    pub n: u64,
    /// Optional grid of `n` values; the experiment is repeated per entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<u64>>,
    /// Monte Carlo replicates.
    pub reps: u64,
    /// Spectral threshold scale ε (tomography and two-stage runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Sample-split exponent: the first stage gets `⌊n^δ⌋` copies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_vars: Option<PriorVars>,
    pub seed: u64,
    /// Where the JSON report goes; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Campaign CSV the run appends one row to; defaults to
    /// `campaign.csv` next to `out` (or in the working directory).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub campaign: Option<PathBuf>,
    /// Radius of the ball the true local parameter is drawn from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_radius: Option<f64>,
    /// When set, gaussian-risk runs bucket replicates by `‖θ‖` shells and
    /// report the worst bucket.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_buckets: Option<usize>,
    /// Largest tensor power for schurweyl-verify.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("reading {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("parsing {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.d < 2 {
            return fail(format!("d must be at least 2, got {}", self.d));
        }
        if self.r == 0 || self.r > self.d {
            return fail(format!("r must satisfy 1 <= r <= d, got r={}", self.r));
        }
        if self.mu.len() != self.r {
            return fail(format!(
                "mu must have r = {} entries, got {}",
                self.r,
                self.mu.len()
            ));
        }
        if self.mu.windows(2).any(|w| w[0] <= w[1]) || self.mu.iter().any(|&m| m <= 0.0) {
            return fail("mu must be strictly decreasing and positive".into());
        }
        if (self.mu.iter().sum::<f64>() - 1.0).abs() > 1e-8 {
            return fail("mu must sum to 1".into());
        }
        if self.reps == 0 {
            return fail("reps must be positive".into());
        }
        if self.n == 0 {
            return fail("n must be positive".into());
        }
        if let Some(eps) = self.eps {
            if !(0.0..0.5).contains(&eps) || eps == 0.0 {
                return fail(format!("eps must lie in (0, 0.5), got {eps}"));
            }
        }
        if let Some(delta) = self.delta {
            if !(0.0..1.0).contains(&delta) || delta == 0.0 {
                return fail(format!("delta must lie in (0, 1), got {delta}"));
            }
        }
        if let Some(p) = &self.prior_vars {
            if p.sigma0_2 <= 0.0 || p.b <= 0.0 {
                return fail("prior variances must be positive".into());
            }
        }
        if let Some(radius) = self.theta_radius {
            if radius <= 0.0 {
                return fail("theta_radius must be positive".into());
            }
        }
        Ok(())
    }

    pub fn theta_radius(&self) -> f64 {
        self.theta_radius.unwrap_or(1.0)
    }

    pub fn delta_or_default(&self) -> f64 {
        self.delta.unwrap_or(0.9)
    }

    /// Campaign CSV location: explicit, else next to `out`, else cwd.
    pub fn campaign_path(&self) -> PathBuf {
        if let Some(path) = &self.campaign {
            return path.clone();
        }
        match &self.out {
            Some(out) => out
                .parent()
                .map(|p| p.join("campaign.csv"))
                .unwrap_or_else(|| PathBuf::from("campaign.csv")),
            None => PathBuf::from("campaign.csv"),
        }
    }
}
