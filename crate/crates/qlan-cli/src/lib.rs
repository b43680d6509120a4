//! Experiment driver for the `qlan` library: seeded Monte Carlo campaigns,
//! the end-to-end two-stage estimator experiment, risk reports, and the
//! Schur-Weyl verification runner. The binary front-end lives in `main.rs`;
//! everything here is library code so campaigns can also be driven from
//! tests.

pub mod config;
pub mod experiments;
pub mod report;

use thiserror::Error;

pub use config::{ExperimentConfig, PriorVars};
pub use experiments::{
    run_bayes_risk, run_functional, run_gaussian_risk, run_schurweyl_verify,
    run_tomo_concentration, run_two_stage,
};
pub use report::{mean_and_stderr, RiskReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qlan::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
