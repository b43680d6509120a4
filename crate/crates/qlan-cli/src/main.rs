use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qlan_cli::{
    run_bayes_risk, run_functional, run_gaussian_risk, run_schurweyl_verify,
    run_tomo_concentration, run_two_stage, ExperimentConfig, HarnessError, RiskReport,
};

/// Seeded Monte Carlo experiments for low-rank qudit estimation.
#[derive(Parser)]
#[command(name = "qlan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's replicate count.
    #[arg(long)]
    reps: Option<u64>,
    /// Override the config's report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Two-stage estimator risk against the minimax constant.
    TwoStage(RunArgs),
    /// Covariant-measurement risk in the limiting Gaussian model.
    GaussianRisk(RunArgs),
    /// Bayes risk of the shrunk covariant measurement per mode.
    BayesRisk(RunArgs),
    /// Sample-mean estimation of a linear functional.
    Functional(RunArgs),
    /// Rank detection and concentration of the preliminary estimator.
    TomoConcentration(RunArgs),
    /// Brute-force Schur-Weyl verification battery.
    SchurweylVerify(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::TwoStage(_) => "two-stage",
            Command::GaussianRisk(_) => "gaussian-risk",
            Command::BayesRisk(_) => "bayes-risk",
            Command::Functional(_) => "functional",
            Command::TomoConcentration(_) => "tomo-concentration",
            Command::SchurweylVerify(_) => "schurweyl-verify",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::TwoStage(a)
            | Command::GaussianRisk(a)
            | Command::BayesRisk(a)
            | Command::Functional(a)
            | Command::TomoConcentration(a)
            | Command::SchurweylVerify(a) => a,
        }
    }
}

fn load_config(command: &Command) -> Result<ExperimentConfig, HarnessError> {
    let args = command.args();
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.experiment != command.name() {
        return Err(HarnessError::Config(format!(
            "config is for experiment '{}', but the '{}' subcommand was invoked",
            cfg.experiment,
            command.name()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = args.reps {
        cfg.reps = reps;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(report: &RiskReport, cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    report.write()?;
    report.append_campaign(&cfg.campaign_path())
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    let cfg = load_config(&cli.command)?;
    match cli.command {
        Command::TwoStage(_) => emit(&run_two_stage(&cfg)?, &cfg)?,
        Command::GaussianRisk(_) => emit(&run_gaussian_risk(&cfg)?, &cfg)?,
        Command::BayesRisk(_) => emit(&run_bayes_risk(&cfg)?, &cfg)?,
        Command::Functional(_) => emit(&run_functional(&cfg)?, &cfg)?,
        Command::TomoConcentration(_) => emit(&run_tomo_concentration(&cfg)?, &cfg)?,
        Command::SchurweylVerify(_) => {
            let (report, all_pass) = run_schurweyl_verify(&cfg)?;
            emit(&report, &cfg)?;
            if !all_pass {
                eprintln!("schurweyl-verify: {} check(s) failed", report.mc_estimate);
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
