//! Config-driven experiment runner: sampling, coupling, scaling sweeps,
//! bound calculators, step planning, exit probabilities, and the canned
//! bridge-sampling demo.

mod config;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, ExperimentKind};
use report::Reporter;

/// Environment variable selecting the worker count; unset means sequential.
const WORKERS_ENV: &str = "GAUSSMH_WORKERS";

#[derive(Parser)]
#[command(
    name = "gaussmh",
    version,
    about = "Metropolis-Hastings experiments on perturbed Gaussian targets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single chain and report moments and acceptance statistics.
    Sample(CommonArgs),
    /// Evolve a synchronously coupled pair and report contraction data.
    Couple(CommonArgs),
    /// Sweep the step size and fit the rejection scaling exponent.
    Scaling(CommonArgs),
    /// Evaluate the closed-form bound calculators.
    Bounds(CommonArgs),
    /// Plan (radius, step size, step count) for a target accuracy.
    Plan(CommonArgs),
    /// Estimate the exit probability from a ball and compare to the bound.
    Exit(CommonArgs),
    /// Canned double-well bridge demo: scaling and dimension sweeps.
    TpsDemo(CommonArgs),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Sample(_) => ExperimentKind::Sample,
            Command::Couple(_) => ExperimentKind::Couple,
            Command::Scaling(_) => ExperimentKind::Scaling,
            Command::Bounds(_) => ExperimentKind::Bounds,
            Command::Plan(_) => ExperimentKind::Plan,
            Command::Exit(_) => ExperimentKind::Exit,
            Command::TpsDemo(_) => ExperimentKind::TpsDemo,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Sample(a)
            | Command::Couple(a)
            | Command::Scaling(a)
            | Command::Bounds(a)
            | Command::Plan(a)
            | Command::Exit(a)
            | Command::TpsDemo(a) => a,
        }
    }
}

fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(value) => {
            let n: usize = value
                .parse()
                .with_context(|| format!("{WORKERS_ENV} must be a positive integer, got {value:?}"))?;
            if n == 0 {
                bail!("{WORKERS_ENV} must be at least 1");
            }
            Ok(n)
        }
        Err(_) => Ok(1),
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let args = cli.command.args();

    let mut config = ExperimentConfig::load(&args.config)?;
    if config.experiment != kind {
        bail!(
            "config declares experiment {:?} but the {:?} subcommand was invoked",
            config.experiment.name(),
            kind.name()
        );
    }
    // flags only override the seed and the output directory
    if let Some(seed) = args.seed {
        config.run.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output.dir = out.clone();
    }
    let workers = workers_from_env()?;

    let reporter = Reporter::new(&config, &config.output.dir, workers)?;
    if let Err(error) = experiments::run_experiment(&config, &reporter) {
        reporter.emit_failure(&format!("{error:#}"));
        return Err(error);
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
