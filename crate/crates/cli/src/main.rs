use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acfista_cli::config::{CliOverrides, ExperimentConfig};
use acfista_cli::instance::{generate_instance_file, GenParams};
use acfista_cli::run_experiment;
use acfista_core::TerminationMode;
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "acfista",
    version,
    about = "Run average-curvature accelerated gradient experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every solver of a config on every problem and write the results.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Check a config without running anything.
    Validate {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Generate a problem instance and write it as JSON.
    GenInstance {
        #[arg(value_parser = ["svm", "qp", "mc", "quadratic"])]
        family: String,
        #[command(flatten)]
        params: GenArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Abs,
    Rel,
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    max_iter: Option<usize>,
    /// Termination tolerance on the (absolute or relative) residual.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl OverrideArgs {
    fn to_overrides(&self) -> CliOverrides {
        CliOverrides {
            max_iterations: self.max_iter,
            rho_hat: self.tol,
            termination_mode: self.mode.map(|m| match m {
                Mode::Abs => TerminationMode::Absolute,
                Mode::Rel => TerminationMode::Relative,
            }),
            output_dir: self.out_dir.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    upper: Option<f64>,
    #[arg(long)]
    lower: Option<f64>,
    #[arg(long)]
    scale_min: Option<f64>,
    #[arg(long)]
    scale_max: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
}

impl From<GenArgs> for GenParams {
    fn from(a: GenArgs) -> Self {
        GenParams {
            n: a.n,
            p: a.p,
            l: a.l,
            rank: a.rank,
            density: a.density,
            lambda: a.lambda,
            r: a.r,
            upper: a.upper,
            lower: a.lower,
            scale_min: a.scale_min,
            scale_max: a.scale_max,
            mu: a.mu,
            beta: a.beta,
            tau: a.tau,
        }
    }
}

fn load(path: &Path, overrides: &OverrideArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(path)?;
    config.apply_cli(&overrides.to_overrides());
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, overrides } => load(&config, &overrides).and_then(|c| {
            let outcome = run_experiment(&c)?;
            for r in &outcome.runs {
                println!(
                    "{}/{}: {} after {} iterations, {} resolvents",
                    r.problem,
                    r.solver,
                    r.result.reason.as_str(),
                    r.result.iterations,
                    r.result.total_resolvents
                );
            }
            println!("results in {}", c.output_dir.display());
            Ok(())
        }),
        Command::Validate { config, overrides } => load(&config, &overrides).map(|c| {
            println!(
                "{}: ok ({} problems, {} solvers)",
                config.display(),
                c.problems.len(),
                c.solvers.len()
            );
        }),
        Command::GenInstance {
            family,
            params,
            seed,
            out,
        } => generate_instance_file(&family, &params.into(), seed).and_then(|file| {
            let text = serde_json::to_string(&file)?;
            std::fs::write(&out, text).with_context(|| format!("writing {}", out.display()))
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
