use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rcmap::bench::{run_and_write, CustomSweepConfig, ExperimentConfig, Fig2Config, Fig3Config, Fig4Config};
use rcmap::{Error, Result};

#[derive(Parser)]
#[command(name = "rcmap", version, about = "Reaction-coordinate mapping benchmark for harmonic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelities and heat currents against the residual friction.
    Fig2(RunArgs),
    /// Scaled spectrum and saturation of the integrated bath correlation.
    Fig3(RunArgs),
    /// Dynamics of the wire against the augmented system.
    Fig4(RunArgs),
    /// Sweep of a single parameter.
    Sweep(RunArgs),
    /// Parse and check a config, then print it with defaults expanded.
    ValidateConfig(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; the experiment defaults are used without one.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative integration tolerance, overriding the config.
    #[arg(long)]
    tol: Option<f64>,
    /// Point count of the main grid, overriding the config.
    #[arg(long)]
    points: Option<usize>,
}

fn resolve(args: &RunArgs, default: Option<ExperimentConfig>) -> Result<ExperimentConfig> {
    let mut config = match (&args.config, default) {
        (Some(path), default) => {
            let c = ExperimentConfig::load(path)?;
            if let Some(d) = default {
                if c.name() != d.name() {
                    return Err(Error::Config(format!(
                        "config describes experiment '{}' but the subcommand runs '{}'",
                        c.name(),
                        d.name()
                    )));
                }
            }
            c
        }
        (None, Some(d)) => d,
        (None, None) => return Err(Error::Config("--config is required".into())),
    };
    if let Some(tol) = args.tol {
        config.set_tolerance(tol);
    }
    if let Some(points) = args.points {
        config.set_points(points);
    }
    if let Some(out) = &args.out {
        config.set_output_dir(out.display().to_string());
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    let (args, default) = match &cli.command {
        Command::Fig2(a) => (a, Some(ExperimentConfig::Fig2(Fig2Config::default()))),
        Command::Fig3(a) => (a, Some(ExperimentConfig::Fig3(Fig3Config::default()))),
        Command::Fig4(a) => (a, Some(ExperimentConfig::Fig4(Fig4Config::default()))),
        Command::Sweep(a) => (a, Some(ExperimentConfig::CustomSweep(CustomSweepConfig::default()))),
        Command::ValidateConfig(a) => (a, None),
    };
    let config = resolve(args, default)?;
    if matches!(cli.command, Command::ValidateConfig(_)) {
        println!("{}", config.resolved_json());
        return Ok(());
    }
    let dir = PathBuf::from(config.output_dir());
    run_and_write(&config, &dir)?;
    println!("{} written to {}", config.name(), dir.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
