//! Command-line runner for the figure sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use photon_subtraction::experiments::{
    run_decompose, run_fig3, run_fig4_fig5, run_fig6_to_fig8, run_fig9, run_wigner, RunOutput,
};
use photon_subtraction::{Error, RunConfig};

#[derive(Parser)]
#[command(version, about = "Photon subtraction from multimode squeezed light")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults for the subcommand when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path (overrides the configuration).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of sweep points (overrides the configuration).
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Minimum number of frequency grid points (overrides the configuration).
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Seed stored in the configuration for stochastic routines.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Purity and subtraction probability vs filter bandwidth.
    Fig3,
    /// First-mode and heralding probabilities vs filter bandwidth.
    Fig45,
    /// Up-conversion mode structure and N sweep.
    Fig678,
    /// Heralded temporal mode in a pulse train.
    Fig9,
    /// Subtraction modes and efficiencies of one kernel.
    Decompose,
    /// Wigner function of the single-mode marginal.
    Wigner,
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => match cli.command {
            Command::Fig678 => RunConfig::upconversion_default(),
            Command::Fig9 => RunConfig::comb_default(),
            _ => RunConfig::default(),
        },
    };
    if let Some(out) = &cli.out {
        config.output = out.clone();
    }
    if let Some(points) = cli.points {
        config.sweep.points = points;
    }
    if let Some(n) = cli.grid_points {
        config.grid.n_points = n;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config = load(cli)?;
    let output: RunOutput = match cli.command {
        Command::Fig3 => run_fig3(&config)?,
        Command::Fig45 => run_fig4_fig5(&config)?,
        Command::Fig678 => run_fig6_to_fig8(&config)?,
        Command::Fig9 => run_fig9(&config)?,
        Command::Decompose => run_decompose(&config)?,
        Command::Wigner => run_wigner(&config)?,
    };
    for path in output.write_files(&config, &config.output)? {
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidParameter { .. } | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
