//! `fresnet`: builds, evaluates and benchmarks deep Fourier residual networks.

mod commands;
mod output;
mod svg;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fourier_resnet::QuadratureConfig;

#[derive(Parser)]
#[command(
    name = "fresnet",
    version,
    about = "Deep Fourier residual networks for piecewise-smooth functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the sign network and the truncated sine series on a grid.
    SignCurves(commands::SignCurves),
    /// Error of the sign network and the sine series against depth.
    SignConvergence(commands::SignConvergence),
    /// Build a network for a registered target and write it as `.fnet.json`.
    Build(commands::Build),
    /// Evaluate a saved network on a uniform grid.
    Eval(commands::Eval),
    /// Error against width for piecewise targets, with a Fourier baseline.
    Convergence(commands::Convergence),
    /// Support of the oscillations against depth.
    Gibbs(commands::Gibbs),
}

/// Quadrature used for error norms and Fourier coefficients.
#[derive(Args, Clone, Copy)]
pub struct QuadArgs {
    /// Composite panels on each side of 0.
    #[arg(long, default_value_t = 64)]
    panels: usize,
    /// Gauss-Legendre nodes per panel.
    #[arg(long, default_value_t = 12)]
    nodes: usize,
    /// Geometric grading ratio towards 0 (1 = uniform).
    #[arg(long, default_value_t = 0.7)]
    grading: f64,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig, CliError> {
        let cfg = QuadratureConfig {
            panels_per_side: self.panels,
            nodes_per_panel: self.nodes,
            grading_ratio: self.grading,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Assertion(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Assertion(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Assertion(msg) => write!(f, "check failed: {msg}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

impl From<fourier_resnet::Error> for CliError {
    fn from(e: fourier_resnet::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SignCurves(c) => c.run(),
        Command::SignConvergence(c) => c.run(),
        Command::Build(c) => c.run(),
        Command::Eval(c) => c.run(),
        Command::Convergence(c) => c.run(),
        Command::Gibbs(c) => c.run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
