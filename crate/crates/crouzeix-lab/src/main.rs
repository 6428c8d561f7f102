//! Command-line driver for the bounds laboratory.
//!
//! Subcommands map one-to-one onto the core pipelines: `bounds` brackets the
//! ratio for one matrix order, `boundary` exports the range boundary as
//! CSV/SVG, `convergence` runs the refinement ladder, `omega` certifies the
//! rational-domain inclusion, and `all` runs everything in parallel.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod emit;
mod svg;

use commands::{Failure, Outcome, Want, DEFAULT_N_DISC};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Parser)]
#[command(name = "crouzeix-lab", version, about = "Two-sided Crouzeix-ratio bounds for KMS matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket the ratio for one matrix order and write the report
    Bounds {
        /// Matrix order (3 to 6)
        #[arg(long)]
        k: usize,
        /// Algebraic-arc sample parameter for the conformal solve
        #[arg(long, default_value_t = DEFAULT_N_DISC)]
        n_disc: usize,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats (default: json)
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
    },
    /// Export the numerical-range boundary polyline and figure
    Boundary {
        /// Matrix order (any k >= 3; the parametrization needs no solve)
        #[arg(long)]
        k: usize,
        /// Algebraic-arc sample parameter
        #[arg(long, default_value_t = DEFAULT_N_DISC)]
        n_disc: usize,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats (default: csv,svg)
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
    },
    /// Run the discretization refinement ladder and check ratio windows
    Convergence {
        /// Matrix order; the ladder and windows are defined for 3
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats (default: json,csv)
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
    },
    /// Certify the rational-domain inclusion inside the order-3 range
    Omega {
        /// Boundary samples per half-circle (>= 100, divisible by 4)
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats (default: json,csv)
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
    },
    /// Run bounds and boundary for orders 3-6 plus convergence and omega
    All {
        /// Algebraic-arc sample parameter shared by all solves
        #[arg(long, default_value_t = DEFAULT_N_DISC)]
        n_disc: usize,
        /// Boundary samples for the inclusion check
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats (default: json,csv,svg)
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
    },
}

fn resolve(formats: Option<Vec<Format>>, default: &[Format]) -> Want {
    match formats {
        Some(list) => Want::from(&list),
        None => Want::from(default),
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Bounds { k, n_disc, out, format } => {
            commands::bounds(k, n_disc, &out, resolve(format, &[Format::Json]))
        }
        Command::Boundary { k, n_disc, out, format } => {
            commands::boundary(k, n_disc, &out, resolve(format, &[Format::Csv, Format::Svg]))
        }
        Command::Convergence { k, out, format } => {
            commands::convergence(k, &out, resolve(format, &[Format::Json, Format::Csv]))
        }
        Command::Omega { samples, out, format } => {
            commands::omega(samples, &out, resolve(format, &[Format::Json, Format::Csv]))
        }
        Command::All { n_disc, samples, out, format } => commands::all(
            n_disc,
            samples,
            &out,
            resolve(format, &[Format::Json, Format::Csv, Format::Svg]),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
