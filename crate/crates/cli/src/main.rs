use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use perron_cli::{cmd_flatten, cmd_perron, cmd_tropical, cmd_validate, PerronArgs};
use perron_core::Exponent;

/// Perron roots and vectors of nonnegative Puiseux matrices.
#[derive(Debug, Parser)]
#[command(name = "perron", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Matrix file.
    file: Option<PathBuf>,
    /// Depth above the matrix valuation, as `p` or `p/q`.
    #[arg(long)]
    depth: Option<Exponent>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Relative tolerance for coefficient comparisons (also PERRON_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Slant of the gently-slanted forms, as `p/q`.
    #[arg(long)]
    delta: Option<Exponent>,
    /// Recorded in the JSON output; the driver itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tropical eigenvalue and eigenvector of the valuation matrix.
    Tropical { file: PathBuf },
    /// Flat-slanted form of the valuation graph, printed as shifts and DOT.
    Flatten {
        file: PathBuf,
        /// Slant of the form, as `p/q`.
        #[arg(long)]
        delta: Option<Exponent>,
    },
    /// Runs the driver and re-checks its invariants.
    Validate {
        file: PathBuf,
        #[arg(long)]
        depth: Option<Exponent>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        delta: Option<Exponent>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match cli.command {
        Some(Command::Tropical { file }) => cmd_tropical(&file, &mut out, &mut err),
        Some(Command::Flatten { file, delta }) => cmd_flatten(&file, delta, &mut out, &mut err),
        Some(Command::Validate { file, depth, tol, delta }) => {
            let args = PerronArgs { depth, tol, delta, ..PerronArgs::default() };
            cmd_validate(&file, &args, &mut out, &mut err)
        }
        None => {
            let RunArgs { file, depth, json, tol, delta, seed } = cli.run;
            let Some(file) = file else {
                eprintln!("error: a matrix file is required");
                return ExitCode::from(1);
            };
            let args = PerronArgs { depth, json, tol, delta, seed };
            cmd_perron(&file, &args, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
