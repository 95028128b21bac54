//! `detrep`: determinantal representations of plane curves and
//! hypersurfaces from the command line.
//!
//! Exit status is 0 when the computation produced an answer (including a
//! negative one such as `NotDecomposable`), 1 for unreadable or invalid
//! input, and 2 when the library detected a violated internal guarantee.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use detrep::hyperbolic::DEFAULT_MAX_HALVINGS;
use serde_json::json;

use commands::Failure;
use report::Report;

/// Determinantal representations over the rationals.
///
/// Every matrix, polynomial, factor list or point may be given inline or as
/// `@path` to read it from a file.
#[derive(Debug, Parser)]
#[command(name = "detrep", version)]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Determinant of a square polynomial matrix.
    Det {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Adjugate (transposed cofactor matrix).
    Adj {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Split off the identity block of the local ring at a point.
    Reduce {
        /// Comma-separated rationals, e.g. "1,0,0" or "1/2,3,0".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Equivalent matrix with entries of degree at most one.
    Linearize {
        /// Keep the matrix symmetric (determinant preserved up to sign).
        #[arg(long)]
        symmetric: bool,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Homogenize an affine-linear matrix with a new variable.
    Homogenize {
        /// Index of the homogenizing variable.
        #[arg(long)]
        var: usize,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Split a linear matrix into blocks along coprime factors.
    Decompose {
        #[arg(long, allow_hyphen_values = true, requires = "f2", conflicts_with = "factors")]
        f1: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "f1")]
        f2: Option<String>,
        /// Factor list such as "x0; x1^2" or "(x0 + x1)^2; x2".
        #[arg(long, allow_hyphen_values = true, required_unless_present = "f1")]
        factors: Option<String>,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Maximal generation, generically and optionally at a point.
    Maxgen {
        #[arg(long, allow_hyphen_values = true)]
        factors: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Matrix factorization M * N = f_red * I.
    Mf {
        #[arg(long, allow_hyphen_values = true)]
        factors: String,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Rebuild a linear representation of f from its adjugate.
    Recover {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        adjugate: String,
    },
    /// Symmetric reduction of a symmetric matrix at a point.
    Symreduce {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Sample real lines through a point and count real roots exactly.
    Hyperbolic {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 256)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(allow_hyphen_values = true)]
        polynomial: String,
    },
    /// Coordinates in which every coefficient matrix is positive definite.
    Pdcoords {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_MAX_HALVINGS)]
        max_halvings: u32,
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Det { .. } => "det",
            Command::Adj { .. } => "adj",
            Command::Reduce { .. } => "reduce",
            Command::Linearize { .. } => "linearize",
            Command::Homogenize { .. } => "homogenize",
            Command::Decompose { .. } => "decompose",
            Command::Maxgen { .. } => "maxgen",
            Command::Mf { .. } => "mf",
            Command::Recover { .. } => "recover",
            Command::Symreduce { .. } => "symreduce",
            Command::Hyperbolic { .. } => "hyperbolic",
            Command::Pdcoords { .. } => "pdcoords",
        }
    }

    fn run(&self) -> Result<Report, Failure> {
        match self {
            Command::Det { matrix } => commands::det(matrix),
            Command::Adj { matrix } => commands::adj(matrix),
            Command::Reduce { point, matrix } => commands::reduce(matrix, point),
            Command::Linearize { symmetric, matrix } => commands::linearize_cmd(matrix, *symmetric),
            Command::Homogenize { var, matrix } => commands::homogenize(matrix, *var),
            Command::Decompose {
                f1,
                f2,
                factors,
                matrix,
            } => commands::decompose_cmd(matrix, f1.as_deref(), f2.as_deref(), factors.as_deref()),
            Command::Maxgen {
                factors,
                point,
                matrix,
            } => commands::maxgen(matrix, factors, point.as_deref()),
            Command::Mf { factors, matrix } => commands::mf(matrix, factors),
            Command::Recover { f, adjugate } => commands::recover(adjugate, f),
            Command::Symreduce { point, matrix } => commands::symreduce(matrix, point),
            Command::Hyperbolic {
                point,
                trials,
                seed,
                polynomial,
            } => commands::hyperbolic(polynomial, point, *trials, *seed),
            Command::Pdcoords {
                point,
                max_halvings,
                matrix,
            } => commands::pdcoords(matrix, point, *max_halvings),
        }
    }
}

/// Applies `DETREP_THREADS` to the global thread pool; `0` means one thread.
fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("DETREP_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("DETREP_THREADS must be a count, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot configure threads: {e}")))
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    let outcome = configure_threads().and_then(|()| cli.command.run());
    match outcome {
        Ok(report) => {
            emit(&report.render(cli.json));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.exit_code();
            let kind = if code == 2 { "internal" } else { "input" };
            eprintln!("error: {}", failure.message());
            if cli.json {
                let report = Report::new(cli.command.name())
                    .verdict("error")
                    .data(json!({ "kind": kind, "message": failure.message() }));
                emit(&report.render(true));
            }
            ExitCode::from(code as u8)
        }
    }
}
