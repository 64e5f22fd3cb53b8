//! `sonc` — SONC lower bounds and certificate verification from the
//! command line.
//!
//! Every subcommand writes a JSON result to stdout (with the effective
//! configuration echoed in the header) and a one-line human summary to
//! stderr. Exit codes: 0 success, 1 usage or parse error, 2 infeasible,
//! 3 numerical trouble. Runs are deterministic for identical arguments
//! and seed, byte-identical up to the `timestamp` field.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "sonc",
    about = "SONC lower bounds for sparse polynomials and certificate verifiers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    flags: GlobalFlags,
}

#[derive(Parser)]
pub struct GlobalFlags {
    /// Solver convergence tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Maximum interior-point iterations.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// PRNG seed for sampling commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON config file (same schema as the echoed `config` header).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cap on the support size accepted by circuit enumeration.
    #[arg(long, global = true)]
    pub support_cap: Option<usize>,
    /// Skip circuits whose weight denominator exceeds this.
    #[arg(long, global = true)]
    pub max_denominator: Option<u64>,
    /// Log solver iterations to stderr.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    pub verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the SONC lower bound of a polynomial (max lambda with
    /// f - lambda in the cone), with the certificate.
    Bound {
        /// Polynomial text, e.g. "x0^4 - 2*x0^2".
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Even degree bound 2d (default: smallest admissible).
        #[arg(long)]
        deg: Option<u32>,
    },
    /// Decide SONC membership of a polynomial and extract a
    /// decomposition.
    Member {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        deg: Option<u32>,
    },
    /// Check a circuit polynomial against the sharp nonnegativity
    /// criterion and report its circuit number.
    CircuitCheck {
        /// Circuit JSON (inline or @file): {"vertices": [[4,2],...],
        /// "beta": [2,2], "weights": ["1/3",...]}.
        #[arg(long)]
        circuit: String,
        /// Comma-separated coefficients: vertices first, inner last.
        #[arg(long)]
        coeffs: String,
    },
    /// Verify a Gram (sum-of-squares) certificate for a polynomial and
    /// extract the squares.
    GramVerify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Gram JSON (inline or @file): {"n":1, "d":2, "G":[[...],...]}.
        #[arg(long)]
        gram: String,
    },
    /// Verify a truncated-quadratic-module certificate
    /// f = sigma_0 + sum g_i sigma_i.
    ModuleVerify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Certificate JSON (inline or @file) with "generators" (poly
        /// text) and "sigmas" (Gram certificates).
        #[arg(long)]
        cert: String,
    },
    /// Verify a copositivity split M = P + N with P PSD and N
    /// entrywise nonnegative.
    CopositiveVerify {
        /// The matrix M as a JSON array of rows (inline or @file).
        #[arg(long)]
        matrix: String,
        /// The PSD part P.
        #[arg(long)]
        psd_part: String,
        /// The entrywise-nonnegative part N.
        #[arg(long)]
        nonneg_part: String,
    },
    /// Sample a general-position configuration, build the squared
    /// witness family, and emit the slack table.
    Witness {
        /// Number of variables.
        n: usize,
        /// Monomial degree d of the vanishing polynomials.
        d: u32,
        /// Number of points to sample.
        points: usize,
        /// Subset size k (default: binom(n+d, n) - 1).
        #[arg(long)]
        subset_size: Option<usize>,
        /// Directory for witness_config.json and witness_slack.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the lower-bound cone program as JSON for external solvers.
    Export {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        deg: Option<u32>,
    },
    /// Solve a cone program exported by `export`.
    SolveProgram {
        /// Program JSON (inline or @file).
        program: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => commands::EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let file_config = match RunConfig::load(cli.flags.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    };
    let config = RunConfig::merge(file_config, &cli.flags);

    let outcome = match &cli.command {
        Command::Bound { poly, deg } => commands::cmd_bound(&config, poly, *deg),
        Command::Member { poly, deg } => commands::cmd_member(&config, poly, *deg),
        Command::CircuitCheck { circuit, coeffs } => {
            commands::cmd_circuit_check(&config, circuit, coeffs)
        }
        Command::GramVerify { poly, gram } => commands::cmd_gram_verify(&config, poly, gram),
        Command::ModuleVerify { poly, cert } => {
            commands::cmd_module_verify(&config, poly, cert)
        }
        Command::CopositiveVerify {
            matrix,
            psd_part,
            nonneg_part,
        } => commands::cmd_copositive_verify(&config, matrix, psd_part, nonneg_part),
        Command::Witness {
            n,
            d,
            points,
            subset_size,
            out_dir,
        } => commands::cmd_witness(&config, *n, *d, *points, *subset_size, out_dir),
        Command::Export { poly, deg } => commands::cmd_export(&config, poly, *deg),
        Command::SolveProgram { program } => commands::cmd_solve_program(&config, program),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_USAGE)
        }
    }
}
