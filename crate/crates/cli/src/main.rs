//! `hocom`: quantize phase-space symbols over the Hermite basis, analyse
//! shell spectra, multiply and average block operators, and run the
//! invariant suite.
//!
//! Exit codes: 0 on success, 1 when a numerical property fails, 2 on usage
//! errors (bad flags, unreadable or mismatched inputs).

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "hocom", version, about = "Constants of motion of the harmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient matrix c_{α,β} of a symbol, as JSON.
    Quantize {
        #[command(flatten)]
        q: SymbolArgs,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-shell eigenvalues of a constant of motion.
    ///
    /// The JSON lists each shell's eigenvalues and norm. The CSV has
    /// columns `k,eigenvalue`, one row per eigenvalue, shells ascending.
    Spectrum {
        #[command(flatten)]
        q: SymbolArgs,
        /// Largest tolerated off-block coefficient.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// JSON output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV output path (defaults to the JSON path with a .csv extension).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Moyal product of two block-diagonal coefficient files, as coefficient JSON.
    Moyal {
        left: PathBuf,
        right: PathBuf,
        /// Largest tolerated off-block coefficient in either input.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Averaged operator: the shell-diagonal part of Op(f), as block JSON.
    Average {
        #[command(flatten)]
        q: SymbolArgs,
        /// Also quantize the orbit-averaged symbol and report the discrepancy.
        #[arg(long)]
        both: bool,
        /// Orbit nodes for the classical average (default 2D+1, or 64 for non-polynomials).
        #[arg(long)]
        t_nodes: Option<usize>,
        /// Largest tolerated discrepancy between the two paths.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Φ^{α,β} on a uniform grid in R^{2n}.
    ///
    /// CSV columns: x1..xn, xi1..xin, re, im. The last coordinate varies fastest.
    WignerGrid {
        /// Comma-separated α, e.g. "2,0".
        #[arg(long)]
        alpha: String,
        /// Comma-separated β, same length as α.
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        max: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 17)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the invariant checks and prints PASS/FAIL per property.
    Verify {
        /// One of all, hermite, wigner, symbols, quantizer, algebra.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
    },
}

/// Exactly one source: an inline symbol, a catalog name, a closed-form
/// Wigner function, or (where accepted) a coefficient file.
#[derive(Debug, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "symbol", "catalog", "phi"])))]
pub struct SymbolArgs {
    /// Coefficient JSON written by `quantize`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Symbol in the expression language, e.g. "x1^2 + xi1^2" or "z1*zb2".
    #[arg(long)]
    pub symbol: Option<String>,
    /// Named symbol: h0, monomial:A;B, angular_momentum:j,k or quadratic:re:im,...
    #[arg(long)]
    pub catalog: Option<String>,
    /// Closed-form Wigner function Φ^{α,β}, given as "α;β", e.g. "1,0;0,2".
    #[arg(long)]
    pub phi: Option<String>,
    /// Declared class of an inline symbol: polynomial (default), schwartz or poly-bounded.
    #[arg(long)]
    pub class: Option<String>,
    /// Phase-space dimension is 2n (default 1; taken from the source when it fixes n).
    #[arg(long)]
    pub n: Option<usize>,
    /// Highest shell K (required unless reading a coefficient file).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Fixed Gauss-Hermite order per axis (default: exact or adaptive).
    #[arg(long)]
    pub order: Option<usize>,
    /// Recorded in every output; only Monte Carlo paths draw from it.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Quantize { q, out } => commands::quantize(&q, out.as_deref()),
        Command::Spectrum { q, tol, out, csv } => commands::spectrum(&q, tol, out.as_deref(), csv.as_deref()),
        Command::Moyal { left, right, tol, out } => commands::moyal(&left, &right, tol, out.as_deref()),
        Command::Average { q, both, t_nodes, tol, out } => commands::average(&q, both, t_nodes, tol, out.as_deref()),
        Command::WignerGrid { alpha, beta, min, max, points, out } => {
            commands::wigner_grid(&alpha, &beta, min, max, points, out.as_deref())
        }
        Command::Verify { suite, n, cutoff } => commands::verify(&suite, n, cutoff),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hocom: {e}");
            ExitCode::from(e.code())
        }
    }
}
