//! `ncdomain`: weight tables, shift export, norms, membership, slices,
//! Poisson verification and the isomorphism pipeline from the command line.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};


#[derive(Parser, Debug)]
#[command(name = "ncdomain", version, about = "Noncommutative domain algebra toolkit")]
pub struct Cli {
    /// Membership tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weight table b_α for all words up to a length
    Weights {
        symbol: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Also evaluate the composition-sum oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Export the truncated weighted shifts as sparse matrices
    Shifts {
        symbol: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Closed-form and numerical operator norms of a polynomial in the shifts
    Norm {
        symbol: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        /// Truncation for the numerical norm (default: degree + 3)
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Membership of a matrix tuple in D_f
    Member {
        symbol: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Boundary of the scalar domain in the (|z_i|, |z_j|) plane, as CSV
    Slice {
        symbol: PathBuf,
        /// One-based axis pair
        #[arg(long, default_value = "1,2")]
        axes: String,
        #[arg(long, default_value_t = 101)]
        res: usize,
    },
    /// Poisson kernel residuals for a tuple
    Poisson {
        symbol: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
    /// Isomorphism obstruction search for a pair of symbols
    Iso {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
        #[arg(long, default_value_t = 10001)]
        res: usize,
        /// List every level-one match, not just the first
        #[arg(long)]
        all: bool,
    },
    /// Whether the symbol defines a disk algebra
    Disk { symbol: PathBuf },
    /// Run the acceptance checks
    Selftest {
        /// Truncation for the Poisson check
        #[arg(long, default_value_t = 14)]
        poisson_len: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ncdomain: {e}");
            e.exit_code()
        }
    }
}
