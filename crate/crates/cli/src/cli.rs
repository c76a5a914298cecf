//! Argument grammar: `hardy <command> [--flag value]...`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::factor::FactorArgs;
use crate::unwind::UnwindArgs;
use crate::verify::{Suite, VerifyArgs};
use crate::wavelet::WaveletArgs;
use crate::{factor, unwind, verify, wavelet};

#[derive(Debug, Parser)]
#[command(name = "hardy", version, about = "Phase unwinding and Blaschke-based expansions in Hardy spaces")]
#[command(after_help = "Verbosity is set by HARDY_LOG (error, warn, info, debug, trace); default warn.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// JSON report path (stdout when absent); a CSV with the same stem is
    /// written next to it.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inner–outer factorization of a sampled H² function.
    Factor {
        /// Samples `{"n", "samples"}` or coefficients `{"coeffs", "first_index"}`.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        /// Grid size for coefficient input (default 4096).
        #[arg(long)]
        n: Option<usize>,
        /// Relative floor for log|f| (default 1e-12).
        #[arg(long)]
        tol: Option<f64>,
        /// Fail with exit code 3 unless inner·outer reproduces f.
        #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false")]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Phase-unwinding expansion f = Σ U_n g_n.
    Unwind {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Inline JSON, a JSON file, or one of fixed_inner, greedy_afd,
        /// constant_subtract (default: fixed_inner with v = z).
        #[arg(long)]
        strategy: Option<String>,
        /// Maximum number of terms (default 8).
        #[arg(long)]
        terms: Option<usize>,
        /// Stop once ‖f_n‖ <= tol·‖f‖ (default 1e-10).
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated exponents for the convergence table (default 2).
        #[arg(long, value_name = "P,...")]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Randomized check of an identity or an orthonormal system.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample count, or the circle grid size for mt_gram.
        #[arg(long)]
        n: Option<usize>,
        /// Series truncation, or the number of random points for mt_gram.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        include_j0: Option<bool>,
        /// J, the number of factors j = -1..-J of Δ (default 40).
        #[arg(long)]
        j_scales: Option<u32>,
        /// Quadrature nodes.
        #[arg(long)]
        m: Option<usize>,
        /// Zero list for mt_gram.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Wavelet coefficients of a half-plane function.
    Wavelet {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        j_scales: Option<u32>,
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        include_j0: Option<bool>,
        /// Quadrature nodes (default 8192).
        #[arg(long)]
        m: Option<usize>,
        /// Largest accepted quadrature error estimate.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Factor { input, n, tol, check, output } => {
            factor::run(FactorArgs { input, n, floor_eps: tol, check, out: output.out })
        }
        Command::Unwind { input, n, strategy, terms, tol, p, output } => {
            unwind::run(UnwindArgs { input, n, strategy, terms, stop_tol: tol, p, out: output.out })
        }
        Command::Verify { suite, seed, n, terms, tol, include_j0, j_scales, m, input, output } => {
            verify::run(suite, VerifyArgs { seed, n, terms, tol, include_j0, j_scales, m, input }, output.out)
        }
        Command::Wavelet { input, j_scales, include_j0, m, tol, output } => {
            wavelet::run(WaveletArgs { input, j_scales, include_j0, m, tol, out: output.out })
        }
    }
}
