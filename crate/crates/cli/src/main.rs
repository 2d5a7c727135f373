//! `gurlab` command-line tool.
//!
//! Exit codes: 0 success or inequality satisfied, 1 usage/IO/parse error,
//! 2 inequality violated (`check`), 3 invariant failure (`selftest`).

mod args;
mod commands;
mod examples;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "gurlab", version, about = "Cumulant uncertainty relations: checks, examples, sweeps and self tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write data to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one inequality on a problem file.
    Check {
        /// JSON problem file.
        problem: PathBuf,
        /// Inequality name, e.g. gur_full, quantum_ur, classical_ur.
        inequality: String,
        /// Parameter s as re,im (default: params.s from the file, else 1).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Parameter t as re,im (default: params.t from the file, else 1).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Observable used as X.
        #[arg(long, default_value = "X")]
        x: String,
        /// Observable used as Y.
        #[arg(long, default_value = "Y")]
        y: String,
        /// Report tolerance: satisfied iff margin >= -tol.
        #[arg(long)]
        tol: Option<f64>,
        /// JSON file overriding tolerance defaults.
        #[arg(long)]
        tolerances: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce worked example 1-4 as CSV plus summary lines.
    Example {
        /// Example number.
        #[arg(value_name = "N", value_parser = clap::value_parser!(u8).range(1..=4))]
        number: u8,
        /// Grid size n1xn2 (example 1: theta x phi, 2: s x t, 4: eta points).
        #[arg(long)]
        grid: Option<String>,
        /// Seed for sampled separable states (example 3).
        #[arg(long, default_value_t = gurlab::random::DEFAULT_SEED)]
        seed: u64,
        /// Number of sampled separable states (example 3).
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Violation tolerance for region extraction.
        #[arg(long, default_value_t = gurlab::scan::VIOLATION_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run the random-instance invariant suites.
    Selftest {
        #[arg(long, default_value_t = gurlab::random::DEFAULT_SEED)]
        seed: u64,
        /// Instances per suite.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Deliberately break the build (negative control).
        #[arg(long, hide = true)]
        inject_fault: Option<gurlab::selftest::Fault>,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep an inequality or scenario target over a 1-D or 2-D grid.
    Sweep {
        /// Target id (see --list), or an inequality name with --problem.
        target: Option<String>,
        /// First axis as name=lo:hi (pi multiples allowed).
        #[arg(long, allow_hyphen_values = true)]
        var1: Option<String>,
        /// Second axis as name=lo:hi.
        #[arg(long, allow_hyphen_values = true)]
        var2: Option<String>,
        /// Points per axis, n1xn2 or n1.
        #[arg(long, default_value = "50x50")]
        grid: String,
        /// Fixed parameter name=re,im (repeatable).
        #[arg(long = "fix", allow_hyphen_values = true)]
        fixed: Vec<String>,
        /// Problem file: sweep s, t for its X, Y and state.
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Violation tolerance.
        #[arg(long, default_value_t = gurlab::scan::VIOLATION_TOL)]
        tol: f64,
        /// Evaluate on one thread.
        #[arg(long)]
        serial: bool,
        /// List target ids and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Check { problem, inequality, s, t, x, y, tol, tolerances, output } => {
            commands::check(&commands::CheckArgs { problem, inequality, s, t, x, y, tol, tolerances }, &output)
        }
        Command::Example { number, grid, seed, n, tol, output } => {
            examples::run(number, grid.as_deref(), seed, n, tol, &output)
        }
        Command::Selftest { seed, n, inject_fault, output } => commands::selftest(seed, n, inject_fault, &output),
        Command::Sweep { target, var1, var2, grid, fixed, problem, tol, serial, list, output } => commands::sweep(
            &commands::SweepArgs { target, var1, var2, grid, fixed, problem, tol, serial, list },
            &output,
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
