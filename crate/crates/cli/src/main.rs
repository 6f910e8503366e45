//! Command-line front end for the oscillatory-integral engine.
//!
//! Phase and amplitude polynomials are given HIGHEST degree first, e.g.
//! `--g "3,1,4,1,5,9,2,6,5,3"` is 3z^9 + z^8 + ... + 3.

mod args;
mod bench;
mod deformation;
mod grid;
mod parse;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use quasisd::{evaluate, EvaluationRequest, EvaluationResult};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent request (exit code 2).
    Input(String),
    /// The evaluation itself failed (exit code 3).
    Numerical(String),
    Io(std::io::Error),
}

impl From<quasisd::Error> for CliError {
    fn from(e: quasisd::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "quasisd", version, about = "Oscillatory integrals with polynomial phase by quasi-steepest descent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one integral and print "RE IM".
    Eval {
        #[command(flatten)]
        eval: args::EvalArgs,
        /// Print diagnostics to standard error.
        #[arg(long)]
        verbose: bool,
    },
    /// Evaluate a parametrised family on a 2-D grid and write CSV.
    Grid(grid::GridArgs),
    /// Write the contour deformation of one integral as JSON.
    Deformation(deformation::DeformationArgs),
    /// Time evaluations over lists of frequencies and quadrature sizes.
    Bench(bench::BenchArgs),
}

/// 17 significant digits with a signed, two-digit exponent (`3.5502805388781716e-01`).
pub fn format_real(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        // NaN and infinities have no exponent
        None => s,
    }
}

pub fn format_value(z: Complex64) -> String {
    format!("{} {}", format_real(z.re), format_real(z.im))
}

pub fn run_request(req: &EvaluationRequest) -> Result<EvaluationResult, CliError> {
    Ok(evaluate(req)?)
}

fn report(result: &EvaluationResult) {
    let contributing = result.contributions.iter().filter(|c| !c.skipped).count();
    eprintln!("branch: {:?}", result.branch);
    eprintln!("N_tot: {}", result.n_total);
    eprintln!(
        "contours: {} in shortest path, {} contributing, {} skipped",
        result.contributions.len(),
        contributing,
        result.contributions.len() - contributing
    );
    eprintln!(
        "stationary points: {} ({} balls after amalgamation)",
        result.stationary_points.len(),
        result.region.balls.len()
    );
    for (stage, secs) in &result.diagnostics.timings {
        eprintln!("time {stage}: {secs:.6} s");
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { eval, verbose } => {
            let req = eval.request()?;
            let result = run_request(&req)?;
            if verbose {
                report(&result);
            }
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", format_value(result.value))?;
            Ok(())
        }
        Command::Grid(args) => grid::run(&args),
        Command::Deformation(args) => deformation::run(&args),
        Command::Bench(args) => bench::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip_with_c_style_exponents() {
        assert_eq!(format_real(0.3550280538878172), "3.5502805388781722e-01");
        assert_eq!(format_real(-1.5 * 2f64.powi(1000)), "-1.6072629107794010e+301");
        assert_eq!(format_real(0.0), "0.0000000000000000e+00");
        for x in [std::f64::consts::PI, -1.0 / 3.0, 1e-310, f64::MAX] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }
}
