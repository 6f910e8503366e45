use std::time::Instant;

use clap::Args;

use crate::args::{build_request, AmplitudeArgs, ParamArgs};
use crate::{format_real, parse, run_request, CliError};

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Phase coefficients, highest degree first.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,

    /// Comma-separated frequencies.
    #[arg(long = "omega-list")]
    pub omega_list: String,

    /// Comma-separated quadrature sizes.
    #[arg(long = "n-list")]
    pub n_list: String,

    #[arg(long, default_value_t = 3)]
    pub repeats: usize,

    #[command(flatten)]
    pub amplitude: AmplitudeArgs,

    /// Overrides; the quadrature size comes from --n-list.
    #[command(flatten)]
    pub params: ParamArgs,
}

/// Runs sequentially so that the timings are not distorted by contention.
pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let a = parse::endpoint(&args.a).map_err(CliError::Input)?;
    let b = parse::endpoint(&args.b).map_err(CliError::Input)?;
    let g = parse::descending_coefficients(&args.g).map_err(CliError::Input)?;
    let omegas = parse::real_list(&args.omega_list).map_err(CliError::Input)?;
    let sizes = parse::count_list(&args.n_list).map_err(CliError::Input)?;
    if args.repeats == 0 {
        return Err(CliError::Input("--repeats must be at least 1".into()));
    }
    let mut requests = Vec::new();
    for &omega in &omegas {
        for &n in &sizes {
            let mut params = args.params.clone();
            params.n = n;
            requests.push(build_request(a, b, g.clone(), omega, &args.amplitude, &params)?);
        }
    }
    println!("omega,N,value_re,value_im,n_total,seconds");
    for req in &requests {
        let mut total = 0.0;
        let mut last = None;
        for _ in 0..args.repeats {
            let start = Instant::now();
            last = Some(run_request(req)?);
            total += start.elapsed().as_secs_f64();
        }
        let result = last.expect("at least one repeat");
        println!(
            "{},{},{},{},{},{:.6e}",
            req.omega,
            req.params.n,
            format_real(result.value.re),
            format_real(result.value.im),
            result.n_total,
            total / args.repeats as f64
        );
    }
    Ok(())
}
