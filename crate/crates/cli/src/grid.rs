use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use quasisd::{ComplexPolynomial, Endpoint};
use rayon::prelude::*;

use crate::args::{build_request, AmplitudeArgs, ParamArgs};
use crate::{format_real, parse, run_request, CliError};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Template {
    /// t^4 + y t^2 + x t over the real line.
    Pearcey,
    /// t^5 + z t^3 + y t^2 + x t over the real line.
    Swallowtail,
    /// 2t^5/5 - x t^4/2 - y t^2 from valley i to valley j.
    Aij,
    /// g + x gx + y gy between --a and --b.
    Custom,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(value_enum)]
    pub template: Template,

    /// "lo:hi:n"
    #[arg(long = "x-range", allow_hyphen_values = true)]
    pub x_range: String,

    /// "lo:hi:n"
    #[arg(long = "y-range", allow_hyphen_values = true)]
    pub y_range: String,

    /// Third swallowtail coordinate.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z: f64,

    /// Valley indices "i,j" (1-based) for the aij template.
    #[arg(long, default_value = "3,2")]
    pub ij: String,

    /// Custom template: base phase, highest degree first.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Custom template: coefficients multiplied by x.
    #[arg(long, allow_hyphen_values = true)]
    pub gx: Option<String>,
    /// Custom template: coefficients multiplied by y.
    #[arg(long, allow_hyphen_values = true)]
    pub gy: Option<String>,
    /// Custom template: start point.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Custom template: end point.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,

    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,

    #[command(flatten)]
    pub amplitude: AmplitudeArgs,

    #[command(flatten)]
    pub params: ParamArgs,

    /// Output CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

/// Phase as `base + x·dx + y·dy` with fixed endpoints.
struct Family {
    base: ComplexPolynomial,
    dx: ComplexPolynomial,
    dy: ComplexPolynomial,
    a: Endpoint,
    b: Endpoint,
}

impl Family {
    fn phase(&self, x: f64, y: f64) -> ComplexPolynomial {
        let len = [&self.base, &self.dx, &self.dy].iter().map(|p| p.coeffs().len()).max().unwrap_or(1);
        let at = |p: &ComplexPolynomial, k: usize| p.coeffs().get(k).copied().unwrap_or_default();
        let coeffs: Vec<Complex64> = (0..len)
            .map(|k| at(&self.base, k) + x * at(&self.dx, k) + y * at(&self.dy, k))
            .collect();
        ComplexPolynomial::new(coeffs)
    }
}

fn real_poly(ascending: &[f64]) -> ComplexPolynomial {
    ComplexPolynomial::from_real(ascending)
}

fn valley_angle(j: usize) -> f64 {
    (2.0 * (j as f64 - 1.0) + 0.5) * PI / 5.0
}

fn family(args: &GridArgs) -> Result<Family, CliError> {
    let real_line = (Endpoint::Infinite(PI), Endpoint::Infinite(0.0));
    Ok(match args.template {
        Template::Pearcey => Family {
            base: real_poly(&[0.0, 0.0, 0.0, 0.0, 1.0]),
            dx: real_poly(&[0.0, 1.0]),
            dy: real_poly(&[0.0, 0.0, 1.0]),
            a: real_line.0,
            b: real_line.1,
        },
        Template::Swallowtail => Family {
            base: real_poly(&[0.0, 0.0, 0.0, args.z, 0.0, 1.0]),
            dx: real_poly(&[0.0, 1.0]),
            dy: real_poly(&[0.0, 0.0, 1.0]),
            a: real_line.0,
            b: real_line.1,
        },
        Template::Aij => {
            let idx = parse::count_list(&args.ij).map_err(CliError::Input)?;
            let [i, j] = idx.as_slice() else {
                return Err(CliError::Input(format!("--ij expects two indices, got '{}'", args.ij)));
            };
            if !(1..=5).contains(i) || !(1..=5).contains(j) {
                return Err(CliError::Input("--ij indices must lie in 1..=5".into()));
            }
            Family {
                base: real_poly(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.4]),
                dx: real_poly(&[0.0, 0.0, 0.0, 0.0, -0.5]),
                dy: real_poly(&[0.0, 0.0, -1.0]),
                a: Endpoint::Infinite(valley_angle(*i)),
                b: Endpoint::Infinite(valley_angle(*j)),
            }
        }
        Template::Custom => {
            let need = |v: &Option<String>, name: &str| {
                v.clone().ok_or_else(|| CliError::Input(format!("custom template needs --{name}")))
            };
            let poly = |v: &Option<String>| match v {
                Some(list) => parse::descending_coefficients(list).map_err(CliError::Input),
                None => Ok(real_poly(&[0.0])),
            };
            Family {
                base: parse::descending_coefficients(&need(&args.g, "g")?).map_err(CliError::Input)?,
                dx: poly(&args.gx)?,
                dy: poly(&args.gy)?,
                a: parse::endpoint(&need(&args.a, "a")?).map_err(CliError::Input)?,
                b: parse::endpoint(&need(&args.b, "b")?).map_err(CliError::Input)?,
            }
        }
    })
}

pub fn run(args: &GridArgs) -> Result<(), CliError> {
    let xs = parse::range(&args.x_range).map_err(CliError::Input)?;
    let ys = parse::range(&args.y_range).map_err(CliError::Input)?;
    let fam = family(args)?;
    // validate everything once before spending time on the grid
    build_request(fam.a, fam.b, fam.phase(xs[0], ys[0]), args.omega, &args.amplitude, &args.params)?;

    let points: Vec<(f64, f64)> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect();
    let values: Vec<Result<Complex64, String>> = points
        .par_iter()
        .map(|&(x, y)| {
            let req = build_request(fam.a, fam.b, fam.phase(x, y), args.omega, &args.amplitude, &args.params)
                .map_err(|e| format!("{e:?}"))?;
            run_request(&req).map(|r| r.value).map_err(|e| format!("{e:?}"))
        })
        .collect();

    let mut out = BufWriter::new(File::create(&args.out)?);
    writeln!(out, "x,y,re,im")?;
    let mut failures = 0;
    for (&(x, y), value) in points.iter().zip(&values) {
        match value {
            Ok(z) => writeln!(out, "{x},{y},{},{}", format_real(z.re), format_real(z.im))?,
            Err(msg) => {
                failures += 1;
                if failures <= 5 {
                    eprintln!("grid point ({x}, {y}) failed: {msg}");
                }
                writeln!(out, "{x},{y},NaN,NaN")?;
            }
        }
    }
    out.flush()?;
    if failures > 0 {
        return Err(CliError::Numerical(format!(
            "{failures} of {} grid points failed (written as NaN)",
            points.len()
        )));
    }
    Ok(())
}
