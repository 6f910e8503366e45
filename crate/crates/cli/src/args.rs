use clap::{Args, ValueEnum};
use quasisd::{Amplitude, ComplexPolynomial, Endpoint, EvaluationRequest, Parameters, Type2Rule};

use crate::parse;
use crate::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BuiltinAmplitude {
    One,
    Sin,
    Cos,
    Exp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    Laguerre,
    Legendre,
}

/// Amplitude selection shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct AmplitudeArgs {
    /// Built-in amplitude f.
    #[arg(long, value_enum, default_value = "one", conflicts_with = "f_poly")]
    pub f: BuiltinAmplitude,

    /// Polynomial amplitude, comma-separated complex coefficients, highest degree first.
    #[arg(long = "f-poly", allow_hyphen_values = true)]
    pub f_poly: Option<String>,
}

impl AmplitudeArgs {
    pub fn amplitude(&self) -> Result<Amplitude, CliError> {
        if let Some(list) = &self.f_poly {
            return Ok(Amplitude::Poly(parse::descending_coefficients(list).map_err(CliError::Input)?));
        }
        Ok(match self.f {
            BuiltinAmplitude::One => Amplitude::One,
            BuiltinAmplitude::Sin => Amplitude::Sin,
            BuiltinAmplitude::Cos => Amplitude::Cos,
            BuiltinAmplitude::Exp => Amplitude::Exp,
        })
    }
}

/// Quadrature size and algorithm parameter overrides.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Quadrature points per contour.
    #[arg(long = "N", default_value_t = 30)]
    pub n: usize,

    #[arg(long = "type2-rule", value_enum, default_value = "laguerre")]
    pub type2_rule: RuleArg,

    #[arg(long = "c-ball")]
    pub c_ball: Option<f64>,
    #[arg(long = "n-ball")]
    pub n_ball: Option<usize>,
    #[arg(long = "delta-ball")]
    pub delta_ball: Option<f64>,
    #[arg(long = "delta-ode")]
    pub delta_ode: Option<f64>,
    #[arg(long = "delta-coarse")]
    pub delta_coarse: Option<f64>,
    #[arg(long = "delta-fine")]
    pub delta_fine: Option<f64>,
    #[arg(long = "delta-quad")]
    pub delta_quad: Option<f64>,
}

impl ParamArgs {
    pub fn parameters(&self) -> Parameters {
        self.parameters_with_n(self.n)
    }

    pub fn parameters_with_n(&self, n: usize) -> Parameters {
        let mut p = Parameters::new(n);
        p.type2_rule = match self.type2_rule {
            RuleArg::Laguerre => Type2Rule::Laguerre,
            RuleArg::Legendre => Type2Rule::Legendre,
        };
        if let Some(v) = self.c_ball {
            p.c_ball = v;
        }
        if let Some(v) = self.n_ball {
            p.n_ball = v;
        }
        if let Some(v) = self.delta_ball {
            p.delta_ball = Some(v);
        }
        if let Some(v) = self.delta_ode {
            p.delta_ode = v;
        }
        if let Some(v) = self.delta_coarse {
            p.delta_coarse = v;
        }
        if let Some(v) = self.delta_fine {
            p.delta_fine = v;
        }
        if let Some(v) = self.delta_quad {
            p.delta_quad = v;
        }
        p
    }
}

/// Full description of one integral.
#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Start point: "re,im", a complex literal, or "inf:ANGLE".
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,

    /// End point, same forms as --a.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,

    /// Phase coefficients, comma-separated, HIGHEST degree first
    /// (e.g. "1,0,-x,0" for z^3 - x z).
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,

    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,

    #[command(flatten)]
    pub amplitude: AmplitudeArgs,

    #[command(flatten)]
    pub params: ParamArgs,
}

impl EvalArgs {
    pub fn request(&self) -> Result<EvaluationRequest, CliError> {
        let a = parse::endpoint(&self.a).map_err(CliError::Input)?;
        let b = parse::endpoint(&self.b).map_err(CliError::Input)?;
        let g = parse::descending_coefficients(&self.g).map_err(CliError::Input)?;
        build_request(a, b, g, self.omega, &self.amplitude, &self.params)
    }
}

pub fn build_request(
    a: Endpoint,
    b: Endpoint,
    g: ComplexPolynomial,
    omega: f64,
    amplitude: &AmplitudeArgs,
    params: &ParamArgs,
) -> Result<EvaluationRequest, CliError> {
    let mut req = EvaluationRequest::new(a, b, g, omega, params.n).with_amplitude(amplitude.amplitude()?);
    req.params = params.parameters();
    req.params.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(req)
}
