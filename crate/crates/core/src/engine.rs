//! Public entry point: deforms the integration contour and sums the
//! quadrature contributions.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;

use crate::amplitude::Amplitude;
use crate::error::{Error, Result, Stage};
use crate::geometry::{
    amalgamate, angular_distance, ball_radius, exits, no_return_threshold, ExitPoint, NonOscBall, NonOscRegion,
    PhaseContext,
};
use crate::graph::{build_graph, DeformationGraph, GraphInputs, PathOrigin, QuasiSDDeformation};
use crate::polynomial::ComplexPolynomial;
use crate::quadrature::contour::{assemble, type1, AssemblyOptions, ContourContribution, ContourType, Type2Rule};
use crate::quadrature::{type2_laguerre, type2_legendre};
use crate::tracer::{trace, SDPath, Terminal, TraceContext, TraceParams};

/// Slack on valley-sector boundaries when snapping infinite endpoints.
const SECTOR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Finite(Complex64),
    /// Direction at infinity, in radians.
    Infinite(f64),
}

impl Endpoint {
    pub fn infinite(angle: f64) -> Self {
        Endpoint::Infinite(angle.rem_euclid(TAU))
    }
}

impl From<Complex64> for Endpoint {
    fn from(z: Complex64) -> Self {
        Endpoint::Finite(z)
    }
}

impl From<f64> for Endpoint {
    fn from(x: f64) -> Self {
        Endpoint::Finite(Complex64::new(x, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub c_ball: f64,
    pub n_ball: usize,
    /// `None` selects `1e-3 / (2 max(J - 2, 1))`.
    pub delta_ball: Option<f64>,
    pub delta_ode: f64,
    pub delta_coarse: f64,
    pub delta_fine: f64,
    pub delta_quad: f64,
    /// Quadrature points per contour.
    pub n: usize,
    pub type2_rule: Type2Rule,
}

impl Parameters {
    pub fn new(n: usize) -> Self {
        Parameters {
            c_ball: TAU,
            n_ball: 16,
            delta_ball: None,
            delta_ode: 0.1,
            delta_coarse: 1e-2,
            delta_fine: 1e-13,
            delta_quad: 1e-16,
            n,
            type2_rule: Type2Rule::Laguerre,
        }
    }

    pub fn delta_ball_for(&self, degree: usize) -> f64 {
        self.delta_ball
            .unwrap_or_else(|| 1e-3 / (2.0 * (degree.saturating_sub(2).max(1)) as f64))
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must lie in (0, 1), got {x}")))
            }
        };
        unit("delta_ode", self.delta_ode)?;
        unit("delta_coarse", self.delta_coarse)?;
        unit("delta_fine", self.delta_fine)?;
        if let Some(d) = self.delta_ball {
            unit("delta_ball", d)?;
        }
        if !(self.delta_quad >= 0.0 && self.delta_quad < 1.0) {
            return Err(Error::InvalidInput(format!(
                "delta_quad must lie in [0, 1), got {}",
                self.delta_quad
            )));
        }
        if self.delta_fine >= self.delta_coarse {
            return Err(Error::InvalidInput("delta_fine must be smaller than delta_coarse".into()));
        }
        if !(self.c_ball > 0.0 && self.c_ball.is_finite()) {
            return Err(Error::InvalidInput(format!("c_ball must be positive, got {}", self.c_ball)));
        }
        if self.n_ball == 0 {
            return Err(Error::InvalidInput("n_ball must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        Ok(())
    }

    pub fn trace_params(&self) -> TraceParams {
        TraceParams {
            delta_ode: self.delta_ode,
            delta_coarse: self.delta_coarse,
            delta_fine: self.delta_fine,
            ..TraceParams::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvaluationRequest {
    pub a: Endpoint,
    pub b: Endpoint,
    pub f: Amplitude,
    pub g: ComplexPolynomial,
    pub omega: f64,
    pub params: Parameters,
}

impl EvaluationRequest {
    /// Request with `f ≡ 1` and default parameters.
    pub fn new(a: Endpoint, b: Endpoint, g: ComplexPolynomial, omega: f64, n: usize) -> Self {
        EvaluationRequest {
            a,
            b,
            f: Amplitude::One,
            g,
            omega,
            params: Parameters::new(n),
        }
    }

    pub fn with_amplitude(mut self, f: Amplitude) -> Self {
        self.f = f;
        self
    }
}

/// Which evaluation route was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Both endpoints coincide.
    Empty,
    /// Endpoint balls overlap: one straight segment.
    SmallOmega,
    /// Degree-one phase: exact straight contours.
    LinearPhase,
    Full,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub timings: Vec<(Stage, f64)>,
}

#[derive(Debug, Clone)]
pub struct EvaluationResult {
    pub value: Complex64,
    /// `N` times the number of contours that received quadrature points.
    pub n_total: usize,
    pub branch: Branch,
    /// Endpoints after snapping infinite directions onto valleys.
    pub a: Endpoint,
    pub b: Endpoint,
    pub contributions: Vec<ContourContribution>,
    pub deformation: QuasiSDDeformation,
    pub graph: Option<DeformationGraph>,
    pub region: NonOscRegion,
    /// Every root of `g'`, including those removed by amalgamation.
    pub stationary_points: Vec<Complex64>,
    pub exits: Vec<ExitPoint>,
    pub paths: Vec<SDPath>,
    pub valleys: Vec<f64>,
    pub r_star: f64,
    pub diagnostics: Diagnostics,
}

impl EvaluationResult {
    fn empty(a: Endpoint, b: Endpoint, valleys: Vec<f64>, branch: Branch) -> Self {
        EvaluationResult {
            value: Complex64::new(0.0, 0.0),
            n_total: 0,
            branch,
            a,
            b,
            contributions: Vec::new(),
            deformation: QuasiSDDeformation::default(),
            graph: None,
            region: NonOscRegion::default(),
            stationary_points: Vec::new(),
            exits: Vec::new(),
            paths: Vec::new(),
            valleys,
            r_star: 0.0,
            diagnostics: Diagnostics::default(),
        }
    }

    /// Same integral in the opposite direction.
    fn reversed(mut self) -> Self {
        self.value = -self.value;
        std::mem::swap(&mut self.a, &mut self.b);
        self.deformation.vertices.reverse();
        self.deformation.edges.reverse();
        for e in &mut self.deformation.edges {
            e.sign = -e.sign;
        }
        self.contributions.reverse();
        for c in &mut self.contributions {
            c.sign = -c.sign;
        }
        self
    }
}

/// Valley whose closed sector contains `theta`; the smaller angle wins on a
/// shared boundary.
pub fn snap_infinite_endpoint(theta: f64, ctx: &PhaseContext) -> Result<(usize, f64)> {
    if !theta.is_finite() {
        return Err(Error::InvalidInput(format!("infinite endpoint angle must be finite, got {theta}")));
    }
    let half = ctx.sector_half_width();
    ctx.valleys
        .iter()
        .position(|&v| angular_distance(theta - v) <= half + SECTOR_TOLERANCE)
        .map(|k| (k, ctx.valleys[k]))
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "angle {theta} does not lie in any valley sector of the phase"
            ))
        })
}

/// Balls around two finite endpoints; `Some((r_a, r_b))` when they overlap.
pub fn small_omega_check(a: Complex64, b: Complex64, ctx: &PhaseContext, params: &Parameters) -> Result<Option<(f64, f64)>> {
    let ra = ball_radius(a, ctx, params.c_ball, params.n_ball)?;
    let rb = ball_radius(b, ctx, params.c_ball, params.n_ball)?;
    Ok(((a - b).norm() < ra + rb).then_some((ra, rb)))
}

fn sort_key(e: &Endpoint) -> (u8, f64, f64) {
    match *e {
        Endpoint::Finite(z) => (0, z.re, z.im),
        Endpoint::Infinite(t) => (1, t, 0.0),
    }
}

fn precedes(a: &Endpoint, b: &Endpoint) -> bool {
    let (x, y) = (sort_key(a), sort_key(b));
    x.0.cmp(&y.0)
        .then(x.1.total_cmp(&y.1))
        .then(x.2.total_cmp(&y.2))
        .is_le()
}

fn validate_endpoint(e: &Endpoint) -> Result<()> {
    match e {
        Endpoint::Finite(z) if !z.is_finite() => Err(Error::InvalidInput(format!("endpoint {z} is not finite"))),
        Endpoint::Infinite(t) if !t.is_finite() => Err(Error::InvalidInput(format!("angle {t} is not finite"))),
        _ => Ok(()),
    }
}

/// Evaluates `∫_a^b f(z) e^{iωg(z)} dz`.
pub fn evaluate(req: &EvaluationRequest) -> Result<EvaluationResult> {
    req.params.validate()?;
    validate_endpoint(&req.a)?;
    validate_endpoint(&req.b)?;
    let ctx = PhaseContext::new(req.g.clone(), req.omega)?;

    let snap = |e: Endpoint| -> Result<Endpoint> {
        match e {
            Endpoint::Infinite(t) => Ok(Endpoint::Infinite(snap_infinite_endpoint(t, &ctx)?.1)),
            finite => Ok(finite),
        }
    };
    let (a, b) = (snap(req.a)?, snap(req.b)?);
    if a == b {
        return Ok(EvaluationResult::empty(a, b, ctx.valleys.clone(), Branch::Empty));
    }
    // a fixed orientation makes the b→a result the exact negative of a→b
    let result = if precedes(&a, &b) {
        evaluate_ordered(a, b, &ctx, req)?
    } else {
        evaluate_ordered(b, a, &ctx, req)?.reversed()
    };
    if !(result.value.re.is_finite() && result.value.im.is_finite()) {
        return Err(Error::NonFinite.in_stage(Stage::Quadrature));
    }
    Ok(result)
}

fn evaluate_ordered(a: Endpoint, b: Endpoint, ctx: &PhaseContext, req: &EvaluationRequest) -> Result<EvaluationResult> {
    let params = &req.params;
    if let (Endpoint::Finite(za), Endpoint::Finite(zb)) = (a, b) {
        if small_omega_check(za, zb, ctx, params)
            .map_err(|e| e.in_stage(Stage::NonOscillatoryRegion))?
            .is_some()
        {
            let value = type1(za, zb, &req.f, ctx, params.n);
            let mut out = EvaluationResult::empty(a, b, ctx.valleys.clone(), Branch::SmallOmega);
            out.value = value;
            out.n_total = params.n;
            out.contributions.push(ContourContribution {
                edge: 0,
                sign: 1,
                kind: ContourType::Line,
                value,
                skipped: false,
                nodes_used: params.n,
                nodes: Vec::new(),
            });
            return Ok(out);
        }
    }
    if ctx.degree == 1 {
        return linear_phase(a, b, ctx, req);
    }
    full_pipeline(a, b, ctx, req)
}

fn linear_phase(a: Endpoint, b: Endpoint, ctx: &PhaseContext, req: &EvaluationRequest) -> Result<EvaluationResult> {
    let params = &req.params;
    let alpha = ctx.g.coeffs()[1];
    let valley = ctx.valleys[0];
    let no_return = no_return_threshold(ctx);
    let region = NonOscRegion::default();
    let cx = TraceContext {
        phase: ctx,
        region: &region,
        no_return: &no_return,
        stationary: &[],
        params: params.trace_params(),
    };
    let finite: Vec<(Complex64, f64)> = [(a, 1.0), (b, -1.0)]
        .into_iter()
        .filter_map(|(e, s)| match e {
            Endpoint::Finite(z) => Some((z, s)),
            Endpoint::Infinite(_) => None,
        })
        .collect();
    let log_m = finite
        .iter()
        .map(|&(z, _)| ctx.log_magnitude(z))
        .fold(f64::NEG_INFINITY, f64::max);

    // h(p) = η + ip/α is exact, so two samples carry the whole contour
    let reach = (4 * params.n + 1000) as f64 / ctx.omega;
    let mut out = EvaluationResult::empty(a, b, ctx.valleys.clone(), Branch::LinearPhase);
    let start = Instant::now();
    for &(eta, sign) in &finite {
        let mut path = SDPath::from_samples(
            eta,
            vec![0.0, reach],
            vec![eta, eta + Complex64::new(0.0, reach) / alpha],
            Terminal::Valley { index: 0, angle: valley },
            ctx.g.eval(eta),
        );
        let skipped = !(ctx.log_magnitude(eta) - log_m > params.delta_quad.ln());
        let value = if skipped {
            Complex64::new(0.0, 0.0)
        } else {
            match params.type2_rule {
                Type2Rule::Laguerre => type2_laguerre(&mut path, &req.f, &cx, params.n),
                Type2Rule::Legendre => type2_legendre(&mut path, &req.f, &cx, params.n, params.delta_quad, log_m),
            }
            .map_err(|e| e.in_stage(Stage::Quadrature))?
        };
        out.value += value * sign;
        if !skipped {
            out.n_total += params.n;
        }
        out.contributions.push(ContourContribution {
            edge: out.paths.len(),
            sign: sign as i8,
            kind: ContourType::Valley,
            value,
            skipped,
            nodes_used: if skipped { 0 } else { params.n },
            nodes: Vec::new(),
        });
        out.paths.push(path);
    }
    out.diagnostics.timings.push((Stage::Quadrature, start.elapsed().as_secs_f64()));
    Ok(out)
}

fn full_pipeline(a: Endpoint, b: Endpoint, ctx: &PhaseContext, req: &EvaluationRequest) -> Result<EvaluationResult> {
    let params = &req.params;
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: Stage, timings: &mut Vec<(Stage, f64)>| {
        timings.push((stage, clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };

    let stationary = ctx.dg.roots().map_err(|e| e.in_stage(Stage::StationaryPoints))?;
    lap(Stage::StationaryPoints, &mut timings);

    let balls = stationary
        .iter()
        .map(|&xi| {
            ball_radius(xi, ctx, params.c_ball, params.n_ball).map(|radius| NonOscBall { center: xi, radius })
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage(Stage::NonOscillatoryRegion))?;
    let region = amalgamate(&balls, params.delta_ball_for(ctx.degree));
    lap(Stage::NonOscillatoryRegion, &mut timings);

    let exit_points = exits(&region, ctx).map_err(|e| e.in_stage(Stage::Exits))?;
    lap(Stage::Exits, &mut timings);

    let no_return = no_return_threshold(ctx);
    let cx = TraceContext {
        phase: ctx,
        region: &region,
        no_return: &no_return,
        stationary: &stationary,
        params: params.trace_params(),
    };
    let endpoints: Vec<Complex64> = [a, b]
        .iter()
        .filter_map(|e| match e {
            Endpoint::Finite(z) => Some(*z),
            Endpoint::Infinite(_) => None,
        })
        .collect();
    let mut paths = Vec::new();
    let mut origins = Vec::new();
    for (k, exit) in exit_points.iter().enumerate() {
        paths.push(trace(exit.location, &cx).map_err(|e| e.in_stage(Stage::Tracing))?);
        origins.push(PathOrigin::Exit(k));
    }
    for (k, &z) in endpoints.iter().enumerate() {
        if !region.contains(z) {
            paths.push(trace(z, &cx).map_err(|e| e.in_stage(Stage::Tracing))?);
            origins.push(PathOrigin::Endpoint(k));
        }
    }
    lap(Stage::Tracing, &mut timings);

    let (graph, layout) = build_graph(
        &region,
        &GraphInputs {
            endpoints: &endpoints,
            exits: &exit_points,
            valleys: &ctx.valleys,
            paths: &paths,
            origins: &origins,
        },
    );
    let mut next_finite = 0;
    let mut vertex_of = |e: Endpoint| match e {
        Endpoint::Finite(_) => {
            next_finite += 1;
            layout.endpoint(next_finite - 1)
        }
        Endpoint::Infinite(angle) => {
            let k = ctx.valleys.iter().position(|&v| v == angle).expect("snapped valley");
            layout.valley(k)
        }
    };
    let (start, end) = (vertex_of(a), vertex_of(b));
    let chain = graph
        .shortest_path(start, end)
        .map_err(|e| e.in_stage(Stage::Graph))?;
    let deformation = graph.orient(&chain, start);
    lap(Stage::Graph, &mut timings);

    let options = AssemblyOptions {
        n: params.n,
        delta_quad: params.delta_quad,
        type2_rule: params.type2_rule,
    };
    let (value, contributions) = assemble(&graph, &deformation, &mut paths, &req.f, &cx, &options)
        .map_err(|e| e.in_stage(Stage::Quadrature))?;
    lap(Stage::Quadrature, &mut timings);

    let n_total = contributions.iter().map(|c| c.nodes_used).sum();
    Ok(EvaluationResult {
        value,
        n_total,
        branch: Branch::Full,
        a,
        b,
        contributions,
        deformation,
        graph: Some(graph),
        r_star: no_return.r_star,
        region,
        stationary_points: stationary,
        exits: exit_points,
        paths,
        valleys: ctx.valleys.clone(),
        diagnostics: Diagnostics { timings },
    })
}
