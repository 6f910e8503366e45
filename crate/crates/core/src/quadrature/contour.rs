//! Gauss rules applied along straight segments and steepest-descent contours,
//! and the sum over a deformation.

use num_complex::Complex64;

use super::rules::{gauss_laguerre, gauss_legendre};
use crate::amplitude::Amplitude;
use crate::error::Result;
use crate::geometry::PhaseContext;
use crate::graph::{DeformationGraph, EdgeKind, QuasiSDDeformation, VertexKind};
use crate::tracer::{SDPath, Terminal, TraceContext};

/// Cap on the truncation length `L`; `e^{-708}` is near the smallest normal double.
pub const MAX_TRUNCATION: f64 = 708.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Type2Rule {
    #[default]
    Laguerre,
    Legendre,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourType {
    /// Straight segment inside the non-oscillatory region.
    Line,
    /// Contour running into a valley.
    Valley,
    /// Contour ending at an entrance.
    Entrance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourContribution {
    pub edge: usize,
    pub sign: i8,
    pub kind: ContourType,
    /// Integral along the edge in its stored direction (before `sign`).
    pub value: Complex64,
    pub skipped: bool,
    pub nodes_used: usize,
    /// Quadrature nodes in the complex plane.
    pub nodes: Vec<Complex64>,
}

/// `f(z) e^{iωg(z)}`.
fn integrand(f: &Amplitude, ctx: &PhaseContext, z: Complex64) -> Complex64 {
    f.eval(z) * ctx.exponential(z)
}

/// Gauss-Legendre along the segment `[z0, z1]`.
pub fn type1(z0: Complex64, z1: Complex64, f: &Amplitude, ctx: &PhaseContext, n: usize) -> Complex64 {
    type1_with_nodes(z0, z1, f, ctx, n).0
}

fn type1_with_nodes(
    z0: Complex64,
    z1: Complex64,
    f: &Amplitude,
    ctx: &PhaseContext,
    n: usize,
) -> (Complex64, Vec<Complex64>) {
    if z0 == z1 {
        return (Complex64::new(0.0, 0.0), Vec::new());
    }
    let rule = gauss_legendre(n);
    let (mid, half) = ((z0 + z1) * 0.5, (z1 - z0) * 0.5);
    let mut nodes = Vec::with_capacity(n);
    let mut sum = Complex64::new(0.0, 0.0);
    for (t, w) in rule.iter() {
        let z = mid + half * t;
        nodes.push(z);
        sum += integrand(f, ctx, z) * w;
    }
    (sum * half, nodes)
}

/// `i f(h(p̃/ω)) / g'(h(p̃/ω))` at rescaled parameter `p̃`.
fn rescaled(path: &mut SDPath, f: &Amplitude, cx: &TraceContext<'_>, pt: f64) -> Result<(Complex64, Complex64)> {
    let h = path.refine_point(pt / cx.phase.omega, cx)?;
    Ok((Complex64::i() * f.eval(h) / cx.phase.dg.eval(h), h))
}

fn prefactor(path: &SDPath, ctx: &PhaseContext) -> Complex64 {
    (Complex64::i() * ctx.omega * path.g_origin()).exp() / ctx.omega
}

/// Gauss-Laguerre in the rescaled parameter along a contour to a valley.
pub fn type2_laguerre(path: &mut SDPath, f: &Amplitude, cx: &TraceContext<'_>, n: usize) -> Result<Complex64> {
    Ok(type2_laguerre_with_nodes(path, f, cx, n)?.0)
}

fn type2_laguerre_with_nodes(
    path: &mut SDPath,
    f: &Amplitude,
    cx: &TraceContext<'_>,
    n: usize,
) -> Result<(Complex64, Vec<Complex64>)> {
    let rule = gauss_laguerre(n);
    let mut nodes = Vec::with_capacity(n);
    let mut sum = Complex64::new(0.0, 0.0);
    for (t, w) in rule.iter() {
        let (ft, h) = rescaled(path, f, cx, t)?;
        nodes.push(h);
        sum += ft * w;
    }
    Ok((sum * prefactor(path, cx.phase), nodes))
}

/// Truncation length `L = -log(δ_quad M / |e^{iωg(η)}|)` in rescaled units,
/// with `log_m = log M`.
pub fn truncation_length(path: &SDPath, ctx: &PhaseContext, delta_quad: f64, log_m: f64) -> f64 {
    let own = -ctx.omega * path.g_origin().im;
    let l = -delta_quad.ln() + log_m - own;
    l.clamp(0.0, MAX_TRUNCATION)
}

/// Gauss-Legendre on `[0, P]` of `f̃(p̃) e^{-p̃}`.
fn truncated_legendre(
    path: &mut SDPath,
    f: &Amplitude,
    cx: &TraceContext<'_>,
    n: usize,
    big_p: f64,
) -> Result<(Complex64, Vec<Complex64>)> {
    if big_p <= 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Vec::new()));
    }
    let rule = gauss_legendre(n);
    let mut nodes = Vec::with_capacity(n);
    let mut sum = Complex64::new(0.0, 0.0);
    for (t, w) in rule.iter() {
        let pt = 0.5 * big_p * (t + 1.0);
        let (ft, h) = rescaled(path, f, cx, pt)?;
        nodes.push(h);
        sum += ft * (w * (-pt).exp());
    }
    Ok((sum * prefactor(path, cx.phase) * (0.5 * big_p), nodes))
}

/// Truncated Gauss-Legendre along a contour to a valley, `P = L`.
pub fn type2_legendre(
    path: &mut SDPath,
    f: &Amplitude,
    cx: &TraceContext<'_>,
    n: usize,
    delta_quad: f64,
    log_m: f64,
) -> Result<Complex64> {
    let big_p = truncation_length(path, cx.phase, delta_quad, log_m);
    Ok(truncated_legendre(path, f, cx, n, big_p)?.0)
}

/// Truncated Gauss-Legendre along a contour to an entrance,
/// `P = min(ω p_max, L)`.
pub fn type3(
    path: &mut SDPath,
    f: &Amplitude,
    cx: &TraceContext<'_>,
    n: usize,
    delta_quad: f64,
    log_m: f64,
) -> Result<Complex64> {
    Ok(type3_with_nodes(path, f, cx, n, delta_quad, log_m)?.0)
}

fn type3_with_nodes(
    path: &mut SDPath,
    f: &Amplitude,
    cx: &TraceContext<'_>,
    n: usize,
    delta_quad: f64,
    log_m: f64,
) -> Result<(Complex64, Vec<Complex64>)> {
    let big_p = (cx.phase.omega * path.p_max()).min(truncation_length(path, cx.phase, delta_quad, log_m));
    truncated_legendre(path, f, cx, n, big_p)
}

/// `log M`, the largest `log |e^{iωg}|` over stationary points, finite
/// endpoints and exits visited by the deformation.
pub fn contribution_scale(graph: &DeformationGraph, deformation: &QuasiSDDeformation, ctx: &PhaseContext) -> f64 {
    deformation
        .vertices
        .iter()
        .map(|&v| &graph.vertices[v])
        .filter(|v| {
            matches!(
                v.kind,
                VertexKind::Stationary | VertexKind::FiniteEndpoint | VertexKind::Exit
            )
        })
        .map(|v| ctx.log_magnitude(v.location))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub n: usize,
    pub delta_quad: f64,
    pub type2_rule: Type2Rule,
}

/// Sums the signed contributions of every edge of the deformation, skipping
/// edges whose finite endpoints are all negligible relative to `M`.
pub fn assemble(
    graph: &DeformationGraph,
    deformation: &QuasiSDDeformation,
    paths: &mut [SDPath],
    f: &Amplitude,
    cx: &TraceContext<'_>,
    options: &AssemblyOptions,
) -> Result<(Complex64, Vec<ContourContribution>)> {
    let ctx = cx.phase;
    let log_m = contribution_scale(graph, deformation, ctx);
    let threshold = options.delta_quad.ln();
    let negligible = |z: Complex64| !(ctx.log_magnitude(z) - log_m > threshold);
    let skip_enabled = log_m.is_finite();

    let mut total = Complex64::new(0.0, 0.0);
    let mut contributions = Vec::with_capacity(deformation.edges.len());
    for oriented in &deformation.edges {
        let edge = graph.edges[oriented.edge];
        let (kind, ends) = match edge.kind {
            EdgeKind::BallLine => (
                ContourType::Line,
                vec![graph.vertices[edge.from].location, graph.vertices[edge.to].location],
            ),
            EdgeKind::SDContour { path } => match paths[path].terminal {
                Terminal::Valley { .. } => (ContourType::Valley, vec![paths[path].start()]),
                Terminal::Entrance { point, .. } => (ContourType::Entrance, vec![paths[path].start(), point]),
            },
        };
        let skipped = skip_enabled && ends.iter().all(|&z| negligible(z));
        let (value, nodes) = if skipped {
            (Complex64::new(0.0, 0.0), Vec::new())
        } else {
            match (edge.kind, kind) {
                (EdgeKind::BallLine, _) => type1_with_nodes(ends[0], ends[1], f, ctx, options.n),
                (EdgeKind::SDContour { path }, ContourType::Valley) => match options.type2_rule {
                    Type2Rule::Laguerre => type2_laguerre_with_nodes(&mut paths[path], f, cx, options.n)?,
                    Type2Rule::Legendre => {
                        let big_p = truncation_length(&paths[path], ctx, options.delta_quad, log_m);
                        truncated_legendre(&mut paths[path], f, cx, options.n, big_p)?
                    }
                },
                (EdgeKind::SDContour { path }, _) => {
                    type3_with_nodes(&mut paths[path], f, cx, options.n, options.delta_quad, log_m)?
                }
            }
        };
        let nodes_used = if skipped { 0 } else { options.n };
        total += value * f64::from(oriented.sign);
        contributions.push(ContourContribution {
            edge: oriented.edge,
            sign: oriented.sign,
            kind,
            value,
            skipped,
            nodes_used,
            nodes,
        });
    }
    Ok((total, contributions))
}
