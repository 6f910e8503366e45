//! Numerical steepest-descent contours `g(h(p)) = g(h(0)) + ip`.
//!
//! A contour is advanced by an Euler predictor followed by a Newton corrector
//! on the exact level-set equation, and stops when it enters a
//! non-oscillatory ball or a region of no return.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{in_no_return_region, NoReturnData, NonOscRegion, PhaseContext};

/// Step-size and tolerance controls for tracing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceParams {
    pub delta_ode: f64,
    pub delta_coarse: f64,
    pub delta_fine: f64,
    pub max_steps: usize,
}

impl Default for TraceParams {
    fn default() -> Self {
        TraceParams {
            delta_ode: 0.1,
            delta_coarse: 1e-2,
            delta_fine: 1e-13,
            max_steps: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Terminal {
    /// Entered the (closed) ball with this index.
    Entrance { ball: usize, point: Complex64 },
    /// Reached the region of no return of `valleys[index]`.
    Valley { index: usize, angle: f64 },
}

/// Sampled steepest-descent contour from `origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct SDPath {
    pub origin: Complex64,
    pub p: Vec<f64>,
    pub h: Vec<Complex64>,
    pub terminal: Terminal,
    g0: Complex64,
}

/// Everything the tracer needs to know about the phase.
#[derive(Debug, Clone, Copy)]
pub struct TraceContext<'a> {
    pub phase: &'a PhaseContext,
    pub region: &'a NonOscRegion,
    pub no_return: &'a NoReturnData,
    /// All stationary points, including those dropped by amalgamation.
    pub stationary: &'a [Complex64],
    pub params: TraceParams,
}

impl TraceContext<'_> {
    fn distance_to_stationary(&self, z: Complex64) -> f64 {
        self.stationary
            .iter()
            .map(|s| (z - s).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn step_length(&self, h: Complex64) -> f64 {
        let d1 = self.phase.dg.eval(h).norm();
        let d2 = self.phase.d2g.eval(h).norm();
        let curvature = if d2 == 0.0 { f64::INFINITY } else { 2.0 * d1 * d1 / d2 };
        let dist = self.distance_to_stationary(h);
        let proximity = d1 * dist;
        let dp = self.params.delta_ode * curvature.min(proximity);
        if dp.is_finite() {
            dp
        } else {
            self.params.delta_ode * d1 * (1.0 + h.norm())
        }
    }

    /// Newton on `g(h) = target` from `h`, stopping once the update is below
    /// `rel * dist` or the floating-point noise floor.
    fn correct(&self, mut h: Complex64, target: Complex64, rel: f64, p: f64) -> Result<Complex64> {
        for _ in 0..50 {
            let (g, dg) = self.phase.g.eval_with_derivative(h);
            if dg == Complex64::new(0.0, 0.0) {
                return Err(Error::NewtonDiverged { p });
            }
            let step = (g - target) / dg;
            h -= step;
            if !h.is_finite() {
                return Err(Error::NewtonDiverged { p });
            }
            let dist = self.distance_to_stationary(h);
            let scale = if dist.is_finite() { dist } else { 1.0 + h.norm() };
            let floor = 8.0 * f64::EPSILON * (h.norm() + g.norm() / dg.norm());
            if step.norm() <= (rel * scale).max(floor) {
                return Ok(h);
            }
        }
        Err(Error::NewtonDiverged { p })
    }

    fn check_stationary(&self, h: Complex64, origin: Complex64) -> Result<()> {
        let dist = self.distance_to_stationary(h);
        if dist <= 1e3 * f64::EPSILON * (1.0 + h.norm()) {
            return Err(Error::HitStationaryPoint { origin });
        }
        Ok(())
    }

    fn valley_hit(&self, h: Complex64) -> Option<Terminal> {
        self.phase
            .valleys
            .iter()
            .position(|&v| in_no_return_region(h, v, self.phase, self.no_return))
            .map(|index| Terminal::Valley {
                index,
                angle: self.phase.valleys[index],
            })
    }

    fn predict(&self, h: Complex64, dp: f64) -> Complex64 {
        h + Complex64::new(0.0, dp) / self.phase.dg.eval(h)
    }
}

/// Traces the steepest-descent contour starting at `origin`.
pub fn trace(origin: Complex64, cx: &TraceContext<'_>) -> Result<SDPath> {
    cx.check_stationary(origin, origin)?;
    let g0 = cx.phase.g.eval(origin);
    let mut ps = vec![0.0];
    let mut hs = vec![origin];

    if let Some(terminal) = cx.valley_hit(origin) {
        return Ok(SDPath { origin, p: ps, h: hs, terminal, g0 });
    }

    for _ in 0..cx.params.max_steps {
        let (p, h) = (*ps.last().unwrap(), *hs.last().unwrap());
        let dp = cx.step_length(h);
        let p_next = p + dp;
        let guess = cx.predict(h, dp);
        let target = g0 + Complex64::new(0.0, p_next);
        let h_next = cx.correct(guess, target, cx.params.delta_coarse, p_next)?;
        cx.check_stationary(h_next, origin)?;
        ps.push(p_next);
        hs.push(h_next);

        if cx.region.contains(h_next) {
            let (p_in, point) = refine_entrance(cx, g0, (p, h), (p_next, h_next))?;
            let ball = cx.region.containing_ball(point).unwrap_or_else(|| {
                cx.region.containing_ball(h_next).expect("inside some ball")
            });
            *ps.last_mut().unwrap() = p_in;
            *hs.last_mut().unwrap() = point;
            return Ok(SDPath {
                origin,
                p: ps,
                h: hs,
                terminal: Terminal::Entrance { ball, point },
                g0,
            });
        }
        if let Some(terminal) = cx.valley_hit(h_next) {
            return Ok(SDPath { origin, p: ps, h: hs, terminal, g0 });
        }
    }
    Err(Error::TraceDidNotTerminate {
        steps: cx.params.max_steps,
    })
}

/// Bisects on `p` between a point outside every ball and one inside, keeping
/// the inside end, until the bracket is below `delta_fine` relative width.
fn refine_entrance(
    cx: &TraceContext<'_>,
    g0: Complex64,
    outside: (f64, Complex64),
    inside: (f64, Complex64),
) -> Result<(f64, Complex64)> {
    let (mut lo, mut h_lo) = outside;
    let (mut hi, mut h_hi) = inside;
    for _ in 0..200 {
        if hi - lo <= cx.params.delta_fine * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let t = (mid - lo) / (hi - lo);
        let guess = h_lo + (h_hi - h_lo) * t;
        let h = cx.correct(guess, g0 + Complex64::new(0.0, mid), cx.params.delta_fine, mid)?;
        if cx.region.contains(h) {
            hi = mid;
            h_hi = h;
        } else {
            lo = mid;
            h_lo = h;
        }
    }
    Ok((hi, h_hi))
}

impl SDPath {
    pub(crate) fn from_samples(
        origin: Complex64,
        p: Vec<f64>,
        h: Vec<Complex64>,
        terminal: Terminal,
        g0: Complex64,
    ) -> Self {
        SDPath { origin, p, h, terminal, g0 }
    }

    pub fn p_max(&self) -> f64 {
        *self.p.last().unwrap()
    }

    pub fn start(&self) -> Complex64 {
        self.h[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.h.last().unwrap()
    }

    pub fn ends_in_valley(&self) -> bool {
        matches!(self.terminal, Terminal::Valley { .. })
    }

    /// Polyline arc length of the samples.
    pub fn arc_length(&self) -> f64 {
        self.h.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Continues the contour past its last sample until `p_max() >= p`.
    /// Only valley contours may be extended.
    pub fn extend(&mut self, p: f64, cx: &TraceContext<'_>) -> Result<()> {
        let mut steps = 0;
        while self.p_max() < p {
            steps += 1;
            if steps > cx.params.max_steps {
                return Err(Error::TraceDidNotTerminate { steps });
            }
            let (p0, h0) = (self.p_max(), self.end());
            let dp = cx.step_length(h0);
            let p_next = p0 + dp;
            let guess = cx.predict(h0, dp);
            let target = self.g0 + Complex64::new(0.0, p_next);
            let h = cx.correct(guess, target, cx.params.delta_coarse, p_next)?;
            self.p.push(p_next);
            self.h.push(h);
        }
        Ok(())
    }

    /// `h(p)` to fine tolerance, using the samples as the starting guess.
    pub fn refine_point(&mut self, p: f64, cx: &TraceContext<'_>) -> Result<Complex64> {
        if p > self.p_max() {
            self.extend(p, cx)?;
        }
        let guess = self.interpolate(p);
        cx.correct(guess, self.g0 + Complex64::new(0.0, p), cx.params.delta_fine, p)
    }

    /// Piecewise-linear interpolation of the samples, clamped at the ends.
    pub fn interpolate(&self, p: f64) -> Complex64 {
        if p <= self.p[0] {
            return self.h[0];
        }
        let k = self.p.partition_point(|&q| q < p);
        if k >= self.p.len() {
            return self.end();
        }
        let (p0, p1) = (self.p[k - 1], self.p[k]);
        let t = (p - p0) / (p1 - p0);
        self.h[k - 1] + (self.h[k] - self.h[k - 1]) * t
    }

    /// `g` at the start of the contour.
    pub fn g_origin(&self) -> Complex64 {
        self.g0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{no_return_threshold, NonOscBall};
    use crate::polynomial::ComplexPolynomial;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(coeffs: &[Complex64]) -> (PhaseContext, NoReturnData, Vec<Complex64>) {
        let phase = PhaseContext::new(ComplexPolynomial::new(coeffs.to_vec()), 1.0).unwrap();
        let nr = no_return_threshold(&phase);
        let sp = phase.dg.roots().unwrap();
        (phase, nr, sp)
    }

    #[test]
    fn quadratic_contour_matches_closed_form() {
        let (phase, nr, sp) = setup(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let region = NonOscRegion {
            balls: vec![NonOscBall { center: c(0.0, 0.0), radius: 0.5 }],
            removed: Vec::new(),
        };
        let cx = TraceContext {
            phase: &phase,
            region: &region,
            no_return: &nr,
            stationary: &sp,
            params: TraceParams::default(),
        };
        let origin = Complex64::from_polar(0.5, PI / 4.0);
        let mut path = trace(origin, &cx).unwrap();
        assert!(matches!(path.terminal, Terminal::Valley { .. }));
        for p in [0.3, 1.0, 2.5] {
            let h = path.refine_point(p, &cx).unwrap();
            let exact = (c(0.25, 0.0) * c(0.0, 1.0) + c(0.0, p)).sqrt();
            let exact = if (exact - origin).norm() < (-exact - origin).norm() { exact } else { -exact };
            assert!((h - exact).norm() < 1e-12, "p={p}: {h} vs {exact}");
        }
        let h = path.refine_point(40.0, &cx).unwrap();
        assert!((phase.g.eval(h) - phase.g.eval(origin) - c(0.0, 40.0)).norm() < 1e-12);
    }

    #[test]
    fn level_set_is_kept() {
        let (phase, nr, sp) = setup(&[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, -1.0 / 3.0)]);
        let region = NonOscRegion::default();
        let cx = TraceContext {
            phase: &phase,
            region: &region,
            no_return: &nr,
            stationary: &sp,
            params: TraceParams::default(),
        };
        let origin = c(2.5, 0.7);
        let path = trace(origin, &cx).unwrap();
        let g0 = phase.g.eval(origin);
        for (p, h) in path.p.iter().zip(&path.h) {
            let g = phase.g.eval(*h);
            assert!((g.re - g0.re).abs() <= 1e-2 * g0.norm().max(1.0));
            assert!(g.im - g0.im >= -1e-9 || *p == 0.0);
        }
    }

    #[test]
    fn contour_into_ball_records_entrance() {
        // start far out and run towards the stationary point at -1 of z³/3 - z
        let (phase, nr, sp) = setup(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)]);
        let region = NonOscRegion {
            balls: vec![NonOscBall { center: c(-1.0, 0.0), radius: 0.4 }],
            removed: Vec::new(),
        };
        let cx = TraceContext {
            phase: &phase,
            region: &region,
            no_return: &nr,
            stationary: &sp,
            params: TraceParams::default(),
        };
        // a point on the steepest-ascent curve of -1 descends back into its ball
        let g_sp = phase.g.eval(c(-1.0, 0.0));
        let mut origin = c(-1.0, 0.0) + Complex64::from_polar(1.5f64.sqrt(), PI / 4.0);
        for _ in 0..30 {
            let (g, dg) = phase.g.eval_with_derivative(origin);
            origin -= (g - g_sp + c(0.0, 1.5)) / dg;
        }
        let path = trace(origin, &cx).unwrap();
        let Terminal::Entrance { ball, point } = path.terminal else {
            panic!("expected an entrance, got {:?}", path.terminal);
        };
        assert_eq!(ball, 0);
        assert!(((point - c(-1.0, 0.0)).norm() - 0.4).abs() < 1e-9);
    }
}
