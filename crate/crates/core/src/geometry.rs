//! Geometry derived from the phase before any contour is traced: valleys at
//! infinity, non-oscillatory balls and their amalgamation, exits on ball
//! boundaries, and the region of no return around each valley.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomial::{smallest_positive_real_root, ComplexPolynomial};

/// Phase polynomial, its first two derivatives, the frequency, and the valleys.
#[derive(Debug, Clone)]
pub struct PhaseContext {
    pub g: ComplexPolynomial,
    pub dg: ComplexPolynomial,
    pub d2g: ComplexPolynomial,
    pub omega: f64,
    pub degree: usize,
    pub valleys: Vec<f64>,
}

impl PhaseContext {
    pub fn new(g: ComplexPolynomial, omega: f64) -> Result<Self> {
        if g.degree() < 1 {
            return Err(Error::InvalidInput("phase must have degree at least 1".into()));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        if g.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("phase coefficients must be finite".into()));
        }
        let dg = g.derivative();
        let d2g = dg.derivative();
        Ok(PhaseContext {
            degree: g.degree(),
            valleys: valleys(&g),
            g,
            dg,
            d2g,
            omega,
        })
    }

    /// `log |e^{iωg(z)}| = -ω Im g(z)`.
    pub fn log_magnitude(&self, z: Complex64) -> f64 {
        -self.omega * self.g.eval(z).im
    }

    /// `e^{iωg(z)}`.
    pub fn exponential(&self, z: Complex64) -> Complex64 {
        (Complex64::i() * self.omega * self.g.eval(z)).exp()
    }

    /// Half-width `π/(2J)` of each valley sector.
    pub fn sector_half_width(&self) -> f64 {
        PI / (2.0 * self.degree as f64)
    }
}

/// Centres of the `J` valley sectors, reduced to `[0, 2π)` and sorted.
pub fn valleys(g: &ComplexPolynomial) -> Vec<f64> {
    let j = g.degree() as f64;
    let arg = g.leading().arg();
    let mut angles: Vec<f64> = (1..=g.degree())
        .map(|m| (((2 * (m - 1)) as f64 + 0.5) * PI - arg) / j)
        .map(|a| a.rem_euclid(TAU))
        .map(|a| if a >= TAU { 0.0 } else { a })
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// `min_m |θ - 2πm|`, in `[0, π]`.
pub fn angular_distance(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    r.min(TAU - r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonOscBall {
    pub center: Complex64,
    pub radius: f64,
}

impl NonOscBall {
    /// Closed-ball membership.
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    pub fn contains_strictly(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Radius of the non-oscillatory ball around `center`.
///
/// Along each of `n_ball` rays the smallest `r > 0` with
/// `ω|g(center + r e^{iφ}) - g(center)| = C_ball` is found from a real
/// polynomial of degree `2J`; the radius is the smallest of these crossings.
pub fn ball_radius(center: Complex64, ctx: &PhaseContext, c_ball: f64, n_ball: usize) -> Result<f64> {
    // g(center + δ) - g(center) = Σ_{k≥1} γ_k δ^k
    let shifted = ctx.g.taylor_shift(center);
    let gamma = &shifted.coeffs()[1..];
    let j = gamma.len();
    let mut best: Option<f64> = None;
    for n in 1..=n_ball {
        let phi = TAU * n as f64 / n_ball as f64;
        let c: Vec<Complex64> = gamma
            .iter()
            .enumerate()
            .map(|(k, &g)| g * Complex64::from_polar(1.0, (k + 1) as f64 * phi))
            .collect();
        // |Σ c_k r^{k+1}|² as a real polynomial in r
        let mut u = vec![0.0; 2 * j + 1];
        for (k, ck) in c.iter().enumerate() {
            for (l, cl) in c.iter().enumerate() {
                u[k + l + 2] += (ck * cl.conj()).re;
            }
        }
        let w2 = ctx.omega * ctx.omega;
        u.iter_mut().for_each(|x| *x *= w2);
        u[0] -= c_ball * c_ball;
        if let Some(r) = smallest_positive_real_root(&u) {
            best = Some(best.map_or(r, |b: f64| b.min(r)));
        }
    }
    best.ok_or(Error::BallRadius { center })
}

/// A stationary point dropped during amalgamation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemovedPoint {
    pub point: Complex64,
    pub radius: f64,
    /// Index into [`NonOscRegion::balls`] of the surviving ball that absorbed it.
    pub cover: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NonOscRegion {
    pub balls: Vec<NonOscBall>,
    pub removed: Vec<RemovedPoint>,
}

impl NonOscRegion {
    pub fn contains(&self, z: Complex64) -> bool {
        self.balls.iter().any(|b| b.contains(z))
    }

    /// Index of the first ball containing `z` (closed).
    pub fn containing_ball(&self, z: Complex64) -> Option<usize> {
        self.balls.iter().position(|b| b.contains(z))
    }

    pub fn centers(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.balls.iter().map(|b| b.center)
    }
}

/// Separation `|ξ1 - ξ2| / max(r1, r2)`.
pub fn ball_separation(a: &NonOscBall, b: &NonOscBall) -> f64 {
    (a.center - b.center).norm() / a.radius.max(b.radius)
}

/// Iteratively drops the smaller of the closest pair of balls while their
/// separation is below `delta_ball`. Equal radii drop the later ball.
pub fn amalgamate(balls: &[NonOscBall], delta_ball: f64) -> NonOscRegion {
    let mut alive: Vec<bool> = vec![true; balls.len()];
    // absorbed_by[i] = index of the ball that was kept when i was removed
    let mut absorbed_by: Vec<Option<usize>> = vec![None; balls.len()];
    let mut order = Vec::new();

    loop {
        let live: Vec<usize> = (0..balls.len()).filter(|&i| alive[i]).collect();
        if live.len() <= 1 {
            break;
        }
        let mut closest: Option<(f64, usize, usize)> = None;
        for (a, &i) in live.iter().enumerate() {
            for &j in &live[a + 1..] {
                let d = ball_separation(&balls[i], &balls[j]);
                if closest.is_none_or(|(best, _, _)| d < best) {
                    closest = Some((d, i, j));
                }
            }
        }
        let (d, i, j) = closest.expect("at least one pair");
        if d >= delta_ball {
            break;
        }
        let (keep, drop) = if balls[i].radius >= balls[j].radius {
            (i, j)
        } else {
            (j, i)
        };
        alive[drop] = false;
        absorbed_by[drop] = Some(keep);
        order.push(drop);
    }

    let index_of: Vec<Option<usize>> = {
        let mut next = 0;
        alive
            .iter()
            .map(|&a| {
                a.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let survivors = balls
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(b, _)| *b)
        .collect();
    let removed = order
        .into_iter()
        .map(|i| {
            let mut k = i;
            while let Some(next) = absorbed_by[k] {
                k = next;
            }
            RemovedPoint {
                point: balls[i].center,
                radius: balls[i].radius,
                cover: index_of[k].expect("chain ends at a survivor"),
            }
        })
        .collect();
    NonOscRegion {
        balls: survivors,
        removed,
    }
}

/// A local minimum of `|e^{iωg}|` on a ball boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitPoint {
    pub location: Complex64,
    pub owner: usize,
}

const UNIT_CIRCLE_TOL: f64 = 1e-6;
const DEGENERATE_OFFSET: f64 = 1e-4;

/// Exits of every ball in `region`, ball by ball, sorted by angle within a ball.
pub fn exits(region: &NonOscRegion, ctx: &PhaseContext) -> Result<Vec<ExitPoint>> {
    let mut out = Vec::new();
    for (owner, ball) in region.balls.iter().enumerate() {
        let minima = boundary_minima(ball, ctx)?;
        out.extend(
            minima
                .into_iter()
                .filter(|&z| {
                    !region
                        .balls
                        .iter()
                        .enumerate()
                        .any(|(k, other)| k != owner && other.contains_strictly(z))
                })
                .map(|location| ExitPoint { location, owner }),
        );
    }
    Ok(out)
}

/// Local minima of `-Im g` on the circle `|z - center| = radius`.
fn boundary_minima(ball: &NonOscBall, ctx: &PhaseContext) -> Result<Vec<Complex64>> {
    let (xi, r) = (ball.center, ball.radius);
    let point = |theta: f64| xi + Complex64::from_polar(r, theta);
    let phi = |theta: f64| -ctx.g.eval(point(theta)).im;
    // dφ/dθ = -Re(g'(z) r e^{iθ}),  d²φ/dθ² = Im(g''(z) r² e^{2iθ} + g'(z) r e^{iθ})
    let d1 = |theta: f64| {
        let s = Complex64::from_polar(r, theta);
        -(ctx.dg.eval(xi + s) * s).re
    };
    let d2 = |theta: f64| {
        let s = Complex64::from_polar(r, theta);
        let z = xi + s;
        (ctx.d2g.eval(z) * s * s + ctx.dg.eval(z) * s).im
    };

    // g'(ξ + rs) r s = Σ_{m=1}^{J} c_m s^m with s = e^{iθ}; clearing s^{-J} from
    // the real part gives a degree-2J polynomial whose unit-modulus roots are
    // the critical angles.
    let beta = ctx.dg.taylor_shift(xi);
    let j = ctx.degree;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * j + 1];
    for m in 1..=j {
        let b = beta.coeffs().get(m - 1).copied().unwrap_or_default();
        let c = b * r.powi(m as i32);
        coeffs[j + m] += c;
        coeffs[j - m] += c.conj();
    }
    let trig = ComplexPolynomial::new(coeffs);
    if trig.degree() == 0 {
        return Err(Error::NoExits { center: xi });
    }
    let roots = trig.roots()?;

    let mut angles: Vec<f64> = Vec::new();
    for s in roots {
        if (s.norm() - 1.0).abs() >= UNIT_CIRCLE_TOL {
            continue;
        }
        let mut theta = s.arg();
        for _ in 0..3 {
            let (f1, f2) = (d1(theta), d2(theta));
            if f2 == 0.0 {
                break;
            }
            let step = f1 / f2;
            if !step.is_finite() || step.abs() > 1e-3 {
                break;
            }
            theta -= step;
        }
        angles.push(theta.rem_euclid(TAU));
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| angular_distance(*a - *b) < 1e-9);
    if angles.len() > 1 && angular_distance(angles[0] - angles[angles.len() - 1]) < 1e-9 {
        angles.pop();
    }

    let mut minima = Vec::new();
    for theta in angles {
        let z = point(theta);
        let curvature = d2(theta);
        let scale = r * ctx.dg.eval(z).norm() + r * r * ctx.d2g.eval(z).norm();
        let is_min = if curvature.abs() > 1e-10 * scale {
            curvature > 0.0
        } else {
            let centre = phi(theta);
            phi(theta - DEGENERATE_OFFSET) > centre && phi(theta + DEGENERATE_OFFSET) > centre
        };
        if is_min {
            minima.push(z);
        }
    }
    if minima.is_empty() {
        return Err(Error::NoExits { center: xi });
    }
    Ok(minima)
}

/// Radius beyond which points may belong to a region of no return.
#[derive(Debug, Clone, PartialEq)]
pub struct NoReturnData {
    pub r_star: f64,
    abs_coeffs: Vec<f64>,
}

impl NoReturnData {
    /// `G(r, θ) = J|α_J| r^{J-1} min(1/√2, cos Jθ) - Σ_{j=1}^{J-1} j|α_j| r^{j-1}`.
    pub fn g_function(&self, r: f64, theta: f64) -> f64 {
        let j = self.abs_coeffs.len() - 1;
        let jf = j as f64;
        let lead = jf * self.abs_coeffs[j] * r.powi(j as i32 - 1) * FRAC_1_SQRT_2.min((jf * theta).cos());
        let lower: f64 = (1..j)
            .map(|k| k as f64 * self.abs_coeffs[k] * r.powi(k as i32 - 1))
            .sum();
        lead - lower
    }
}

/// Solves `G(r, π/(4J)) = 0` for its unique positive root.
pub fn no_return_threshold(ctx: &PhaseContext) -> NoReturnData {
    let abs_coeffs: Vec<f64> = ctx.g.coeffs().iter().map(|c| c.norm()).collect();
    let j = ctx.degree;
    // coefficient of r^{k-1} is -k|α_k| for k < J, and J|α_J|/√2 for k = J
    let mut poly: Vec<f64> = (1..j).map(|k| -(k as f64) * abs_coeffs[k]).collect();
    poly.push(j as f64 * abs_coeffs[j] * FRAC_1_SQRT_2);
    let r_star = if poly[..poly.len() - 1].iter().all(|&c| c == 0.0) {
        0.0
    } else {
        smallest_positive_real_root(&poly).unwrap_or(0.0)
    };
    NoReturnData { r_star, abs_coeffs }
}

/// Membership of `z` in the region of no return of the valley at angle `valley`.
pub fn in_no_return_region(z: Complex64, valley: f64, ctx: &PhaseContext, data: &NoReturnData) -> bool {
    let r = z.norm();
    if r < data.r_star || r == 0.0 {
        return false;
    }
    let theta = angular_distance(z.arg() - valley);
    if theta >= ctx.sector_half_width() {
        return false;
    }
    data.g_function(r, theta) > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx(coeffs: &[Complex64], omega: f64) -> PhaseContext {
        PhaseContext::new(ComplexPolynomial::new(coeffs.to_vec()), omega).unwrap()
    }

    fn airy(x: f64) -> PhaseContext {
        // -i (z³/3 - x z)
        ctx(&[c(0.0, 0.0), c(0.0, x), c(0.0, 0.0), c(0.0, -1.0 / 3.0)], 1.0)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn valley_examples() {
        assert_eq!(valleys(&ComplexPolynomial::from_real(&[0.0, 1.0])), vec![PI / 2.0]);
        let v = airy(0.0).valleys;
        for (a, b) in v.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
            assert!(close(*a, b, 1e-14));
        }
        let mut z9 = vec![0.0; 10];
        z9[9] = 1.0;
        let v = valleys(&ComplexPolynomial::from_real(&z9));
        for (k, a) in v.iter().enumerate() {
            assert!(close(*a, (4 * k + 1) as f64 * PI / 18.0, 1e-14));
        }
    }

    #[test]
    fn angular_distance_examples() {
        assert!(close(angular_distance(TAU + 0.1), 0.1, 1e-15));
        assert!(close(angular_distance(-PI), PI, 1e-15));
        assert!(close(angular_distance(3.5 * PI), 0.5 * PI, 1e-15));
    }

    #[test]
    fn monomial_ball_radius() {
        let cb = TAU;
        for j in [2usize, 3, 5, 9] {
            let mut coeffs = vec![c(0.0, 0.0); j + 1];
            coeffs[j] = c(1.0, 0.0);
            for omega in [1.0, 40.0, 1e4] {
                let r = ball_radius(c(0.0, 0.0), &ctx(&coeffs, omega), cb, 16).unwrap();
                assert!(close(r, (cb / omega).powf(1.0 / j as f64), 1e-12), "J={j} ω={omega}");
            }
        }
    }

    #[test]
    fn cubic_ball_radius_closed_form() {
        let phase = ctx(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)], TAU);
        let r = ball_radius(c(0.0, 0.0), &phase, TAU, 16).unwrap();
        assert!(close(r, 3f64.cbrt(), 1e-12));
        let half = ctx(phase.g.coeffs(), TAU / 2.0);
        let r2 = ball_radius(c(0.0, 0.0), &half, TAU, 16).unwrap();
        assert!(close(r2 / r, 2f64.cbrt(), 1e-12));
    }

    #[test]
    fn amalgamate_exact_coalescence() {
        let b = NonOscBall { center: c(0.5, 0.5), radius: 1.0 };
        let region = amalgamate(&[b, b], 0.01);
        assert_eq!(region.balls.len(), 1);
        assert_eq!(region.removed.len(), 1);
        assert_eq!(region.removed[0].cover, 0);
    }

    #[test]
    fn amalgamate_boundary_keeps_both() {
        let delta = 0.25;
        let a = NonOscBall { center: c(0.0, 0.0), radius: 2.0 };
        let b = NonOscBall { center: c(0.5, 0.0), radius: 1.0 };
        assert_eq!(ball_separation(&a, &b), delta);
        assert_eq!(amalgamate(&[a, b], delta).balls.len(), 2);
    }

    #[test]
    fn amalgamate_drops_smaller_radius() {
        let small = NonOscBall { center: c(0.0, 0.0), radius: 1.0 };
        let big = NonOscBall { center: c(0.001, 0.0), radius: 1.5 };
        let region = amalgamate(&[small, big], 0.01);
        assert_eq!(region.balls, vec![big]);
        assert_eq!(region.removed[0].point, small.center);
    }

    #[test]
    fn amalgamate_chain_resolves_to_survivor() {
        let balls = [
            NonOscBall { center: c(0.0, 0.0), radius: 1.0 },
            NonOscBall { center: c(0.0005, 0.0), radius: 1.1 },
            NonOscBall { center: c(0.0011, 0.0), radius: 1.2 },
        ];
        let region = amalgamate(&balls, 0.001);
        assert_eq!(region.balls, vec![balls[2]]);
        assert!(region.removed.iter().all(|r| r.cover == 0));
    }

    fn exit_angles(phase: &PhaseContext, radius: f64) -> Vec<f64> {
        let region = NonOscRegion {
            balls: vec![NonOscBall { center: c(0.0, 0.0), radius }],
            removed: Vec::new(),
        };
        let mut a: Vec<f64> = exits(&region, phase)
            .unwrap()
            .iter()
            .map(|e| e.location.arg().rem_euclid(TAU))
            .collect();
        a.sort_by(f64::total_cmp);
        a
    }

    #[test]
    fn quadratic_exits() {
        let phase = ctx(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 3.0);
        let a = exit_angles(&phase, 0.7);
        assert_eq!(a.len(), 2);
        assert!(close(a[0], PI / 4.0, 1e-10) && close(a[1], 5.0 * PI / 4.0, 1e-10));
    }

    #[test]
    fn cubic_exits() {
        let phase = ctx(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)], 1.0);
        let a = exit_angles(&phase, 1.3);
        let want = [PI / 6.0, 5.0 * PI / 6.0, 1.5 * PI];
        assert_eq!(a.len(), 3);
        for (x, y) in a.iter().zip(want) {
            assert!(close(*x, y, 1e-10));
        }
    }

    #[test]
    fn exits_inside_other_ball_are_dropped() {
        let phase = ctx(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 3.0);
        let radius = 1.0;
        let at = Complex64::from_polar(radius, PI / 4.0);
        let region = NonOscRegion {
            balls: vec![
                NonOscBall { center: c(0.0, 0.0), radius },
                NonOscBall { center: at, radius: 0.1 },
            ],
            removed: Vec::new(),
        };
        let found = exits(&region, &phase).unwrap();
        assert!(found.iter().filter(|e| e.owner == 0).all(|e| (e.location - at).norm() > 0.05));
        assert_eq!(found.iter().filter(|e| e.owner == 0).count(), 1);
    }

    #[test]
    fn no_return_threshold_examples() {
        let mono = ctx(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1.0);
        assert_eq!(no_return_threshold(&mono).r_star, 0.0);
        let cubic = ctx(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)], 1.0);
        let data = no_return_threshold(&cubic);
        assert!(close(data.r_star, 2f64.powf(0.25), 1e-13));
        assert!(data.g_function(data.r_star, PI / 12.0).abs() < 1e-10);
        let scaled = ctx(cubic.g.scale(c(7.5, 0.0)).coeffs(), 1.0);
        assert!(close(no_return_threshold(&scaled).r_star, data.r_star, 1e-13));
    }

    #[test]
    fn no_return_membership() {
        let quad = ctx(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1.0);
        let data = no_return_threshold(&quad);
        assert!(in_no_return_region(Complex64::from_polar(1.0, PI / 4.0), PI / 4.0, &quad, &data));
        let edge = Complex64::from_polar(2.0, PI / 4.0 + PI / 4.0);
        assert!(!in_no_return_region(edge, PI / 4.0, &quad, &data));

        let phase = airy(-3.0);
        let data = no_return_threshold(&phase);
        for sp in phase.dg.roots().unwrap() {
            for &v in &phase.valleys {
                assert!(!in_no_return_region(sp, v, &phase, &data));
            }
        }
    }
}
