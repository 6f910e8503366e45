//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use common::*;
use num_complex::Complex64;
use quasisd::geometry::{amalgamate, ball_radius, in_no_return_region, no_return_threshold, NonOscBall, PhaseContext};
use quasisd::oracle::{adaptive_finite, airy_series, reference_infinite, OracleEndpoint};
use quasisd::quadrature::{gauss_laguerre, gauss_legendre};
use quasisd::{evaluate, Amplitude, EdgeKind, EvaluationRequest, EvaluationResult, Parameters};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn airy_uniform() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_x = 0.0;
    for k in 0..=140 {
        let x = -10.0 + 0.1 * k as f64;
        let value = evaluate(&airy_request(x, 30)).map_err(|e| format!("x={x:.1}: {e}"))?.value;
        let reference = if x.abs() <= 8.0 {
            airy_series(x).map_err(|e| e.to_string())?
        } else {
            let f = |_: Complex64| c(0.0, -1.0 / TAU);
            let a = OracleEndpoint::Direction(-PI / 3.0);
            let b = OracleEndpoint::Direction(PI / 3.0);
            reference_infinite(&f, airy_phase(x).coeffs(), 1.0, a, b, 1e-13)
                .map_err(|e| e.to_string())?
                .value
        };
        let err = (value - reference).norm();
        if err > worst {
            worst = err;
            worst_x = x;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-11 && secs < 10.0,
        format!("max abs error {worst:.2e} at x={worst_x:.1}, {secs:.2} s"),
    )
}

fn digits_oracle() -> Outcome {
    let amplitude = digits_amplitude();
    let mut worst: f64 = 0.0;
    let mut engine_secs = 0.0;
    for omega in [0.01, 1.0, 5.0, 50.0] {
        let start = Instant::now();
        let value = evaluate(&digits_request(omega, 40)).map_err(|e| format!("ω={omega}: {e}"))?.value;
        engine_secs += start.elapsed().as_secs_f64();
        let f = |z| amplitude.eval(z);
        let reference = adaptive_finite(&f, digits_phase().coeffs(), omega, c(-1.0, 0.0), c(1.0, 0.0), 1e-12)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max(rel_err(value, reference));
    }
    check(
        worst <= 1e-8 && engine_secs < 5.0,
        format!("max rel error {worst:.2e}, engine {engine_secs:.2} s"),
    )
}

fn monomial() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for omega in [1e3, 1e4] {
        let value = evaluate(&monomial_request(omega, 50)).map_err(|e| e.to_string())?.value;
        let reference = adaptive_finite(&|z| z.sin(), monomial_phase().coeffs(), omega, c(-1.0, 0.0), c(1.0, 0.0), 1e-13)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max(rel_err(value, reference));
    }
    let coarse = evaluate(&monomial_request(1e5, 50)).map_err(|e| e.to_string())?.value;
    let fine = evaluate(&monomial_request(1e5, 200)).map_err(|e| e.to_string())?.value;
    let self_err = rel_err(coarse, fine);
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-10 && self_err <= 1e-10 && secs < 30.0,
        format!("oracle rel {worst:.2e}, N=50 vs N=200 at ω=1e5 {self_err:.2e}, {secs:.2} s"),
    )
}

fn coalescence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in [1.0, 0.5, 0.35, 1e-2, 1e-4, 0.0] {
        let coarse = evaluate(&coalescence_request(r, 1000.0, 50)).map_err(|e| format!("r={r}: {e}"))?.value;
        let fine = evaluate(&coalescence_request(r, 1000.0, 200)).map_err(|e| format!("r={r}: {e}"))?.value;
        worst = worst.max(rel_err(coarse, fine));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-6 && secs < 10.0, format!("max rel N=50 vs N=200 {worst:.2e}, {secs:.2} s"))
}

fn frequency_cost() -> Outcome {
    let omegas = [10.0, 1e2, 1e3, 1e4];
    let mut times = Vec::new();
    let mut totals = Vec::new();
    for &omega in &omegas {
        let req = digits_request(omega, 40);
        let mut best = f64::INFINITY;
        let mut n_total = 0;
        for _ in 0..3 {
            let start = Instant::now();
            n_total = evaluate(&req).map_err(|e| e.to_string())?.n_total;
            best = best.min(start.elapsed().as_secs_f64());
        }
        times.push(best);
        totals.push(n_total);
    }
    let mut sorted = times.clone();
    sorted.sort_by(f64::total_cmp);
    let median = 0.5 * (sorted[1] + sorted[2]);
    check(
        times[3] <= 2.0 * median && totals[3] <= totals[0],
        format!(
            "times {:?} s, median {median:.4}, n_total {totals:?}",
            times.iter().map(|t| (t * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn gauss_exactness() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for n in 1..=60 {
        let leg = gauss_legendre(n);
        let lag = gauss_laguerre(n);
        let mut factorial = 1.0f64;
        for k in 0..2 * n {
            if k > 0 {
                factorial *= k as f64;
            }
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k + 1) as f64 };
            let approx: f64 = leg.iter().map(|(t, w)| w * t.powi(k as i32)).sum();
            worst = worst.max((approx - exact).abs() / exact.max(1.0));
            let approx: f64 = lag.iter().map(|(t, w)| w * t.powi(k as i32)).sum();
            worst = worst.max(((approx - factorial) / factorial).abs());
        }
    }
    Ok(worst)
}

/// Largest `|Re g(h) - Re g(η)| / (δ_fine (1 + |g'(h)|))` over contour nodes.
fn real_part_drift(result: &EvaluationResult, g: &quasisd::ComplexPolynomial, delta_fine: f64) -> f64 {
    let Some(graph) = &result.graph else { return 0.0 };
    let dg = g.derivative();
    let mut worst: f64 = 0.0;
    for contribution in result.contributions.iter().filter(|c| !c.skipped) {
        if let EdgeKind::SDContour { path } = graph.edges[contribution.edge].kind {
            let origin = result.paths[path].g_origin();
            for &h in &contribution.nodes {
                let drift = (g.eval(h).re - origin.re).abs();
                worst = worst.max(drift / (delta_fine * (1.0 + dg.eval(h).norm())));
            }
        }
    }
    worst
}

fn real_part_constancy() -> Result<f64, String> {
    let mut requests: Vec<EvaluationRequest> = [0.01, 1.0, 5.0, 50.0].iter().map(|&w| digits_request(w, 40)).collect();
    requests.extend([-9.0, -5.0, -1.0, 0.0, 2.0, 4.0].iter().map(|&x| airy_request(x, 30)));
    requests.extend([1e3, 1e5].iter().map(|&w| monomial_request(w, 50)));
    requests.extend([1.0, 0.35, 1e-4, 0.0].iter().map(|&r| coalescence_request(r, 1000.0, 50)));
    requests.extend([(0.0, 0.0), (3.0, -5.0)].iter().map(|&(x, y)| real_line_request(pearcey_phase(x, y), 50)));
    requests.push(real_line_request(swallowtail_phase(1.0, -2.0, -7.5), 50));
    let mut worst: f64 = 0.0;
    for req in &requests {
        let result = evaluate(req).map_err(|e| e.to_string())?;
        worst = worst.max(real_part_drift(&result, &req.g, req.params.delta_fine));
    }
    Ok(worst)
}

/// Samples points of each claimed region of no return and checks that `g'`
/// is nonzero and a short forward-Euler descent step stays inside.
fn no_return_sampling(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut violations = 0;
    for _ in 0..20 {
        let degree = rng.random_range(2..=9);
        let ctx = PhaseContext::new(random_phase(rng, degree), 1.0).map_err(|e| e.to_string())?;
        let data = no_return_threshold(&ctx);
        let half = ctx.sector_half_width();
        for &valley in &ctx.valleys {
            let mut accepted = 0;
            let mut attempts = 0;
            while accepted < 1000 && attempts < 100_000 {
                attempts += 1;
                let r = data.r_star.max(1e-3) * 10f64.powf(rng.random_range(0.0..2.0));
                let z = Complex64::from_polar(r, valley + rng.random_range(-half..half));
                if !in_no_return_region(z, valley, &ctx, &data) {
                    continue;
                }
                accepted += 1;
                let slope = ctx.dg.eval(z);
                if slope.norm() == 0.0 {
                    violations += 1;
                    continue;
                }
                let step = Complex64::i() / slope;
                let next = z + step * (1e-6 * r / step.norm());
                if !in_no_return_region(next, valley, &ctx, &data) {
                    violations += 1;
                }
            }
        }
    }
    Ok(violations)
}

/// Removal measurements on clustered random phases: the distance from each
/// removed point to its covering centre against `n δ r` and `r / 2`.
fn removal_measurements(rng: &mut ChaCha8Rng) -> Result<(f64, f64, usize), String> {
    let mut worst_prop: f64 = 0.0;
    let mut worst_cor: f64 = 0.0;
    let mut removals = 0;
    for _ in 0..200 {
        let degree = rng.random_range(3..=9);
        let omega = 10f64.powf(rng.random_range(0.0..3.0));
        let ctx = PhaseContext::new(clustered_phase(rng, degree), omega).map_err(|e| e.to_string())?;
        let stationary = ctx.dg.roots().map_err(|e| e.to_string())?;
        let params = Parameters::new(10);
        let balls = stationary
            .iter()
            .map(|&xi| ball_radius(xi, &ctx, params.c_ball, params.n_ball).map(|radius| NonOscBall { center: xi, radius }))
            .collect::<quasisd::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        for delta in [params.delta_ball_for(degree), 1.0 / (2.0 * (degree - 2) as f64)] {
            let region = amalgamate(&balls, delta);
            let n = region.removed.len() as f64;
            removals += region.removed.len();
            for removed in &region.removed {
                let cover = region.balls[removed.cover];
                let dist = (removed.point - cover.center).norm();
                worst_prop = worst_prop.max(dist / (n * delta * cover.radius));
                worst_cor = worst_cor.max(dist / (0.5 * cover.radius));
            }
        }
    }
    Ok((worst_prop, worst_cor, removals))
}

fn antisymmetry(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let degree = rng.random_range(2..=6);
        let g = random_phase(rng, degree);
        let a = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let b = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let omega = 10f64.powf(rng.random_range(-1.0..2.0));
        let forward = EvaluationRequest::new(a.into(), b.into(), g.clone(), omega, 20).with_amplitude(Amplitude::Cos);
        let backward = EvaluationRequest::new(b.into(), a.into(), g, omega, 20).with_amplitude(Amplitude::Cos);
        let fwd = evaluate(&forward).map_err(|e| e.to_string())?.value;
        let bwd = evaluate(&backward).map_err(|e| e.to_string())?.value;
        worst = worst.max(rel_err(-bwd, fwd));
    }
    Ok(worst)
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let gauss = gauss_exactness()?;
    let drift = real_part_constancy()?;
    let violations = no_return_sampling(&mut rng)?;
    let (prop, cor, removals) = removal_measurements(&mut rng)?;
    let anti = antisymmetry(&mut rng)?;
    check(
        gauss <= 1e-13 && drift <= 10.0 && violations == 0 && prop <= 1.0 && cor <= 1.0 && removals > 0 && anti <= 1e-12,
        format!(
            "gauss {gauss:.1e}, Re g drift {drift:.2}·δ_fine(1+|g'|), no-return violations {violations}, \
             removal ratios {prop:.3}/{cor:.3} over {removals} removals, antisymmetry {anti:.1e}"
        ),
    )
}

fn cuspoid_reference(g: &quasisd::ComplexPolynomial) -> Result<Complex64, String> {
    let (left, right) = real_line_rays(g.degree());
    let one = |_: Complex64| c(1.0, 0.0);
    reference_infinite(&one, g.coeffs(), 1.0, OracleEndpoint::Direction(left), OracleEndpoint::Direction(right), 1e-8)
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

fn cuspoids() -> Outcome {
    let points = [(0.0, 0.0), (1.0, -2.0), (-3.0, 4.0), (5.0, -7.0), (-7.5, 7.5)];
    let mut worst: f64 = 0.0;
    for &(x, y) in &points {
        for g in [pearcey_phase(x, y), swallowtail_phase(x, y, -7.5)] {
            let value = evaluate(&real_line_request(g.clone(), 50)).map_err(|e| format!("({x},{y}): {e}"))?.value;
            worst = worst.max((value - cuspoid_reference(&g)?).norm());
        }
    }
    let start = Instant::now();
    for i in 0..100 {
        for j in 0..100 {
            let x = -8.0 + 16.0 * i as f64 / 99.0;
            let y = -8.0 + 16.0 * j as f64 / 99.0;
            evaluate(&real_line_request(pearcey_phase(x, y), 50)).map_err(|e| format!("grid ({x},{y}): {e}"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-6 && secs < 120.0,
        format!("max abs error {worst:.2e}, 100x100 grid {secs:.1} s ({:.4} s/instance)", secs / 1e4),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 airy uniform accuracy", airy_uniform),
        ("2 digits-of-pi oracle equivalence", digits_oracle),
        ("3 monomial order-8 stationary point", monomial),
        ("4 coalescence robustness", coalescence),
        ("5 frequency-independent cost", frequency_cost),
        ("6 property suites", property_suites),
        ("7 cuspoid spot checks", cuspoids),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
