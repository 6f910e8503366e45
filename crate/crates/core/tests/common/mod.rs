#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use quasisd::{Amplitude, ComplexPolynomial, Endpoint, EvaluationRequest};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn digits_phase() -> ComplexPolynomial {
    ComplexPolynomial::from_descending(
        &[3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0].map(|x| c(x, 0.0)),
    )
}

pub fn digits_amplitude() -> ComplexPolynomial {
    ComplexPolynomial::from_descending(&[2.0, 7.0, 1.0, 8.0, 2.0].map(|x| c(x, 0.0)))
}

pub fn digits_request(omega: f64, n: usize) -> EvaluationRequest {
    EvaluationRequest::new((-1.0).into(), 1.0.into(), digits_phase(), omega, n)
        .with_amplitude(Amplitude::Poly(digits_amplitude()))
}

pub fn airy_phase(x: f64) -> ComplexPolynomial {
    ComplexPolynomial::new(vec![c(0.0, 0.0), c(0.0, x), c(0.0, 0.0), c(0.0, -1.0 / 3.0)])
}

/// The contour integral of `e^{z³/3 - xz}` equals `2πi Ai(x)`.
pub fn airy_request(x: f64, n: usize) -> EvaluationRequest {
    EvaluationRequest::new(Endpoint::infinite(-PI / 3.0), Endpoint::infinite(PI / 3.0), airy_phase(x), 1.0, n)
        .with_amplitude(Amplitude::constant(c(0.0, -1.0 / TAU)))
}

pub fn monomial_phase() -> ComplexPolynomial {
    let mut coeffs = vec![c(0.0, 0.0); 10];
    coeffs[9] = c(1.0, 0.0);
    ComplexPolynomial::new(coeffs)
}

pub fn monomial_request(omega: f64, n: usize) -> EvaluationRequest {
    EvaluationRequest::new((-1.0).into(), 1.0.into(), monomial_phase(), omega, n).with_amplitude(Amplitude::Sin)
}

pub fn coalescence_phase(r: f64) -> ComplexPolynomial {
    let mut coeffs = vec![c(0.0, 0.0); 8];
    coeffs[7] = c(1.0 / 7.0, 0.0);
    coeffs[1] = c(-r.powi(6), 0.0);
    ComplexPolynomial::new(coeffs)
}

pub fn coalescence_request(r: f64, omega: f64, n: usize) -> EvaluationRequest {
    EvaluationRequest::new((-1.0).into(), 1.0.into(), coalescence_phase(r), omega, n)
}

/// `t⁴ + y t² + x t`
pub fn pearcey_phase(x: f64, y: f64) -> ComplexPolynomial {
    ComplexPolynomial::from_real(&[0.0, x, y, 0.0, 1.0])
}

/// `t⁵ + z t³ + y t² + x t`
pub fn swallowtail_phase(x: f64, y: f64, z: f64) -> ComplexPolynomial {
    ComplexPolynomial::from_real(&[0.0, x, y, z, 0.0, 1.0])
}

/// Integral over the real line, entered as directions π and 0.
pub fn real_line_request(g: ComplexPolynomial, n: usize) -> EvaluationRequest {
    EvaluationRequest::new(Endpoint::infinite(PI), Endpoint::infinite(0.0), g, 1.0, n)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Ray directions equivalent to the real line for a phase with positive
/// leading coefficient: each half-line is rotated towards the side where the
/// closing arc decays. The rotation is kept shallow (a quarter of the way to
/// the valley centre) so lower-order terms cannot make the integrand huge
/// near the origin.
pub fn real_line_rays(degree: usize) -> (f64, f64) {
    let half = PI / (8.0 * degree as f64);
    let left = if degree.is_multiple_of(2) { PI + half } else { PI - half };
    (left, half)
}

/// Random phase of degree `degree` whose stationary points form clusters, so
/// that amalgamation has work to do.
pub fn clustered_phase(rng: &mut impl rand::Rng, degree: usize) -> ComplexPolynomial {
    let centers: Vec<Complex64> = (0..2)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let roots: Vec<Complex64> = (0..degree - 1)
        .map(|k| {
            let spread = 10f64.powf(rng.random_range(-4.0..-0.5));
            centers[k % 2] + c(rng.random_range(-spread..spread), rng.random_range(-spread..spread))
        })
        .collect();
    // g' = Π (z - ξ_k), then integrate term by term
    let mut dg = vec![c(1.0, 0.0)];
    for &r in &roots {
        let mut next = vec![c(0.0, 0.0); dg.len() + 1];
        for (k, &a) in dg.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        dg = next;
    }
    let mut g = vec![c(0.0, 0.0)];
    g.extend(dg.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
    ComplexPolynomial::new(g)
}

/// Random phase with coefficients in the unit disc and a leading coefficient
/// bounded away from zero.
pub fn random_phase(rng: &mut impl rand::Rng, degree: usize) -> ComplexPolynomial {
    let mut coeffs: Vec<Complex64> = (0..=degree)
        .map(|_| Complex64::from_polar(rng.random_range(0.0..1.0), rng.random_range(0.0..TAU)))
        .collect();
    coeffs[degree] = Complex64::from_polar(rng.random_range(0.5..1.0), rng.random_range(0.0..TAU));
    ComplexPolynomial::new(coeffs)
}
