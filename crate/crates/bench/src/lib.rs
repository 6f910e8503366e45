//! Shared inputs for the benchmarks.

use quasisd::{Amplitude, ComplexPolynomial, EvaluationRequest};

/// Degree-9 phase with a degree-4 polynomial amplitude on [-1, 1].
pub fn digits_request(omega: f64, n: usize) -> EvaluationRequest {
    let g = ComplexPolynomial::from_real(&[3.0, 5.0, 6.0, 2.0, 9.0, 5.0, 1.0, 4.0, 1.0, 3.0]);
    let f = ComplexPolynomial::from_real(&[2.0, 8.0, 1.0, 7.0, 2.0]);
    EvaluationRequest::new((-1.0).into(), 1.0.into(), g, omega, n).with_amplitude(Amplitude::Poly(f))
}

/// `z^9` with `sin z` amplitude, the case with a single high-order stationary point.
pub fn monomial_request(omega: f64, n: usize) -> EvaluationRequest {
    let mut coeffs = vec![0.0; 10];
    coeffs[9] = 1.0;
    EvaluationRequest::new((-1.0).into(), 1.0.into(), ComplexPolynomial::from_real(&coeffs), omega, n)
        .with_amplitude(Amplitude::Sin)
}
