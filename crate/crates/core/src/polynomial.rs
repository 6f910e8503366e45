//! Complex polynomials in ascending coefficient order, with root finding.
//!
//! Roots come from Aberth-Ehrlich simultaneous iteration on the rescaled
//! polynomial, with the eigenvalues of the companion matrix as a fallback, and
//! a single Newton polish per root. Either candidate set is accepted only if it
//! is backward stable.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Builds a polynomial from ascending coefficients `α_0, α_1, ...`.
    /// Trailing zero coefficients are trimmed; an empty slice is the zero polynomial.
    pub fn new(coeffs: impl Into<Vec<Complex64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        ComplexPolynomial { coeffs }
    }

    /// Builds a polynomial from descending coefficients `c_J, ..., c_0`.
    pub fn from_descending(coeffs: &[Complex64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect::<Vec<_>>())
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = ZERO;
        let mut deriv = ZERO;
        for &c in self.coeffs.iter().rev() {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        (value, deriv)
    }

    /// The derivative; a constant polynomial differentiates to zero.
    pub fn derivative(&self) -> ComplexPolynomial {
        if self.degree() == 0 {
            return ComplexPolynomial::new(vec![ZERO]);
        }
        ComplexPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Coefficients of `δ ↦ p(center + δ)`.
    pub fn taylor_shift(&self, center: Complex64) -> ComplexPolynomial {
        // repeated synthetic division
        let mut c = self.coeffs.clone();
        let n = c.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let upper = c[j + 1];
                c[j] += center * upper;
            }
        }
        ComplexPolynomial::new(c)
    }

    pub fn scale(&self, factor: Complex64) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coeffs.iter().map(|&c| c * factor).collect::<Vec<_>>())
    }

    /// Largest coefficient modulus.
    pub fn coefficient_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All `degree()` complex roots, repeated according to multiplicity.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() == 0 {
            return Err(Error::InvalidInput(
                "cannot compute roots of a constant polynomial".into(),
            ));
        }
        let zeros_at_origin = self.coeffs.iter().take_while(|&&c| c == ZERO).count();
        let reduced = &self.coeffs[zeros_at_origin..];
        let mut roots = vec![ZERO; zeros_at_origin];

        let m = reduced.len() - 1;
        let found = match m {
            0 => Vec::new(),
            1 => vec![-reduced[0] / reduced[1]],
            2 => quadratic_roots(reduced[2], reduced[1], reduced[0]),
            _ => aberth_roots(reduced)
                .or_else(|| companion_roots(reduced).filter(|r| backward_stable(reduced, r)))
                .ok_or(Error::RootsNotConverged { degree: m })?,
        };
        roots.extend(found.into_iter().map(|r| self.newton_polish(r)));
        Ok(roots)
    }

    fn newton_polish(&self, root: Complex64) -> Complex64 {
        let (value, deriv) = self.eval_with_derivative(root);
        if deriv == ZERO || value == ZERO {
            return root;
        }
        let candidate = root - value / deriv;
        if candidate.is_finite() && self.eval(candidate).norm() < value.norm() {
            candidate
        } else {
            root
        }
    }
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q == ZERO {
        return vec![ZERO, ZERO];
    }
    vec![q / a, c / q]
}

/// Radius used to rescale the variable so the monic coefficients are O(1).
fn root_scale(coeffs: &[Complex64]) -> f64 {
    let m = coeffs.len() - 1;
    let lead = coeffs[m].norm();
    let s = (0..m)
        .filter(|&k| coeffs[k] != ZERO)
        .map(|k| (coeffs[k].norm() / lead).powf(1.0 / (m - k) as f64))
        .fold(0.0, f64::max);
    if s > 0.0 && s.is_finite() {
        s
    } else {
        1.0
    }
}

/// Every root must satisfy `|p(z)| <= tol * sum |a_k| |z|^k`. The complex Schur
/// solver can stall (cyclic companion matrices such as `z^n - c`) and still
/// return diagonal entries that are not eigenvalues, which this catches.
fn backward_stable(coeffs: &[Complex64], roots: &[Complex64]) -> bool {
    let p = ComplexPolynomial::new(coeffs.to_vec());
    roots.iter().all(|&z| {
        let size = coeffs.iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm());
        p.eval(z).norm() <= 1e-9 * size
    })
}

fn companion_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let m = coeffs.len() - 1;
    let s = root_scale(coeffs);
    let lead = coeffs[m];
    // monic coefficients of w ↦ p(s w) / (α_m s^m)
    let monic: Vec<Complex64> = (0..m)
        .map(|k| coeffs[k] / lead * s.powi(k as i32 - m as i32))
        .collect();
    let mut companion = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m {
        companion[(0, j)] = -monic[m - 1 - j];
    }
    for i in 1..m {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = Schur::try_new(companion, f64::EPSILON, 30 * m)?;
    let (_, t) = schur.unpack();
    let roots: Vec<Complex64> = (0..m).map(|i| t[(i, i)] * s).collect();
    roots.iter().all(|r| r.is_finite()).then_some(roots)
}

fn aberth_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let p = ComplexPolynomial::new(coeffs.to_vec());
    let m = p.degree();
    let s = root_scale(coeffs);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(s, 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4))
        .collect();
    let mut done = vec![false; m];
    for _ in 0..1000 {
        for i in 0..m {
            if done[i] {
                continue;
            }
            let (v, d) = p.eval_with_derivative(z[i]);
            // residual indistinguishable from rounding in the evaluation
            let size = coeffs.iter().rev().fold(0.0, |acc, c| acc * z[i].norm() + c.norm());
            if v.norm() <= 4.0 * f64::EPSILON * size {
                done[i] = true;
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                    done[i] = true;
                }
            }
        }
        if done.iter().all(|&d| d) {
            return Some(z);
        }
    }
    // steps can stall at the rounding floor without meeting either test
    backward_stable(coeffs, &z).then_some(z)
}

/// Smallest root `r > 0` of a real polynomial (ascending coefficients).
///
/// Eigenvalue roots with `|Im| < 1e-8 (1 + |Re|)` count as real. When none is
/// found the search falls back to bisection on `[0, R]`, doubling `R` from 1
/// until a sign change is bracketed (giving up at `2^60`).
pub fn smallest_positive_real_root(coeffs: &[f64]) -> Option<f64> {
    let p = ComplexPolynomial::from_real(coeffs);
    if p.degree() == 0 {
        return None;
    }
    let real = |r: f64| p.eval(Complex64::new(r, 0.0)).re;
    let candidate = p.roots().ok().and_then(|roots| {
        roots
            .into_iter()
            .filter(|r| r.re > 0.0 && r.im.abs() < 1e-8 * (1.0 + r.re.abs()))
            .map(|r| polish_real_root(&p, r.re))
            .filter(|&r| r > 0.0)
            .min_by(f64::total_cmp)
    });
    candidate.or_else(|| bisect_first_sign_change(real))
}

fn polish_real_root(p: &ComplexPolynomial, mut r: f64) -> f64 {
    for _ in 0..4 {
        let (v, d) = p.eval_with_derivative(Complex64::new(r, 0.0));
        if d.re == 0.0 || v.re == 0.0 {
            break;
        }
        let next = r - v.re / d.re;
        if !next.is_finite() || p.eval(Complex64::new(next, 0.0)).re.abs() >= v.re.abs() {
            break;
        }
        r = next;
    }
    r
}

fn bisect_first_sign_change(f: impl Fn(f64) -> f64) -> Option<f64> {
    let f0 = f(0.0);
    let mut hi = 1.0;
    while f(hi).signum() == f0.signum() {
        hi *= 2.0;
        if hi > 2f64.powi(60) {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == f0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
