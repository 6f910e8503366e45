//! Gauss-Legendre and Gauss-Laguerre rules.
//!
//! Nodes start as eigenvalues of the symmetric tridiagonal Jacobi matrix and
//! are then Newton-refined against the three-term recurrence; weights come
//! from the closed-form derivative formulas rather than eigenvectors so that
//! tiny Laguerre weights keep full relative accuracy.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::twofold::TwoFold;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Family {
    Legendre,
    Laguerre,
}

type Cache = RwLock<HashMap<(Family, usize), Arc<QuadratureRule>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(family: Family, n: usize, build: fn(usize) -> QuadratureRule) -> Arc<QuadratureRule> {
    assert!(n >= 1, "a Gauss rule needs at least one node");
    if let Some(rule) = cache().read().unwrap().get(&(family, n)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build(n));
    let mut table = cache().write().unwrap();
    Arc::clone(table.entry((family, n)).or_insert(rule))
}

/// `n`-point Gauss-Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Arc<QuadratureRule> {
    cached(Family::Legendre, n, build_legendre)
}

/// `n`-point Gauss-Laguerre rule for `∫_0^∞ f(t) e^{-t} dt`, nodes ascending.
pub fn gauss_laguerre(n: usize) -> Arc<QuadratureRule> {
    cached(Family::Laguerre, n, build_laguerre)
}

fn jacobi_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
    }
    for (i, &b) in off.iter().enumerate() {
        m[(i, i + 1)] = b;
        m[(i + 1, i)] = b;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `(P_n(x), P_{n-1}(x))` in double-double.
fn legendre_pair(n: usize, x: f64) -> (TwoFold, TwoFold) {
    let xx = TwoFold::new(x);
    let (mut prev, mut cur) = (TwoFold::ONE, xx);
    if n == 0 {
        return (TwoFold::ONE, TwoFold::ZERO);
    }
    for k in 1..n {
        let next = (xx * cur * (2 * k + 1) as f64 - prev * k as f64) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn build_legendre(n: usize) -> QuadratureRule {
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let mut nodes = jacobi_eigenvalues(&vec![0.0; n], &off);
    let deriv = |x: f64| {
        let (p, q) = legendre_pair(n, x);
        let dp = (p * x - q) * n as f64 / (x * x - 1.0);
        (p.to_f64(), dp.to_f64())
    };
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = deriv(*x);
            let step = p / dp;
            *x -= step;
            if step.abs() <= f64::EPSILON * x.abs().max(1e-300) {
                break;
            }
        }
    }
    // exact symmetry about the origin
    for i in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, dp) = deriv(x);
            2.0 / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    QuadratureRule { nodes, weights }
}

const RESCALE: f64 = 1e150;

/// Laguerre recurrence up to degree `n + 1` in double-double with overflow
/// rescaling. Returns `(L_{n+1}, L_n, L_{n-1}, log_scale)`; the true values
/// are the returned ones times `e^{log_scale}`.
fn laguerre_triple(n: usize, x: f64) -> (TwoFold, TwoFold, TwoFold, f64) {
    let (mut lm1, mut l0) = (TwoFold::ZERO, TwoFold::ONE);
    let mut log_scale = 0.0;
    let mut history = (TwoFold::ZERO, TwoFold::ZERO);
    for k in 0..=n {
        let next = ((TwoFold::new((2 * k + 1) as f64) - TwoFold::new(x)) * l0 - lm1 * k as f64)
            / (k + 1) as f64;
        history = (l0, lm1);
        lm1 = l0;
        l0 = next;
        if l0.hi.abs() > RESCALE {
            l0 = l0 / RESCALE;
            lm1 = lm1 / RESCALE;
            history.0 = history.0 / RESCALE;
            history.1 = history.1 / RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (l0, history.0, history.1, log_scale)
}

fn build_laguerre(n: usize) -> QuadratureRule {
    let diag: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64).collect();
    let off: Vec<f64> = (1..n).map(|k| k as f64).collect();
    let mut nodes = jacobi_eigenvalues(&diag, &off);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (_, ln, lnm1, _) = laguerre_triple(n, *x);
            // L_n' = n (L_n - L_{n-1}) / x
            let step = (ln * *x / ((ln - lnm1) * n as f64)).to_f64();
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= f64::EPSILON * x.abs() {
                break;
            }
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (lnp1, _, _, log_scale) = laguerre_triple(n, x);
            let np1 = (n + 1) as f64;
            (x.ln() - 2.0 * np1.ln() - 2.0 * (lnp1.to_f64().abs().ln() + log_scale)).exp()
        })
        .collect();
    QuadratureRule { nodes, weights }
}
