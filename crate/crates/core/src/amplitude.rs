use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::polynomial::ComplexPolynomial;

/// Entire amplitude `f` multiplying the oscillator.
#[derive(Clone, Default)]
pub enum Amplitude {
    #[default]
    One,
    Sin,
    Cos,
    Exp,
    Poly(ComplexPolynomial),
    Custom(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

impl Amplitude {
    pub fn constant(c: Complex64) -> Self {
        Amplitude::Poly(ComplexPolynomial::new(vec![c]))
    }

    pub fn custom(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Amplitude::Custom(Arc::new(f))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Amplitude::One => Complex64::new(1.0, 0.0),
            Amplitude::Sin => z.sin(),
            Amplitude::Cos => z.cos(),
            Amplitude::Exp => z.exp(),
            Amplitude::Poly(p) => p.eval(z),
            Amplitude::Custom(f) => f(z),
        }
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amplitude::One => f.write_str("One"),
            Amplitude::Sin => f.write_str("Sin"),
            Amplitude::Cos => f.write_str("Cos"),
            Amplitude::Exp => f.write_str("Exp"),
            Amplitude::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            Amplitude::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}
