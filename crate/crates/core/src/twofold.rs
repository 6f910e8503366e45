//! Minimal double-double arithmetic (unevaluated sum of two `f64`s).
//!
//! Only what the rule generators and the series oracle need.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoFold {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl TwoFold {
    pub const ZERO: TwoFold = TwoFold { hi: 0.0, lo: 0.0 };
    pub const ONE: TwoFold = TwoFold { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        TwoFold { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for TwoFold {
    fn from(x: f64) -> Self {
        TwoFold::new(x)
    }
}

impl Neg for TwoFold {
    type Output = TwoFold;
    fn neg(self) -> TwoFold {
        TwoFold {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for TwoFold {
    type Output = TwoFold;
    fn add(self, rhs: TwoFold) -> TwoFold {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        TwoFold { hi, lo }
    }
}

impl Sub for TwoFold {
    type Output = TwoFold;
    fn sub(self, rhs: TwoFold) -> TwoFold {
        self + (-rhs)
    }
}

impl Mul for TwoFold {
    type Output = TwoFold;
    fn mul(self, rhs: TwoFold) -> TwoFold {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        TwoFold { hi, lo }
    }
}

impl Mul<f64> for TwoFold {
    type Output = TwoFold;
    fn mul(self, rhs: f64) -> TwoFold {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        TwoFold { hi, lo }
    }
}

impl Div<f64> for TwoFold {
    type Output = TwoFold;
    fn div(self, rhs: f64) -> TwoFold {
        let q1 = self.hi / rhs;
        let r = self - TwoFold::new(rhs) * q1;
        let q2 = r.hi / rhs;
        let r = r - TwoFold::new(rhs) * q2;
        let q3 = r.hi / rhs;
        let (hi, lo) = quick_two_sum(q1, q2);
        TwoFold { hi, lo } + TwoFold::new(q3)
    }
}

impl Div for TwoFold {
    type Output = TwoFold;
    fn div(self, rhs: TwoFold) -> TwoFold {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        TwoFold { hi, lo } + TwoFold::new(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_plain_f64() {
        let tiny = 1e-20;
        let s = TwoFold::new(1.0) + TwoFold::new(tiny) - TwoFold::new(1.0);
        assert_eq!(s.to_f64(), tiny);
        let third = TwoFold::ONE / 3.0;
        let back = third * 3.0 - TwoFold::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let q = TwoFold::new(2.0) / TwoFold::new(7.0) * TwoFold::new(7.0);
        assert!((q - TwoFold::new(2.0)).to_f64().abs() < 1e-31);
    }
}
