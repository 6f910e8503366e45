//! Brute-force reference integrals for testing.
//!
//! Deliberately shares nothing with the contour machinery: the phase is
//! evaluated with a local Horner loop, integration runs along straight
//! segments with an adaptive Gauss-Kronrod pair.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::twofold::TwoFold;

const MAX_PANELS: usize = 1 << 20;
/// Rays are cut where the integrand is this far (in log magnitude) below its peak.
const TAIL_DROP: f64 = 45.0;
const MAX_RAY_RADIUS: f64 = 1e6;

// 21-point Kronrod abscissae and weights, with the embedded 10-point Gauss weights.
// Digits are kept as tabulated.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_815_200,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: Complex64,
    /// Sum of Kronrod/Gauss discrepancies over the accepted panels.
    pub error_estimate: f64,
    pub panels: usize,
}

/// Endpoint for [`reference_infinite`]: a point, or a valley direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleEndpoint {
    Point(Complex64),
    Direction(f64),
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Kronrod estimate and its distance from the embedded Gauss estimate on
/// `[z0, z1]`.
fn kronrod_panel(h: &dyn Fn(Complex64) -> Complex64, z0: Complex64, z1: Complex64) -> (Complex64, f64) {
    let mid = (z0 + z1) * 0.5;
    let half = (z1 - z0) * 0.5;
    let centre = h(mid);
    let mut kronrod = centre * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for k in 0..10 {
        let pair = h(mid - half * XGK[k]) + h(mid + half * XGK[k]);
        kronrod += pair * WGK[k];
        if k % 2 == 1 {
            gauss += pair * WG[k / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

fn adaptive(h: &dyn Fn(Complex64) -> Complex64, z0: Complex64, z1: Complex64, tol: f64) -> Result<OracleResult> {
    if z0 == z1 {
        return Ok(OracleResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels: 0,
        });
    }
    // each level bisects every panel whose discrepancy exceeds tol / panel count
    let mut pending = vec![(z0, z1)];
    let mut value = Complex64::new(0.0, 0.0);
    let mut error_estimate = 0.0;
    let mut accepted = 0usize;
    while !pending.is_empty() {
        let count = accepted + pending.len();
        if count > MAX_PANELS {
            return Err(Error::OracleBudget);
        }
        let mut next = Vec::new();
        for (a, b) in pending {
            let (v, err) = kronrod_panel(h, a, b);
            if !v.is_finite() {
                return Err(Error::OracleBudget);
            }
            if err < tol / count as f64 {
                value += v;
                error_estimate += err;
                accepted += 1;
            } else {
                let m = (a + b) * 0.5;
                next.push((a, m));
                next.push((m, b));
            }
        }
        pending = next;
    }
    Ok(OracleResult {
        value,
        error_estimate,
        panels: accepted,
    })
}

/// `∫ f(z) e^{iωg(z)} dz` along the straight segment from `z0` to `z1`, with
/// `g` given by ascending coefficients.
pub fn adaptive_finite(
    f: &dyn Fn(Complex64) -> Complex64,
    g: &[Complex64],
    omega: f64,
    z0: Complex64,
    z1: Complex64,
    tol: f64,
) -> Result<OracleResult> {
    let h = |z: Complex64| f(z) * (Complex64::i() * omega * horner(g, z)).exp();
    adaptive(&h, z0, z1, tol)
}

/// Radius along direction `theta` beyond which the integrand stays more than
/// `TAIL_DROP` below its running peak.
fn ray_cutoff(f: &dyn Fn(Complex64) -> Complex64, g: &[Complex64], omega: f64, theta: f64) -> Result<f64> {
    let dir = Complex64::from_polar(1.0, theta);
    let log_mag = |r: f64| {
        let z = dir * r;
        f(z).norm().ln() - omega * horner(g, z).im
    };
    let samples = 64;
    let mut peak = f64::NEG_INFINITY;
    let mut r = 1.0;
    while r <= MAX_RAY_RADIUS {
        for k in 0..=samples {
            peak = peak.max(log_mag(r * k as f64 / samples as f64));
        }
        // the far half of the window must already sit below the cutoff
        let tail_ok = (samples / 2..=samples).all(|k| log_mag(r * k as f64 / samples as f64) < peak - TAIL_DROP);
        if tail_ok && log_mag(2.0 * r) < peak - TAIL_DROP {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::OracleNoDecay { angle: theta })
}

/// Integral between two endpoints, either of which may be a direction at
/// infinity, along the polyline through the origin.
pub fn reference_infinite(
    f: &dyn Fn(Complex64) -> Complex64,
    g: &[Complex64],
    omega: f64,
    a: OracleEndpoint,
    b: OracleEndpoint,
    tol: f64,
) -> Result<OracleResult> {
    let far = |e: OracleEndpoint| -> Result<Complex64> {
        match e {
            OracleEndpoint::Point(z) => Ok(z),
            OracleEndpoint::Direction(t) => Ok(Complex64::from_polar(ray_cutoff(f, g, omega, t)?, t)),
        }
    };
    let (za, zb) = (far(a)?, far(b)?);
    let origin = Complex64::new(0.0, 0.0);
    let first = adaptive_finite(f, g, omega, za, origin, tol / 2.0)?;
    let second = adaptive_finite(f, g, omega, origin, zb, tol / 2.0)?;
    Ok(OracleResult {
        value: first.value + second.value,
        error_estimate: first.error_estimate + second.error_estimate,
        panels: first.panels + second.panels,
    })
}

/// `Ai(x)` from its Maclaurin series, summed in double-double, for `|x| ≤ 8`.
pub fn airy_series(x: f64) -> Result<Complex64> {
    if !(x.abs() <= 8.0) {
        return Err(Error::InvalidInput(format!("series limited to |x| <= 8, got {x}")));
    }
    let c1 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
    let c2 = 3f64.powf(-1.0 / 3.0) / gamma(1.0 / 3.0);
    let xx = TwoFold::new(x);
    let x3 = xx * xx * xx;
    let mut term_f = TwoFold::ONE;
    let mut term_g = xx;
    let mut sum_f = TwoFold::ZERO;
    let mut sum_g = TwoFold::ZERO;
    let mut k = 0usize;
    loop {
        sum_f = sum_f + term_f;
        sum_g = sum_g + term_g;
        let kf = (3 * k) as f64;
        term_f = term_f * x3 / ((kf + 2.0) * (kf + 3.0));
        term_g = term_g * x3 / ((kf + 3.0) * (kf + 4.0));
        k += 1;
        let small = |t: TwoFold, s: TwoFold| t.hi.abs() <= 1e-17 * s.hi.abs().max(1e-300);
        if (small(term_f, sum_f) && small(term_g, sum_g)) || k > 200 {
            break;
        }
    }
    let value = sum_f * c1 - sum_g * c2;
    Ok(Complex64::new(value.to_f64(), 0.0))
}
