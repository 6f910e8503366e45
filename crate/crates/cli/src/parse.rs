//! Literal parsing for command-line values.
//!
//! Complex literals accept sums of real and imaginary terms, each a decimal
//! number or a fraction: `3`, `-2.5e-3`, `1/7`, `i`, `-i/3`, `2i`, `1+2i`,
//! `1/2-3i/4`. Real literals may carry a factor of `pi`, as in `9pi/10`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use quasisd::{ComplexPolynomial, Endpoint};

pub type ParseResult<T> = Result<T, String>;

/// `a`, `a/b`, with an optional `pi` factor anywhere in the numerator.
pub fn real(token: &str) -> ParseResult<f64> {
    let t = token.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numerator = scaled_number(num).ok_or_else(|| format!("malformed number '{token}'"))?;
    let value = match den {
        Some(d) => {
            let d = scaled_number(d).ok_or_else(|| format!("malformed denominator in '{token}'"))?;
            if d == 0.0 {
                return Err(format!("division by zero in '{token}'"));
            }
            numerator / d
        }
        None => numerator,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{token}' is not a finite number"))
    }
}

/// Decimal number, optionally multiplied by `pi` (`pi`, `-pi`, `2pi`, `2*pi`).
fn scaled_number(s: &str) -> Option<f64> {
    let lower = s.to_ascii_lowercase();
    if let Some(stripped) = lower.strip_suffix("pi") {
        let coeff = stripped.strip_suffix('*').unwrap_or(stripped);
        let c = match coeff {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().ok()?,
        };
        return Some(c * PI);
    }
    if lower.contains("inf") || lower.contains("nan") {
        return None;
    }
    lower.parse::<f64>().ok()
}

/// Splits at `+`/`-` that start a new term (not the sign of an exponent).
fn terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..bytes.len() {
        let c = bytes[k];
        if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'/' | b'*') {
            out.push(&s[start..k]);
            start = k;
        }
    }
    out.push(&s[start..]);
    out
}

pub fn complex(token: &str) -> ParseResult<Complex64> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let mut z = Complex64::new(0.0, 0.0);
    for term in terms(&t) {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'+') => (1.0, &term[1..]),
            Some(b'-') => (-1.0, &term[1..]),
            _ => (1.0, term),
        };
        if body.is_empty() {
            return Err(format!("malformed complex literal '{token}'"));
        }
        if body.matches('i').count() > usize::from(body.contains("pi")) {
            // imaginary term: drop the single unit marker `i` (not the one in `pi`)
            let without = remove_unit(body).ok_or_else(|| format!("malformed complex literal '{token}'"))?;
            let without = without.strip_suffix('*').unwrap_or(&without).to_string();
            let magnitude = if without.is_empty() {
                1.0
            } else if let Some(den) = without.strip_prefix('/') {
                1.0 / real(den).map_err(|_| format!("malformed complex literal '{token}'"))?
            } else {
                real(&without).map_err(|_| format!("malformed complex literal '{token}'"))?
            };
            z.im += sign * magnitude;
        } else {
            z.re += sign * real(body).map_err(|_| format!("malformed complex literal '{token}'"))?;
        }
    }
    Ok(z)
}

/// Removes the imaginary unit from a term such as `2i`, `i/3`, `2i/3`, `2*i`.
fn remove_unit(body: &str) -> Option<String> {
    let chars: Vec<char> = body.chars().collect();
    let pos = (0..chars.len()).find(|&k| chars[k] == 'i' && (k == 0 || chars[k - 1] != 'p'))?;
    let mut rest: String = chars[..pos].iter().collect();
    let tail: String = chars[pos + 1..].iter().collect();
    if rest.ends_with('*') {
        rest.pop();
    }
    rest.push_str(&tail);
    Some(rest)
}

/// Comma-separated complex coefficients, highest degree first.
pub fn descending_coefficients(list: &str) -> ParseResult<ComplexPolynomial> {
    let coeffs = list
        .split(',')
        .map(complex)
        .collect::<ParseResult<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err("empty coefficient list".into());
    }
    Ok(ComplexPolynomial::from_descending(&coeffs))
}

/// `re,im`, a single complex literal, or `inf:ANGLE`.
pub fn endpoint(token: &str) -> ParseResult<Endpoint> {
    let t = token.trim();
    if let Some(angle) = t.strip_prefix("inf:") {
        return Ok(Endpoint::Infinite(real(angle)?.rem_euclid(TAU)));
    }
    match t.split_once(',') {
        Some((re, im)) => Ok(Endpoint::Finite(Complex64::new(real(re)?, real(im)?))),
        None => Ok(Endpoint::Finite(complex(t)?)),
    }
}

/// `lo:hi:n`, `n` equally spaced points including both ends.
pub fn range(token: &str) -> ParseResult<Vec<f64>> {
    let parts: Vec<&str> = token.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("range '{token}' must look like lo:hi:n"));
    };
    let (lo, hi) = (real(lo)?, real(hi)?);
    let n: usize = n.trim().parse().map_err(|_| format!("bad point count in range '{token}'"))?;
    match n {
        0 => Err(format!("range '{token}' needs at least one point")),
        1 => Ok(vec![lo]),
        _ => Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()),
    }
}

pub fn real_list(list: &str) -> ParseResult<Vec<f64>> {
    list.split(',').map(real).collect()
}

pub fn count_list(list: &str) -> ParseResult<Vec<usize>> {
    list.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad count '{s}'")))
        .collect()
}
