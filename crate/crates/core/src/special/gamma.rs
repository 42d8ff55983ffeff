//! Complex log-Gamma, reciprocal Gamma and digamma.
//!
//! The right half-plane uses the Stirling series after shifting the argument
//! to `Re w >= 10`; the left half-plane goes through the reflection formula,
//! with `ln sin(pi z)` written so that it stays continuous (and overflow free)
//! off the real axis. The result is the principal branch of `ln Gamma`
//! everywhere except the negative real axis, where the imaginary part is
//! `0` or `pi` according to the sign of `Gamma(x)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT_TARGET: f64 = 10.0;

// B_{2k} / (2k (2k - 1)), k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k), k = 1..=8.
const DIGAMMA: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Returns `Some(n)` when `z` is exactly the non-positive integer `n`.
pub fn nonpositive_integer(z: Complex64) -> Option<i64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some(z.re as i64)
    } else {
        None
    }
}

fn shift_count(z: Complex64) -> usize {
    if z.re >= SHIFT_TARGET {
        0
    } else {
        (SHIFT_TARGET - z.re).ceil() as usize
    }
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let n = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).ln();
    }
    stirling(z + n as f64) - correction
}

/// Splits `z = n + r` with integer `n` and `|Re r| <= 1/2`; the subtraction is
/// exact, so `pi r` keeps full relative precision next to the poles.
fn reduce(z: Complex64) -> (f64, Complex64) {
    let n = z.re.round();
    (n, Complex64::new(z.re - n, z.im))
}

/// `ln sin(pi z)`, continuous in each open half-plane.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let (n, r) = reduce(z);
    let w = r * PI;
    if z.im > 0.0 {
        let e = (i * w * 2.0).exp();
        -i * (w + n * PI) + (one - e).ln() + Complex64::new(-(2f64.ln()), PI / 2.0)
    } else if z.im < 0.0 {
        let e = (-i * w * 2.0).exp();
        i * (w + n * PI) + (one - e).ln() + Complex64::new(-(2f64.ln()), -PI / 2.0)
    } else {
        let s = (PI * r.re).sin();
        let negative = (s < 0.0) != (n.rem_euclid(2.0) != 0.0);
        Complex64::new(s.abs().ln(), if negative { PI } else { 0.0 })
    }
}

/// `ln Gamma(z)`. Errors with [`Error::Pole`] at non-positive integers.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Numeric(format!("log_gamma of non-finite {z}")));
    }
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::Pole(n));
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    let one_minus = Complex64::new(1.0, 0.0) - z;
    let reflected = PI.ln() - ln_sin_pi(z) - log_gamma_right(one_minus);
    if z.im == 0.0 {
        // keep the imaginary part in {0, pi}
        let im = if ln_sin_pi(z).im != 0.0 { PI } else { 0.0 };
        return Ok(Complex64::new(reflected.re, im));
    }
    Ok(reflected)
}

/// `1 / Gamma(z)`, exactly zero at the poles of Gamma.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    match log_gamma(z) {
        Ok(lg) => (-lg).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// `Gamma(z)` itself, for moderate arguments.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|lg| lg.exp())
}

fn cot_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let w = reduce(z).1 * PI;
    let one = Complex64::new(1.0, 0.0);
    if z.im > 0.0 {
        let e = (i * w * 2.0).exp();
        i * (e + one) / (e - one)
    } else if z.im < 0.0 {
        let e = (-i * w * 2.0).exp();
        i * (one + e) / (one - e)
    } else {
        Complex64::new(1.0 / w.re.tan(), 0.0)
    }
}

/// Digamma `psi(z) = Gamma'(z) / Gamma(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::Pole(n));
    }
    if z.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(digamma(one_minus)? - cot_pi(z) * PI);
    }
    let n = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).inv();
    }
    let w = z + n as f64;
    let inv2 = (w * w).inv();
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for c in DIGAMMA {
        series += pow * c;
        pow *= inv2;
    }
    Ok(w.ln() - w.inv() * 0.5 - series - correction)
}
