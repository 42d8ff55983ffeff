//! Gauss hypergeometric function `2F1(a, b; c; x)` for real `x` in `[0, 1)`.
//!
//! `x <= 1/2` sums the Maclaurin series directly. For `x > 1/2` the direct
//! series is still used when it is well conditioned; otherwise the value goes
//! through the `x -> 1 - x` connection formula. Its two halves blow up like
//! `1 / dist(c - a - b, Z)` and cancel, so when `c - a - b` sits within
//! [`DEGENERACY_BAND`] of an integer `m` the value is instead interpolated in
//! `a + b` (at fixed `c`) by a quartic through the logarithmic limit at
//! `c - a - b = m` and four ordinary evaluations at `m +- INTERPOLATION_STEP`
//! and `m +- 2 INTERPOLATION_STEP`.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::gamma::{digamma, log_gamma, nonpositive_integer};
use crate::error::{Error, Result};

/// Relative size below which a series term counts as negligible.
pub const TERM_TOLERANCE: f64 = 1e-17;
/// Number of consecutive negligible terms required to stop.
pub const CONFIRMATIONS: usize = 3;
pub const MAX_TERMS: usize = 100_000;
/// Distance of `c - a - b` from an integer that triggers the logarithmic case.
pub const DEGENERACY_BAND: f64 = 1e-3;
const INTERPOLATION_STEP: f64 = 5e-3;
/// Largest cancellation factor accepted from the direct series for x > 1/2.
pub const DIRECT_CONDITION_LIMIT: f64 = 1e3;

type C = Complex64;

fn cplx(re: f64) -> C {
    C::new(re, 0.0)
}

/// Sums `sum_n term_n` where `term_{n+1} = term_n * ratio(n)`, with the
/// consecutive-negligible-terms stopping rule.
fn sum_series(first: C, ratio: impl FnMut(usize) -> C) -> Result<C> {
    sum_series_conditioned(first, ratio).map(|(sum, _)| sum)
}

/// As [`sum_series`], also returning `sum |term_n| / |sum|`, the factor by
/// which rounding errors are amplified by cancellation.
fn sum_series_conditioned(first: C, mut ratio: impl FnMut(usize) -> C) -> Result<(C, f64)> {
    let mut term = first;
    let mut sum = first;
    let mut magnitude = first.norm();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        term *= ratio(n);
        sum += term;
        magnitude += term.norm();
        if term.norm() <= TERM_TOLERANCE * sum.norm() || term.norm() == 0.0 {
            quiet += 1;
            if quiet >= CONFIRMATIONS {
                return Ok((sum, magnitude / sum.norm()));
            }
        } else {
            quiet = 0;
        }
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(Error::Numeric(format!("2F1 series overflow after {n} terms")));
        }
    }
    Err(Error::Convergence {
        terms: MAX_TERMS,
        last_term: term.norm(),
        partial_sum: sum.norm(),
    })
}

/// Direct Maclaurin series in `x`.
fn maclaurin(a: C, b: C, c: C, x: f64) -> Result<C> {
    maclaurin_split(a, b, 0.0, c, x)
}

fn maclaurin_conditioned(a: C, b: C, c: C, x: f64) -> Result<(C, f64)> {
    sum_series_conditioned(cplx(1.0), |n| {
        let k = n as f64;
        let num = (a + k) * (b + k);
        num / ((c + k) * (k + 1.0)) * x
    })
}

/// Maclaurin series with the lower parameter given as `c_int + c_var`; the
/// denominators are formed as `(c_int + k) + c_var`, which is exact whenever
/// it nearly cancels.
fn maclaurin_split(a: C, b: C, c_int: f64, c_var: C, x: f64) -> Result<C> {
    sum_series(cplx(1.0), |n| {
        let k = n as f64;
        let num = (a + k) * (b + k);
        num / ((c_var + (c_int + k)) * (k + 1.0)) * x
    })
}

/// Gamma-function product `prod Gamma(num) / prod Gamma(den)`, zero when a
/// denominator argument is a pole.
fn gamma_ratio(num: &[C], den: &[C]) -> Result<C> {
    if den.iter().any(|z| nonpositive_integer(*z).is_some()) {
        return Ok(cplx(0.0));
    }
    let mut log = cplx(0.0);
    for z in num {
        log += log_gamma(*z)?;
    }
    let mut log_den = cplx(0.0);
    for z in den {
        log_den += log_gamma(*z)?;
    }
    Ok((log - log_den).exp())
}

/// `x -> 1 - x` connection formula for non-integer `c - a - b`.
///
/// Both halves grow like `1 / dist(c - a - b, Z)` and cancel; every factor
/// that carries that growth is derived from one rounded `m = c - a - b` so
/// the cancellation stays consistent.
fn connection(a: C, b: C, c: C, x: f64) -> Result<C> {
    let y = 1.0 - x;
    let m = c - (a + b);
    let (c_minus_a, c_minus_b) = (b + m, a + m);
    let first = gamma_ratio(&[c, m], &[c_minus_a, c_minus_b])?;
    let second = gamma_ratio(&[c, -m], &[a, b])?;
    let mut value = cplx(0.0);
    if first != cplx(0.0) {
        value += first * maclaurin_split(a, b, 1.0, -m, y)?;
    }
    if second != cplx(0.0) {
        let power = (m * y.ln()).exp();
        value += second * power * maclaurin_split(c_minus_a, c_minus_b, 1.0, m, y)?;
    }
    Ok(value)
}

/// Logarithmic connection formula for `c = a + b + m` with integer `m`.
fn connection_log(a: C, b: C, m: i64, x: f64) -> Result<C> {
    let y = 1.0 - x;
    let ln_y = y.ln();
    let euler = 0.577_215_664_901_532_9;
    let mm = m.unsigned_abs() as usize;
    let mf = mm as f64;

    // Coefficient recursion of sum_n t_n [ln y - psi(n+1) - psi(n+m+1) + psi(p+n) + psi(s+n)]
    // with t_n = (p)_n (s)_n / (n! (n+m)!) y^n.
    let log_sum = |p: C, s: C| -> Result<C> {
        let mut psi_p = digamma(p)?;
        let mut psi_s = digamma(s)?;
        let mut h_n = 0.0; // harmonic number H_n
        let mut h_nm: f64 = (1..=mm).map(|k| 1.0 / k as f64).sum();
        let factorial_m: f64 = (1..=mm).map(|k| k as f64).product();
        let mut t = cplx(1.0 / factorial_m);
        let bracket = |h_n: f64, h_nm: f64, psi_p: C, psi_s: C| {
            cplx(ln_y + 2.0 * euler - h_n - h_nm) + (psi_p + psi_s)
        };
        let mut sum = t * bracket(h_n, h_nm, psi_p, psi_s);
        let mut quiet = 0;
        for n in 0..MAX_TERMS {
            let k = n as f64;
            t *= (p + k) * (s + k) / ((k + 1.0) * (k + 1.0 + mf)) * y;
            psi_p += (p + k).inv();
            psi_s += (s + k).inv();
            h_n += 1.0 / (k + 1.0);
            h_nm += 1.0 / (k + 1.0 + mf);
            let term = t * bracket(h_n, h_nm, psi_p, psi_s);
            sum += term;
            if term.norm() <= TERM_TOLERANCE * sum.norm() || term.norm() == 0.0 {
                quiet += 1;
                if quiet >= CONFIRMATIONS {
                    return Ok(sum);
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::Convergence {
            terms: MAX_TERMS,
            last_term: t.norm(),
            partial_sum: sum.norm(),
        })
    };

    // Finite sum_{n<m} (p)_n (s)_n / (n! (1-m)_n) y^n.
    let finite_sum = |p: C, s: C| -> C {
        let mut t = cplx(1.0);
        let mut sum = t;
        for n in 0..mm.saturating_sub(1) {
            let k = n as f64;
            t *= (p + k) * (s + k) / ((k + 1.0) * (1.0 - mf + k)) * y;
            sum += t;
        }
        sum
    };
    let gamma_m = (1..mm).map(|k| k as f64).product::<f64>();
    let sign = if mm.is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = a + b + m as f64;

    match m.cmp(&0) {
        Ordering::Equal => {
            let pre = gamma_ratio(&[c], &[a, b])?;
            if pre == cplx(0.0) {
                return Ok(cplx(0.0));
            }
            Ok(-pre * log_sum(a, b)?)
        }
        Ordering::Greater => {
            let head = gamma_ratio(&[c], &[a + mf, b + mf])? * gamma_m * finite_sum(a, b);
            let pre = gamma_ratio(&[c], &[a, b])?;
            let tail = if pre == cplx(0.0) {
                cplx(0.0)
            } else {
                pre * sign * y.powi(mm as i32) * log_sum(a + mf, b + mf)?
            };
            Ok(head - tail)
        }
        Ordering::Less => {
            let head = gamma_ratio(&[c], &[a, b])?
                * gamma_m
                * y.powi(-(mm as i32))
                * finite_sum(a - mf, b - mf);
            let pre = gamma_ratio(&[c], &[a - mf, b - mf])?;
            let tail = if pre == cplx(0.0) {
                cplx(0.0)
            } else {
                pre * sign * log_sum(a, b)?
            };
            Ok(head - tail)
        }
    }
}

fn transformed(a: C, b: C, c: C, x: f64) -> Result<C> {
    let m = c - (a + b);
    let nearest = m.re.round();
    let offset = m - nearest;
    if offset.norm() >= DEGENERACY_BAND {
        return connection(a, b, c, x);
    }
    let n = nearest as i64;
    if offset == cplx(0.0) {
        return connection_log(a, b, n, x);
    }
    // Move along a + b at fixed c: F is entire in a and b, so the
    // interpolant does not feel the poles of F in c.
    let h = INTERPOLATION_STEP;
    let node = |k: f64| {
        let shift = (offset - k * h) * 0.5;
        if k == 0.0 {
            connection_log(a + shift, b + shift, n, x)
        } else {
            connection(a + shift, b + shift, c, x)
        }
    };
    let (m2, m1, at_integer) = (node(-2.0)?, node(-1.0)?, node(0.0)?);
    let (p1, p2) = (node(1.0)?, node(2.0)?);
    // Lagrange weights on the nodes -2, -1, 0, 1, 2 at s = offset / h
    let s = offset / h;
    let s2 = s * s;
    let w_m2 = s * (s2 - 1.0) * (s - 2.0) / 24.0;
    let w_m1 = -s * (s - 1.0) * (s2 - 4.0) / 6.0;
    let w_0 = (s2 - 1.0) * (s2 - 4.0) / 4.0;
    let w_p1 = -s * (s + 1.0) * (s2 - 4.0) / 6.0;
    let w_p2 = s * (s2 - 1.0) * (s + 2.0) / 24.0;
    Ok(w_m2 * m2 + w_m1 * m1 + w_0 * at_integer + w_p1 * p1 + w_p2 * p2)
}

fn canonical_order(a: C, b: C) -> (C, C) {
    match a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)) {
        Ordering::Greater => (b, a),
        _ => (a, b),
    }
}

/// `2F1(a, b; c; x)` for `0 <= x < 1`.
///
/// Errors: [`Error::Pole`] when `c` is a non-positive integer,
/// [`Error::Domain`] for `x` outside `[0, 1)`, and [`Error::Convergence`] when a
/// series exhausts [`MAX_TERMS`].
pub fn hyp2f1(a: C, b: C, c: C, x: f64) -> Result<C> {
    if let Some(n) = nonpositive_integer(c) {
        return Err(Error::Pole(n));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("2F1 argument must lie in [0, 1), got {x}")));
    }
    for z in [a, b, c] {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Numeric("non-finite 2F1 parameter".into()));
        }
    }
    if x == 0.0 {
        return Ok(cplx(1.0));
    }
    let (a, b) = canonical_order(a, b);
    let terminating = nonpositive_integer(a).is_some() || nonpositive_integer(b).is_some();
    if terminating || x <= 0.5 {
        return maclaurin(a, b, c, x);
    }
    // Past x = 1/2 the direct series is kept whenever it converges without
    // significant cancellation; the connection formula can itself cancel
    // badly when both of its halves are large.
    match maclaurin_conditioned(a, b, c, x) {
        Ok((value, condition)) if condition <= DIRECT_CONDITION_LIMIT => Ok(value),
        _ => transformed(a, b, c, x),
    }
}

/// Real-parameter convenience wrapper.
pub fn hyp2f1_real(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1(cplx(a), cplx(b), cplx(c), x).map(|v| v.re)
}
