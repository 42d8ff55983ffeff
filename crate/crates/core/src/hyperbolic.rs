//! Arai's q-deformed hyperbolic functions, the deformed radial Rosen-Morse
//! potential, and the map between the radial coordinate `r` and the
//! half-line coordinate `u = r/a - ln sqrt(q)`.
//!
//! With `u` the deformed functions collapse onto ordinary ones:
//! `cosh_q(r/a) = sqrt(q) cosh u` and `tanh_q(r/a) = tanh u`.

use crate::error::{Error, Result};

/// Largest |x| accepted by the raw exponential forms of `sinh_q`/`cosh_q`.
pub const MAX_EXP_ARG: f64 = 700.0;

/// Physical inputs of the problem. Units are whatever the caller uses
/// consistently; the defaults are `M = hbar = a = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub mass: f64,
    pub hbar: f64,
    pub length_scale: f64,
    pub well_depth: f64,
    pub asymmetry: f64,
    pub deformation: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            length_scale: 1.0,
            well_depth: 1.0,
            asymmetry: 0.0,
            deformation: 1.0,
        }
    }
}

impl PotentialParams {
    /// Unit-free parameters (`M = hbar = a = 1`), validated.
    pub fn new(well_depth: f64, asymmetry: f64, deformation: f64) -> Result<Self> {
        Self {
            well_depth,
            asymmetry,
            deformation,
            ..Self::default()
        }
        .validated()
    }

    pub fn with_units(self, mass: f64, hbar: f64, length_scale: f64) -> Result<Self> {
        Self {
            mass,
            hbar,
            length_scale,
            ..self
        }
        .validated()
    }

    /// Checks the structural invariants: `q, a, M, hbar > 0`, all finite.
    /// The sign of `V1` is not checked here; the spectral routines enforce it.
    pub fn validated(self) -> Result<Self> {
        let all = [
            self.mass,
            self.hbar,
            self.length_scale,
            self.well_depth,
            self.asymmetry,
            self.deformation,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite potential parameter".into()));
        }
        if self.deformation <= 0.0 {
            return Err(Error::Domain(format!("q must be > 0, got {}", self.deformation)));
        }
        if self.length_scale <= 0.0 || self.mass <= 0.0 || self.hbar <= 0.0 {
            return Err(Error::Domain("a, M and hbar must be > 0".into()));
        }
        Ok(self)
    }

    /// Wall location `u0 = -ln sqrt(q)` in the half-line coordinate.
    pub fn wall(&self) -> f64 {
        -0.5 * self.deformation.ln()
    }

    /// `hbar^2 / (2 M a^2)`, the natural energy unit of the problem.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * self.length_scale * self.length_scale)
    }
}

/// A point of the half line `u >= u0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineCoordinate {
    pub u: f64,
    pub lower_bound: f64,
}

impl HalfLineCoordinate {
    pub fn new(params: &PotentialParams, u: f64) -> Result<Self> {
        let lower_bound = params.wall();
        if u < lower_bound {
            return Err(Error::Domain(format!(
                "u = {u} lies below the wall u0 = {lower_bound}"
            )));
        }
        Ok(Self { u, lower_bound })
    }

    pub fn at_wall(&self) -> bool {
        self.u == self.lower_bound
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("q must be > 0, got {q}")))
    }
}

fn check_exp_arg(x: f64) -> Result<()> {
    if x.abs() > MAX_EXP_ARG || x.is_nan() {
        Err(Error::Domain(format!("|x| = {} exceeds {MAX_EXP_ARG}", x.abs())))
    } else {
        Ok(())
    }
}

pub fn sinh_q(x: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    check_exp_arg(x)?;
    Ok(0.5 * (x.exp() - q * (-x).exp()))
}

pub fn cosh_q(x: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    check_exp_arg(x)?;
    Ok(0.5 * (x.exp() + q * (-x).exp()))
}

/// `sinh_q / cosh_q`, evaluated in a form that never overflows.
pub fn tanh_q(x: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if x.is_nan() {
        return Err(Error::Domain("tanh_q of NaN".into()));
    }
    Ok(tanh_q_unchecked(x, q))
}

fn tanh_q_unchecked(x: f64, q: f64) -> f64 {
    if x >= 0.0 {
        let w = q * (-2.0 * x).exp();
        (1.0 - w) / (1.0 + w)
    } else {
        let w = (2.0 * x).exp();
        (w - q) / (w + q)
    }
}

/// `1 / cosh_q^2(x)` without overflow for any finite `x`.
fn sech_q_sq(x: f64, q: f64) -> f64 {
    if x >= 0.0 {
        let w = (-2.0 * x).exp();
        4.0 * w / ((1.0 + q * w) * (1.0 + q * w))
    } else {
        let w = (2.0 * x).exp();
        4.0 * w / ((w + q) * (w + q))
    }
}

/// `V_q(r) = -V1 / cosh_q^2(r/a) + V2 tanh_q(r/a)` for `r >= 0`.
pub fn potential_r(p: &PotentialParams, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("r must be >= 0, got {r}")));
    }
    Ok(potential_r_unchecked(p, r))
}

/// Same as [`potential_r`] without the `r >= 0` check; the oracle grids
/// only ever sample the physical half line.
pub(crate) fn potential_r_unchecked(p: &PotentialParams, r: f64) -> f64 {
    let x = r / p.length_scale;
    let q = p.deformation;
    -p.well_depth * sech_q_sq(x, q) + p.asymmetry * tanh_q_unchecked(x, q)
}

/// The pseudo-time-rescaled potential on the half line,
/// `a^2 (V2 tanh u - V1 / (q cosh^2 u))`.
pub fn potential_u(p: &PotentialParams, u: f64) -> Result<f64> {
    if u < p.wall() || u.is_nan() {
        return Err(Error::Domain(format!(
            "u = {u} lies below the wall u0 = {}",
            p.wall()
        )));
    }
    Ok(potential_u_full_line(p, u))
}

/// Rosen-Morse potential in `u` continued to the whole real line.
pub(crate) fn potential_u_full_line(p: &PotentialParams, u: f64) -> f64 {
    let a2 = p.length_scale * p.length_scale;
    let sech2 = sech_q_sq(u, 1.0);
    a2 * (p.asymmetry * u.tanh() - p.well_depth * sech2 / p.deformation)
}

pub fn r_to_u(p: &PotentialParams, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("r must be >= 0, got {r}")));
    }
    Ok(r / p.length_scale + p.wall())
}

pub fn u_to_r(p: &PotentialParams, u: f64) -> Result<f64> {
    let u0 = p.wall();
    if !(u >= u0) {
        return Err(Error::Domain(format!("u = {u} lies below the wall u0 = {u0}")));
    }
    Ok((p.length_scale * (u - u0)).max(0.0))
}

/// Global minimum of `potential_r` over `[0, inf)`.
///
/// `tanh_q` is monotone in `r`, so the sign of `dV/dr` is the sign of
/// `2 V1 tanh_q / q + V2` and changes at most once; the minimiser is located
/// by bisection on that sign. When the derivative stays negative the infimum
/// `V2` is only reached at infinity and `r_min = inf` is returned.
pub fn potential_minimum(p: &PotentialParams) -> Result<(f64, f64)> {
    if !(p.well_depth > 0.0) {
        return Err(Error::Domain(format!(
            "potential_minimum needs V1 > 0, got {}",
            p.well_depth
        )));
    }
    let slope_sign = |r: f64| {
        let t = tanh_q_unchecked(r / p.length_scale, p.deformation);
        2.0 * p.well_depth * t / p.deformation + p.asymmetry
    };
    if slope_sign(0.0) >= 0.0 {
        return Ok((0.0, potential_r_unchecked(p, 0.0)));
    }
    if 2.0 * p.well_depth / p.deformation + p.asymmetry <= 0.0 {
        return Ok((f64::INFINITY, p.asymmetry));
    }
    let mut lo = 0.0;
    let mut hi = p.length_scale;
    while slope_sign(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-10 * hi.max(p.length_scale * 1e-6) {
        let mid = 0.5 * (lo + hi);
        if slope_sign(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_min = 0.5 * (lo + hi);
    Ok((r_min, potential_r_unchecked(p, r_min)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v1: f64, v2: f64, q: f64) -> PotentialParams {
        PotentialParams::new(v1, v2, q).unwrap()
    }

    #[test]
    fn deformed_functions_spot_values() {
        assert_eq!(sinh_q(0.0, 3.0).unwrap(), -1.0);
        assert!((cosh_q(4f64.sqrt().ln(), 4.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((tanh_q(1.0, 1.0).unwrap() - 1f64.tanh()).abs() < 1e-16);
        assert_eq!(tanh_q(800.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(sinh_q(1.0, 0.0).is_err());
        assert!(cosh_q(1.0, -1.0).is_err());
        assert!(tanh_q(1.0, 0.0).is_err());
        assert!(cosh_q(701.0, 1.0).is_err());
        let p = params(1.0, 0.0, 2.0);
        assert!(potential_r(&p, -1e-3).is_err());
        assert!(potential_u(&p, p.wall() - 1e-9).is_err());
        assert!(r_to_u(&p, -1.0).is_err());
        assert!(u_to_r(&p, p.wall() - 0.1).is_err());
        assert!(PotentialParams::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn potential_spot_values() {
        let p = params(1.0, 0.0, 1.0);
        assert_eq!(potential_r(&p, 0.0).unwrap(), -1.0);
        assert_eq!(potential_u(&p, 0.0).unwrap(), -1.0);
        for q in [0.5, 1.0, 2.0] {
            let p = params(1.0, 0.25, q);
            assert!((potential_r(&p, 20.0).unwrap() - 0.25).abs() < 1e-6);
            assert!((potential_u(&p, 50.0).unwrap() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn coordinate_map() {
        let p = params(1.0, 0.0, 3.0);
        assert!((r_to_u(&p, 0.0).unwrap() + 3f64.sqrt().ln()).abs() < 1e-15);
        let p1 = params(1.0, 0.0, 1.0);
        assert_eq!(r_to_u(&p1, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn minimum_at_origin_for_symmetric_well() {
        let (r, v) = potential_minimum(&params(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(r, 0.0);
        assert_eq!(v, -1.0);
    }

    #[test]
    fn minimum_matches_dense_scan() {
        for (v2, q) in [(0.25, 1.0), (0.25, 1.5), (-0.5, 1.0), (0.25, 3.0)] {
            let p = params(1.0, v2, q);
            let (r_min, v_min) = potential_minimum(&p).unwrap();
            let scan = (0..=100_000)
                .map(|k| potential_r(&p, k as f64 * 1e-4).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(v_min <= scan + 1e-15, "{v2} {q}: {v_min} vs {scan}");
            assert!(scan - v_min < 1e-8);
            assert!(r_min.is_finite());
        }
        let (_, v) = potential_minimum(&params(1.0, 0.25, 1.0)).unwrap();
        assert!(v < -0.9);
    }

    #[test]
    fn minimum_at_infinity_for_steep_tilt() {
        let (r, v) = potential_minimum(&params(1.0, -3.0, 1.0)).unwrap();
        assert!(r.is_infinite());
        assert_eq!(v, -3.0);
    }
}
