//! Closed-form Green's functions in the half-line coordinate `u`.
//!
//! Conventions: `G(u'', u'; E) = i hbar <u''| (a^2 E - H_u)^{-1} |u'>` with
//! `H_u = -hbar^2/(2M) d^2/du^2 + V(u)` and `V(u)` from
//! [`potential_u`](crate::hyperbolic::potential_u). The full-line closed form
//! keeps the `-i M / hbar` prefactor and the Gamma-function ratio unchanged;
//! it is the product `phi_left(u_<) phi_right(u_>)` of the solution decaying
//! at `-inf` (hypergeometric argument `(1 + tanh u)/2`, lower parameter
//! `M1 - M2 + 1`) and the one decaying at `+inf` (argument `(1 - tanh u)/2`,
//! lower parameter `M1 + M2 + 1`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::PotentialParams;
use crate::special::{hyp2f1, log_gamma};

/// Relative size under which a denominator is reported as a pole.
pub const POLE_THRESHOLD: f64 = 1e-13;

type C = Complex64;

/// Index abbreviations `nu_q`, `L`, `M1(E)`, `M2(E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIndices {
    pub nu_q: C,
    pub l: C,
    pub m1: C,
    pub m2: C,
    pub energy: f64,
}

impl SpectralIndices {
    /// Upper hypergeometric parameters `(M1 - L, L + M1 + 1)`.
    pub fn upper(&self) -> (C, C) {
        (self.m1 - self.l, self.l + self.m1 + 1.0)
    }

    /// Lower parameter of the solution decaying at `u -> +inf`.
    pub fn lower_right(&self) -> C {
        self.m1 + self.m2 + 1.0
    }

    /// Lower parameter of the solution decaying at `u -> -inf`.
    pub fn lower_left(&self) -> C {
        self.m1 - self.m2 + 1.0
    }
}

pub fn spectral_indices(p: &PotentialParams, energy: f64) -> Result<SpectralIndices> {
    let (m, hbar, a, q) = (p.mass, p.hbar, p.length_scale, p.deformation);
    let radicand = 1.0 + 8.0 * m * a * a * p.well_depth / (hbar * hbar * q);
    if radicand < 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "1 + 8 M a^2 V1 / (hbar^2 q) = {radicand} < 0"
        )));
    }
    if !energy.is_finite() {
        return Err(Error::Domain("non-finite energy".into()));
    }
    let nu_q = C::new(radicand.sqrt(), 0.0);
    let l = (nu_q - 1.0) * 0.5;
    let k = (m * a * a / (2.0 * hbar * hbar)).sqrt();
    let right = C::new(p.asymmetry - energy, 0.0).sqrt();
    let left = C::new(-p.asymmetry - energy, 0.0).sqrt();
    Ok(SpectralIndices {
        nu_q,
        l,
        m1: (right + left) * k,
        m2: (right - left) * k,
        energy,
    })
}

/// `ln((1 - tanh u)/2)` and `ln((1 + tanh u)/2)`, overflow free.
pub(crate) fn half_tanh_logs(u: f64) -> (f64, f64) {
    let softplus = |t: f64| {
        if t > 0.0 {
            t + (-t).exp().ln_1p()
        } else {
            t.exp().ln_1p()
        }
    };
    (-softplus(2.0 * u), -softplus(-2.0 * u))
}

/// One energy's worth of the full-line solution pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SolutionPair {
    pub indices: SpectralIndices,
    alpha: C,
    beta: C,
}

impl SolutionPair {
    pub fn new(p: &PotentialParams, energy: f64) -> Result<Self> {
        let indices = spectral_indices(p, energy)?;
        let (alpha, beta) = indices.upper();
        Ok(Self { indices, alpha, beta })
    }

    /// `((1 - tanh u)/2)^((M1+M2)/2) ((1 + tanh u)/2)^((M1-M2)/2)`.
    pub fn power(&self, u: f64) -> C {
        let (ln_a, ln_b) = half_tanh_logs(u);
        let ix = &self.indices;
        ((ix.m1 + ix.m2) * (0.5 * ln_a) + (ix.m1 - ix.m2) * (0.5 * ln_b)).exp()
    }

    /// Hypergeometric factor of the solution decaying at `+inf`.
    pub fn right_factor(&self, u: f64) -> Result<C> {
        let (ln_a, _) = half_tanh_logs(u);
        hyp2f1(self.alpha, self.beta, self.indices.lower_right(), ln_a.exp())
    }

    /// Hypergeometric factor of the solution decaying at `-inf`.
    pub fn left_factor(&self, u: f64) -> Result<C> {
        let (_, ln_b) = half_tanh_logs(u);
        hyp2f1(self.alpha, self.beta, self.indices.lower_left(), ln_b.exp())
    }

    pub fn right(&self, u: f64) -> Result<C> {
        Ok(self.power(u) * self.right_factor(u)?)
    }

    /// `-i M/hbar * Gamma(M1-L) Gamma(L+M1+1) / (Gamma(M1+M2+1) Gamma(M1-M2+1))`.
    pub fn prefactor(&self, p: &PotentialParams) -> Result<C> {
        let ix = &self.indices;
        for z in [self.alpha, self.beta] {
            let nearest = z.re.round();
            if nearest <= 0.0 && (z - nearest).norm() < POLE_THRESHOLD * nearest.abs().max(1.0) {
                return Err(Error::ResolventPole {
                    energy: ix.energy,
                    what: format!("Gamma prefactor pole at {nearest} (full-line bound state)"),
                });
            }
        }
        let log = log_gamma(self.alpha)? + log_gamma(self.beta)?
            - log_gamma(ix.lower_right())?
            - log_gamma(ix.lower_left())?;
        Ok(C::new(0.0, -p.mass / p.hbar) * log.exp())
    }
}

/// A Green's function value together with where it was evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensEval {
    pub u_prime: f64,
    pub u_dprime: f64,
    pub energy: f64,
    pub value: C,
}

fn check_finite(u_prime: f64, u_dprime: f64) -> Result<()> {
    if u_prime.is_finite() && u_dprime.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("Green's function arguments must be finite".into()))
    }
}

fn full_line(pair: &SolutionPair, pre: C, u_prime: f64, u_dprime: f64) -> Result<C> {
    let (lower, upper) = if u_prime <= u_dprime {
        (u_prime, u_dprime)
    } else {
        (u_dprime, u_prime)
    };
    let powers = pair.power(lower) * pair.power(upper);
    Ok(pre * powers * pair.left_factor(lower)? * pair.right_factor(upper)?)
}

/// Rosen-Morse Green's function on the whole `u` line.
pub fn greens_full_line(p: &PotentialParams, energy: f64, u_prime: f64, u_dprime: f64) -> Result<C> {
    check_finite(u_prime, u_dprime)?;
    let pair = SolutionPair::new(p, energy)?;
    let pre = pair.prefactor(p)?;
    full_line(&pair, pre, u_prime, u_dprime)
}

/// Green's function with the point interaction `-lambda delta(u - u0)` added,
/// resummed from the Dyson series:
///
/// `G_delta = G - G(u'', u0) G(u0, u') / (G(u0, u0) - hbar / (i lambda))`.
///
/// The `hbar / i` in the coupling term follows from the normalisation of `G`
/// above; `lambda -> -inf` recovers [`greens_dirichlet`].
pub fn greens_delta_perturbed(
    p: &PotentialParams,
    energy: f64,
    lambda: f64,
    u_prime: f64,
    u_dprime: f64,
) -> Result<C> {
    check_finite(u_prime, u_dprime)?;
    if lambda == 0.0 {
        return greens_full_line(p, energy, u_prime, u_dprime);
    }
    let pair = SolutionPair::new(p, energy)?;
    let pre = pair.prefactor(p)?;
    let u0 = p.wall();
    let g = |x: f64, y: f64| full_line(&pair, pre, x, y);
    let coupling = C::new(0.0, p.hbar / lambda); // = -hbar / (i lambda)
    let g00 = g(u0, u0)?;
    let denominator = g00 + coupling;
    if denominator.norm() < POLE_THRESHOLD * g00.norm().max(coupling.norm()) {
        return Err(Error::ResolventPole {
            energy,
            what: "delta-perturbed bound state".into(),
        });
    }
    Ok(g(u_dprime, u_prime)? - g(u_dprime, u0)? * g(u0, u_prime)? / denominator)
}

/// Green's function of the half line `u >= u0` with a Dirichlet wall at `u0`.
pub fn greens_dirichlet(p: &PotentialParams, energy: f64, u_prime: f64, u_dprime: f64) -> Result<C> {
    check_finite(u_prime, u_dprime)?;
    let u0 = p.wall();
    if u_prime < u0 || u_dprime < u0 {
        return Err(Error::Domain(format!("arguments must satisfy u >= u0 = {u0}")));
    }
    let pair = SolutionPair::new(p, energy)?;
    let pre = pair.prefactor(p)?;
    let g = |x: f64, y: f64| full_line(&pair, pre, x, y);
    // G(u0, u0) vanishes exactly when the right-decaying factor does.
    let right_at_wall = pair.right_factor(u0)?;
    if right_at_wall.norm() < POLE_THRESHOLD {
        return Err(Error::ResolventPole {
            energy,
            what: "half-line bound state (G(u0, u0) = 0)".into(),
        });
    }
    let g00 = g(u0, u0)?;
    Ok(g(u_dprime, u_prime)? - g(u_dprime, u0)? * g(u0, u_prime)? / g00)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> PotentialParams {
        PotentialParams::new(10.0, 2.5, 1.0).unwrap()
    }

    #[test]
    fn indices_spot_values() {
        let ix = spectral_indices(&reference(), -4.0).unwrap();
        assert_eq!(ix.nu_q.re, 9.0);
        assert_eq!(ix.l.re, 4.0);
        let p = PotentialParams::new(1.0, 2.0, 1.0).unwrap();
        let ix = spectral_indices(&p, -2.0).unwrap();
        assert!((ix.m1.re - 2f64.sqrt()).abs() < 1e-15);
        assert!((ix.m2.re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn index_identities() {
        let p = reference();
        for k in 0..100 {
            let e = -2.6 - 7.3 * k as f64 / 99.0;
            let ix = spectral_indices(&p, e).unwrap();
            let prod = ix.m1 * ix.m2;
            assert!((prod.re - 2.5).abs() < 1e-12 * 2.5 && prod.im.abs() < 1e-14);
            let sum_sq = ix.m1 * ix.m1 + ix.m2 * ix.m2;
            assert!((sum_sq.re + 2.0 * e).abs() < 1e-12 * 2.0 * e.abs());
            assert!(ix.m1.re >= ix.m2.re.abs() && ix.m2.re >= 0.0);
            assert_eq!(ix.m1.im, 0.0);
        }
    }

    #[test]
    fn unsupported_regime() {
        let p = PotentialParams::new(-1.0, 0.0, 1.0).unwrap();
        assert!(matches!(spectral_indices(&p, -1.0), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn half_tanh_logs_are_stable() {
        for u in [-400.0, -3.0, 0.0, 0.7, 400.0] {
            let (ln_a, ln_b) = half_tanh_logs(u);
            let t: f64 = f64::tanh(u);
            if u.abs() < 10.0 {
                assert!((ln_a.exp() - (1.0 - t) / 2.0).abs() < 1e-15);
                assert!((ln_b.exp() - (1.0 + t) / 2.0).abs() < 1e-15);
            }
            assert!(ln_a.is_finite() && ln_b.is_finite());
        }
    }

    #[test]
    fn dirichlet_vanishes_on_the_wall() {
        let p = PotentialParams::new(10.0, 2.5, 1.5).unwrap();
        let u0 = p.wall();
        for e in [-9.0, -6.2, -3.1] {
            let interior = greens_dirichlet(&p, e, 0.4, 0.9).unwrap().norm();
            for u in [u0 + 0.1, 0.5, 3.0] {
                let g = greens_dirichlet(&p, e, u0, u).unwrap().norm();
                assert!(g <= 1e-10 * interior, "E={e} u={u}: {g} vs {interior}");
            }
        }
    }

    #[test]
    fn delta_perturbed_reduces_to_full_line_when_switched_off() {
        let p = reference();
        let g = greens_full_line(&p, -4.0, 0.3, 0.7).unwrap();
        let gd = greens_delta_perturbed(&p, -4.0, 1e-12, 0.3, 0.7).unwrap();
        assert!((g - gd).norm() <= 1e-8);
    }

    #[test]
    fn full_line_gamma_pole_is_reported() {
        // M1 - L = 0: M1 = 4, M2 = 2.5 / 4, E = -(M1^2 + M2^2) / 2
        let p = reference();
        let e = -(16.0 + 0.625f64 * 0.625) / 2.0;
        assert!(matches!(greens_full_line(&p, e, 0.1, 0.2), Err(Error::ResolventPole { .. })));
    }
}
