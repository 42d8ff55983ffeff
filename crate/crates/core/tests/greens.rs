use num_complex::Complex64 as C;
use proptest::prelude::*;
use rosen_morse::greens::{
    greens_delta_perturbed, greens_dirichlet, greens_full_line, spectral_indices,
};
use rosen_morse::special::hyp2f1;
use rosen_morse::PotentialParams;

fn params(q: f64) -> PotentialParams {
    PotentialParams::new(10.0, 2.5, q).unwrap()
}

/// Full-line potential in `u`, written out independently of the library.
fn v_u(p: &PotentialParams, u: f64) -> f64 {
    let a2 = p.length_scale * p.length_scale;
    a2 * (p.asymmetry * u.tanh() - p.well_depth / (p.deformation * u.cosh().powi(2)))
}

/// RK4 for `phi'' = (2M/hbar^2)(V(u) - a^2 E) phi` from `from` to `to`.
fn integrate(p: &PotentialParams, e: f64, from: f64, to: f64, start: (f64, f64)) -> (f64, f64) {
    let k = 2.0 * p.mass / (p.hbar * p.hbar);
    let a2e = p.length_scale.powi(2) * e;
    let f = |u: f64, y: (f64, f64)| (y.1, k * (v_u(p, u) - a2e) * y.0);
    let steps = ((to - from).abs() / 1e-3).ceil() as usize;
    let h = (to - from) / steps as f64;
    let (mut u, mut y) = (from, start);
    for _ in 0..steps {
        let k1 = f(u, y);
        let k2 = f(u + h / 2.0, (y.0 + h / 2.0 * k1.0, y.1 + h / 2.0 * k1.1));
        let k3 = f(u + h / 2.0, (y.0 + h / 2.0 * k2.0, y.1 + h / 2.0 * k2.1));
        let k4 = f(u + h, (y.0 + h * k3.0, y.1 + h * k3.1));
        y.0 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        y.1 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        u += h;
    }
    y
}

/// `G = (2 i M / hbar) phi_L(u_<) phi_R(u_>) / W(phi_L, phi_R)` from shooting.
fn wronskian_greens(p: &PotentialParams, e: f64, u1: f64, u2: f64) -> C {
    let (lo, hi) = (u1.min(u2), u1.max(u2));
    let a2 = p.length_scale.powi(2);
    let kl = (2.0 * p.mass * (-a2 * p.asymmetry - a2 * e)).sqrt() / p.hbar;
    let kr = (2.0 * p.mass * (a2 * p.asymmetry - a2 * e)).sqrt() / p.hbar;
    let (ul, ur) = (-18.0, 18.0);
    let left = |to: f64| integrate(p, e, ul, to, ((kl * ul).exp(), kl * (kl * ul).exp()));
    let right = |to: f64| integrate(p, e, ur, to, ((-kr * ur).exp(), -kr * (-kr * ur).exp()));
    let (l_lo, _) = left(lo);
    let (r_hi, _) = right(hi);
    let (lm, dlm) = left(0.0);
    let (rm, drm) = right(0.0);
    let w = lm * drm - dlm * rm;
    C::new(0.0, 2.0 * p.mass / p.hbar) * (l_lo * r_hi / w)
}

#[test]
fn full_line_matches_wronskian_construction() {
    for q in [0.5, 1.0, 1.5] {
        let p = params(q);
        for e in [-7.0, -4.0, -3.0] {
            for (u1, u2) in [(0.3, 0.7), (-0.5, 1.2), (0.9, 0.1)] {
                let g = greens_full_line(&p, e, u1, u2).unwrap();
                let oracle = wronskian_greens(&p, e, u1, u2);
                let rel = (g - oracle).norm() / oracle.norm();
                assert!(rel < 1e-8, "q={q} E={e} ({u1},{u2}): {g} vs {oracle}");
            }
        }
    }
}

#[test]
fn swapped_argument_assignment_does_not_decay() {
    let p = params(1.0);
    let e = -4.0;
    let ix = spectral_indices(&p, e).unwrap();
    let (a, b) = ix.upper();
    let power = |u: f64| {
        let t = u.tanh();
        let (x, y) = ((1.0 - t) / 2.0, (1.0 + t) / 2.0);
        (C::from(x).ln() * ((ix.m1 + ix.m2) * 0.5) + C::from(y).ln() * ((ix.m1 - ix.m2) * 0.5)).exp()
    };
    let swapped = |lo: f64, hi: f64| {
        power(lo)
            * power(hi)
            * hyp2f1(a, b, ix.lower_right(), (1.0 - lo.tanh()) / 2.0).unwrap()
            * hyp2f1(a, b, ix.lower_left(), (1.0 + hi.tanh()) / 2.0).unwrap()
    };
    let near = swapped(0.3, 3.0).norm();
    let far = swapped(0.3, 6.0).norm();
    assert!(far > 10.0 * near, "swapped form should grow: {near} -> {far}");
    let g_near = greens_full_line(&p, e, 0.3, 3.0).unwrap().norm();
    let g_far = greens_full_line(&p, e, 0.3, 6.0).unwrap().norm();
    assert!(g_far < 1e-3 * g_near);
}

#[test]
fn satisfies_the_radial_equation_off_diagonal() {
    let h = 1e-3;
    for q in [0.5, 1.0, 1.5] {
        let p = params(q);
        let kin = p.hbar * p.hbar / (2.0 * p.mass);
        for e in [-7.5, -3.3] {
            let u1 = 0.2;
            for u in [-0.6, 0.8, 1.7] {
                let g = |x: f64| greens_full_line(&p, e, u1, x).unwrap();
                let d2 = (-g(u + 2.0 * h) + 16.0 * g(u + h) - 30.0 * g(u) + 16.0 * g(u - h)
                    - g(u - 2.0 * h))
                    / (12.0 * h * h);
                let residual = d2 * kin + g(u) * (e - v_u(&p, u));
                let scale = g(u).norm() * (e.abs() + v_u(&p, u).abs());
                assert!(residual.norm() <= 1e-5 * scale, "q={q} E={e} u={u}: {residual}");
            }
        }
    }
}

/// Same construction with the left solution continued through a
/// `-lambda delta(u - u0)` jump `phi'(u0+) - phi'(u0-) = -(2 M lambda / hbar^2) phi(u0)`.
fn wronskian_greens_delta(p: &PotentialParams, e: f64, lambda: f64, u1: f64, u2: f64) -> C {
    let u0 = p.wall();
    let (lo, hi) = (u1.min(u2), u1.max(u2));
    assert!(lo > u0);
    let a2 = p.length_scale.powi(2);
    let kl = (2.0 * p.mass * (-a2 * p.asymmetry - a2 * e)).sqrt() / p.hbar;
    let kr = (2.0 * p.mass * (a2 * p.asymmetry - a2 * e)).sqrt() / p.hbar;
    let (ul, ur) = (-18.0, 18.0);
    let (f0, d0) = integrate(p, e, ul, u0, ((kl * ul).exp(), kl * (kl * ul).exp()));
    let jump = d0 - 2.0 * p.mass * lambda / (p.hbar * p.hbar) * f0;
    let left = |to: f64| integrate(p, e, u0, to, (f0, jump));
    let right = |to: f64| integrate(p, e, ur, to, ((-kr * ur).exp(), -kr * (-kr * ur).exp()));
    let (l_lo, _) = left(lo);
    let (r_hi, _) = right(hi);
    let (lm, dlm) = left(1.0);
    let (rm, drm) = right(1.0);
    C::new(0.0, 2.0 * p.mass / p.hbar) * (l_lo * r_hi / (lm * drm - dlm * rm))
}

#[test]
fn delta_form_matches_jump_condition_construction() {
    for (q, lambda) in [(1.0, -1e3), (1.0, 3.0), (1.5, -20.0), (0.5, 7.5)] {
        let p = params(q);
        let (e, u1, u2) = (-4.0, p.wall() + 0.3, p.wall() + 0.7);
        let value = greens_delta_perturbed(&p, e, lambda, u1, u2).unwrap();
        let oracle = wronskian_greens_delta(&p, e, lambda, u1, u2);
        let rel = (value - oracle).norm() / oracle.norm();
        assert!(rel < 1e-7, "q={q} lambda={lambda}: {value} vs {oracle}");
    }
}

#[test]
fn dirichlet_satisfies_the_radial_equation() {
    let h = 1e-3;
    let p = params(1.5);
    let kin = p.hbar * p.hbar / (2.0 * p.mass);
    let (e, u1) = (-6.0, 0.4);
    for u in [-0.1, 1.1, 2.5] {
        let g = |x: f64| greens_dirichlet(&p, e, u1, x).unwrap();
        let d2 = (-g(u + 2.0 * h) + 16.0 * g(u + h) - 30.0 * g(u) + 16.0 * g(u - h) - g(u - 2.0 * h))
            / (12.0 * h * h);
        let residual = d2 * kin + g(u) * (e - v_u(&p, u));
        let scale = g(u).norm() * (e.abs() + v_u(&p, u).abs());
        assert!(residual.norm() <= 1e-5 * scale, "u={u}: {residual}");
    }
}

#[test]
fn delta_form_converges_at_first_order() {
    let p = params(1.0);
    let (e, u1, u2) = (-4.0, 0.3, 0.7);
    let gd = greens_dirichlet(&p, e, u1, u2).unwrap();
    let diff = |l: f64| (greens_delta_perturbed(&p, e, l, u1, u2).unwrap() - gd).norm();
    for l in [-1e2, -1e3] {
        let ratio = diff(l) / diff(2.0 * l);
        assert!((ratio - 2.0).abs() < 0.05, "lambda={l}: ratio {ratio}");
        let decade = diff(l) / diff(10.0 * l);
        assert!((decade - 10.0).abs() < 0.5, "lambda={l}: decade ratio {decade}");
    }
}

#[test]
fn delta_form_approaches_dirichlet() {
    let p = params(1.5);
    let (e, u1, u2) = (-5.0, 0.3, 0.8);
    let gd = greens_dirichlet(&p, e, u1, u2).unwrap();
    let mut last = f64::INFINITY;
    for k in 2..7 {
        for sign in [-1.0, 1.0] {
            let lambda = sign * 10f64.powi(k);
            let diff = (greens_delta_perturbed(&p, e, lambda, u1, u2).unwrap() - gd).norm();
            assert!(diff * lambda.abs() < 1e2 * gd.norm().max(1e-3), "lambda={lambda}: {diff}");
            if sign > 0.0 {
                assert!(diff < last);
                last = diff;
            }
        }
    }
}

#[test]
fn dirichlet_matches_wall_subtracted_wronskian() {
    let p = params(0.5);
    let u0 = p.wall();
    let e = -3.7;
    let g = |x, y| wronskian_greens(&p, e, x, y);
    for (u1, u2) in [(u0 + 0.2, 1.0), (0.9, u0 + 0.05)] {
        let oracle = g(u2, u1) - g(u2, u0) * g(u0, u1) / g(u0, u0);
        let value = greens_dirichlet(&p, e, u1, u2).unwrap();
        assert!((value - oracle).norm() < 1e-8 * oracle.norm(), "{value} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exchange_symmetry(
        q in 0.3f64..2.0,
        e in -9.0f64..-2.6,
        u1 in -2.0f64..3.0,
        u2 in -2.0f64..3.0,
        lambda in -50.0f64..50.0,
    ) {
        let p = params(q);
        let u0 = p.wall();
        if let (Ok(a), Ok(b)) = (greens_full_line(&p, e, u1, u2), greens_full_line(&p, e, u2, u1)) {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
        let (w1, w2) = (u0 + (u1 - u0).abs(), u0 + (u2 - u0).abs());
        if let (Ok(a), Ok(b)) = (greens_dirichlet(&p, e, w1, w2), greens_dirichlet(&p, e, w2, w1)) {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
        if let (Ok(a), Ok(b)) = (
            greens_delta_perturbed(&p, e, lambda, u1, u2),
            greens_delta_perturbed(&p, e, lambda, u2, u1),
        ) {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }
}
