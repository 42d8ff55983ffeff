use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rosen_morse::oracle::{fd_eigen, raw_eigenvalues, shoot_eigen, sign_changes, GridSpec};
use rosen_morse::{Error, PotentialParams};

fn golden(name: &str) -> Vec<f64> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .enumerate()
        .map(|(k, l)| {
            let mut it = l.split_whitespace();
            assert_eq!(it.next().unwrap().parse::<usize>().unwrap(), k);
            it.next().unwrap().parse().unwrap()
        })
        .collect()
}

fn box_levels(n: usize, length: f64) -> Vec<f64> {
    (1..=n).map(|k| (k as f64 * PI / length).powi(2) / 2.0).collect()
}

#[test]
fn particle_in_a_box() {
    let p = PotentialParams::new(0.0, 0.0, 1.0).unwrap();
    let g = GridSpec::new(1.0, 5e-4).unwrap();
    let exact = box_levels(6, 1.0);
    let result = fd_eigen(&p, &g, exact[5] + 1.0).unwrap();
    assert_eq!(result.eigenvalues.len(), 6);
    for (k, (e, x)) in result.eigenvalues.iter().zip(&exact).enumerate() {
        assert!((e - x).abs() <= 1e-6 * x, "level {k}: {e} vs {x}");
        assert_eq!(result.node_counts[k], k);
        let shot = shoot_eigen(&p, &g, (x * 0.99, x * 1.01)).unwrap();
        assert!((shot - x).abs() <= 1e-6 * x, "shooting level {k}: {shot} vs {x}");
    }
}

#[test]
fn box_eigenvectors_are_sines() {
    let p = PotentialParams::new(0.0, 0.0, 1.0).unwrap();
    let g = GridSpec::new(2.0, 1e-3).unwrap();
    let result = fd_eigen(&p, &g, box_levels(3, 2.0)[2] + 0.1).unwrap();
    for k in 0..3 {
        let kk = (k + 1) as f64 * PI / 2.0;
        for r in [0.3, 0.77, 1.5] {
            let exact = (kk * r).sin();
            assert!((result.eigenvector_at(k, r) - exact).abs() < 1e-5, "k={k} r={r}");
        }
    }
}

#[test]
fn reference_sets_match_frozen_values() {
    for (tag, q) in [("0.5", 0.5), ("1", 1.0), ("1.5", 1.5)] {
        let p = PotentialParams::new(10.0, 2.5, q).unwrap();
        let g = GridSpec::standard(&p);
        for (upper, file) in [(-2.5, format!("oracle_q{tag}.txt")), (2.5, format!("oracle_q{tag}_below_v2.txt"))] {
            let frozen = golden(&file);
            let result = fd_eigen(&p, &g, upper).unwrap();
            assert_eq!(result.eigenvalues.len(), frozen.len(), "{file}");
            for (e, f) in result.eigenvalues.iter().zip(&frozen) {
                assert!((e - f).abs() <= 1e-12 * f.abs(), "{file}: {e} vs {f}");
            }
            for w in result.eigenvalues.windows(2) {
                assert!(w[1] > w[0]);
            }
            for (k, n) in result.node_counts.iter().enumerate() {
                assert_eq!(*n, k);
            }
        }
    }
}

#[test]
fn shooting_agrees_with_finite_differences() {
    for q in [0.5, 1.0, 1.5] {
        let p = PotentialParams::new(10.0, 2.5, q).unwrap();
        let g = GridSpec::standard(&p);
        let result = fd_eigen(&p, &g, 2.5).unwrap();
        let e = &result.eigenvalues;
        for k in 0..e.len() {
            let lo = if k == 0 { e[0] - 1.0 } else { 0.5 * (e[k - 1] + e[k]) };
            let hi = if k + 1 < e.len() { 0.5 * (e[k] + e[k + 1]) } else { 0.5 * (e[k] + 2.5) };
            let shot = shoot_eigen(&p, &g, (lo, hi)).unwrap();
            assert!((shot - e[k]).abs() <= 1e-6 * e[k].abs(), "q={q} k={k}: {shot} vs {}", e[k]);
        }
    }
}

#[test]
fn second_order_convergence() {
    let p = PotentialParams::new(10.0, 2.5, 1.0).unwrap();
    let levels: Vec<Vec<f64>> = [1e-3, 5e-4, 2.5e-4]
        .iter()
        .map(|&h| raw_eigenvalues(&p, &GridSpec::new(40.0, h).unwrap(), 2).unwrap())
        .collect();
    for (k, ((a, b), c)) in levels[0].iter().zip(&levels[1]).zip(&levels[2]).enumerate() {
        let d1 = (a - b).abs();
        let d2 = (b - c).abs();
        assert!(d1 >= 3.0 * d2, "level {k}: {d1} vs {d2}");
    }
}

#[test]
fn empty_bracket_is_an_error() {
    let p = PotentialParams::new(10.0, 2.5, 1.0).unwrap();
    let g = GridSpec::standard(&p);
    assert!(matches!(shoot_eigen(&p, &g, (-9.0, -8.0)), Err(Error::Bracket { .. })));
    assert!(matches!(shoot_eigen(&p, &g, (-3.0, -4.0)), Err(Error::Bracket { .. })));
}

#[test]
fn shallow_well_has_no_deep_levels() {
    let p = PotentialParams::new(0.01, 0.5, 1.0).unwrap();
    let result = fd_eigen(&p, &GridSpec::standard(&p), -0.5).unwrap();
    assert!(result.eigenvalues.is_empty());
}

#[test]
fn sign_changes_ignore_numerical_noise() {
    assert_eq!(sign_changes(&[1.0, 2.0, -1.0, -2.0, 1e-12, -1e-12, 3.0]), 2);
    assert_eq!(sign_changes(&[0.0, 1.0, 0.5]), 0);
}
