//! Half-line bound states from the quantization condition
//!
//! ```text
//! 2F1(M1 - L, L + M1 + 1; M1 + M2 + 1; q / (q + 1)) = 0,
//! ```
//!
//! their wave functions, normalization and node counts.
//!
//! The default search window is `(V_min, -|V2|)`, where every index is real.
//! [`SearchConfig::extended_window`] opts into `(-|V2|, V2)`, where `M1` and
//! `M2` are complex conjugate-like and the residual is evaluated through the
//! phase-fixed decaying solution instead; that path is experimental.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{SolutionPair, SpectralIndices};
use crate::hyperbolic::{potential_minimum, PotentialParams};
use crate::oracle::sign_changes;
use crate::special::{hyp2f1, nonpositive_integer};

type C = Complex64;

/// Imaginary part tolerated in the real window, relative to `max(1, |F|)`
/// (the series starts at 1, and the value itself vanishes at every root).
const REAL_RESIDUAL_TOLERANCE: f64 = 1e-13;
/// Distance of `M1 - L` from a non-positive integer reported as a
/// coincidence with a full-line pole.
const COINCIDENCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// `(V_min, -|V2|)`, real indices.
    Real,
    /// `(-|V2|, V2)`, complex indices, experimental.
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub e_lo: f64,
    pub e_hi: f64,
    pub scan_points: usize,
    pub root_tol: f64,
    pub max_bisections: usize,
    pub window: Window,
}

impl SearchConfig {
    fn margin(p: &PotentialParams) -> f64 {
        1e-9 * (p.well_depth.abs() + p.asymmetry.abs())
    }

    fn with_bounds(p: &PotentialParams, e_lo: f64, e_hi: f64, window: Window) -> Result<Self> {
        Self {
            e_lo,
            e_hi,
            scan_points: 2000,
            root_tol: 1e-13 * (p.well_depth.abs() + p.asymmetry.abs()).max(f64::MIN_POSITIVE),
            max_bisections: 200,
            window,
        }
        .validated()
    }

    /// `(V_min + eps, -|V2| - eps)` with `eps = 1e-9 (|V1| + |V2|)`.
    ///
    /// Fails with a domain error when the window is empty.
    pub fn real_window(p: &PotentialParams) -> Result<Self> {
        let (_, v_min) = potential_minimum(p)?;
        let eps = Self::margin(p);
        Self::with_bounds(p, v_min + eps, -p.asymmetry.abs() - eps, Window::Real)
    }

    /// `(max(V_min, -|V2|) + eps, V2 - eps)`.
    pub fn extended_window(p: &PotentialParams) -> Result<Self> {
        let (_, v_min) = potential_minimum(p)?;
        let eps = Self::margin(p);
        let lo = v_min.max(-p.asymmetry.abs()) + eps;
        Self::with_bounds(p, lo, p.asymmetry - eps, Window::Extended)
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.e_lo < self.e_hi) {
            return Err(Error::Domain(format!(
                "empty energy window [{}, {}]",
                self.e_lo, self.e_hi
            )));
        }
        if self.scan_points < 100 {
            return Err(Error::Domain(format!("scan_points = {} < 100", self.scan_points)));
        }
        if !(self.root_tol > 0.0 && self.root_tol.is_finite()) {
            return Err(Error::Domain(format!("root_tol = {} must be positive", self.root_tol)));
        }
        Ok(self)
    }

    fn contains(&self, p: &PotentialParams, e: f64) -> bool {
        match self.window {
            Window::Real => e <= -p.asymmetry.abs(),
            Window::Extended => e > -p.asymmetry.abs() && e < p.asymmetry,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub n_r: usize,
    pub energy: f64,
    pub normalization: f64,
    pub params: PotentialParams,
    pub indices: SpectralIndices,
    /// `M1 - L` lies within `1e-6` of a non-positive integer, so the root
    /// sits on a pole of the full-line Gamma prefactor.
    pub full_line_coincidence: bool,
}

/// `2F1(M1 - L, L + M1 + 1; M1 + M2 + 1; q / (q + 1))` for `E <= -|V2|`.
pub fn quantization_residual(p: &PotentialParams, energy: f64) -> Result<C> {
    if !(energy <= -p.asymmetry.abs()) {
        return Err(Error::Domain(format!(
            "E = {energy} outside the real window E <= -|V2| = {}",
            -p.asymmetry.abs()
        )));
    }
    let pair = SolutionPair::new(p, energy)?;
    let ix = &pair.indices;
    let (a, b) = ix.upper();
    let c = ix.lower_right();
    if let Some(n) = nonpositive_integer(c) {
        return Err(Error::Pole(n));
    }
    let q = p.deformation;
    let value = hyp2f1(a, b, c, q / (q + 1.0))?;
    if value.im.abs() > REAL_RESIDUAL_TOLERANCE * value.norm().max(1.0) {
        return Err(Error::Numeric(format!("residual {value} is not real at E = {energy}")));
    }
    Ok(C::new(value.re, 0.0))
}

/// Decaying solution at the wall, normalised to tend to `+1` times its
/// exponential tail. It is real for every `E < V2` and vanishes exactly at the
/// roots of the quantization condition. The imaginary rounding residue is
/// checked against the size of the power prefactor.
pub fn wall_value(p: &PotentialParams, energy: f64) -> Result<f64> {
    if !(energy < p.asymmetry) {
        return Err(Error::Domain(format!("E = {energy} >= V2 has no decaying solution")));
    }
    let pair = SolutionPair::new(p, energy)?;
    let u0 = p.wall();
    let power = pair.power(u0);
    let factor = pair.right_factor(u0)?;
    let value = power * factor;
    if value.im.abs() > 1e-8 * power.norm() * factor.norm().max(1.0) {
        return Err(Error::Numeric(format!("wall value {value} is not real at E = {energy}")));
    }
    Ok(value.re)
}

fn residual(p: &PotentialParams, window: Window, e: f64) -> Result<f64> {
    match window {
        Window::Real => Ok(quantization_residual(p, e)?.re),
        Window::Extended => wall_value(p, e),
    }
}

struct Bracketing<'a> {
    p: &'a PotentialParams,
    cfg: &'a SearchConfig,
    budget: usize,
}

impl Bracketing<'_> {
    fn f(&self, e: f64) -> Option<f64> {
        residual(self.p, self.cfg.window, e).ok().filter(|v| v.is_finite())
    }

    /// Sign changes of the residual on `n` equal cells of `[lo, hi]`.
    fn scan(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64, f64, f64)> {
        let samples: Vec<(f64, Option<f64>)> = (0..=n)
            .map(|i| {
                let e = lo + (hi - lo) * i as f64 / n as f64;
                (e, self.f(e))
            })
            .collect();
        samples
            .windows(2)
            .filter_map(|w| match (w[0], w[1]) {
                ((e0, Some(f0)), (e1, Some(f1))) if f0 == 0.0 || f0.signum() != f1.signum() => {
                    Some((e0, e1, f0, f1))
                }
                _ => None,
            })
            .filter(|&(_, _, _, f1)| f1 != 0.0)
            .collect()
    }

    /// Bisection; a bracket around a pole rather than a zero is subdivided.
    fn refine(&mut self, lo: f64, hi: f64, f_lo: f64, f_hi: f64, roots: &mut Vec<f64>) -> Result<()> {
        if f_lo == 0.0 {
            roots.push(lo);
            return Ok(());
        }
        let (mut a, mut b, mut fa) = (lo, hi, f_lo);
        while b - a > self.cfg.root_tol {
            if self.budget == 0 {
                return Err(Error::Numeric(format!(
                    "bisection budget exhausted in [{a:e}, {b:e}]"
                )));
            }
            self.budget -= 1;
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            match self.f(mid) {
                Some(0.0) => {
                    a = mid;
                    b = mid;
                }
                Some(fm) if fm.signum() == fa.signum() => {
                    a = mid;
                    fa = fm;
                }
                Some(_) => b = mid,
                None => return self.subdivide(lo, hi, roots),
            }
        }
        let root = 0.5 * (a + b);
        let at_root = self.f(root).unwrap_or(f64::INFINITY).abs();
        if at_root > f_lo.abs().max(f_hi.abs()) {
            return self.subdivide(lo, hi, roots);
        }
        roots.push(root);
        Ok(())
    }

    fn subdivide(&mut self, lo: f64, hi: f64, roots: &mut Vec<f64>) -> Result<()> {
        if self.budget < 64 || hi - lo <= 16.0 * self.cfg.root_tol {
            return Err(Error::Numeric(format!(
                "residual pole in [{lo:e}, {hi:e}] could not be separated from a root"
            )));
        }
        self.budget -= 64;
        let pieces = 8;
        for (a, b, fa, fb) in self.scan(lo, hi, pieces) {
            let at_mid = self.f(0.5 * (a + b));
            if b - a <= 16.0 * self.cfg.root_tol && at_mid.is_none_or(|v| v.abs() > fa.abs().max(fb.abs())) {
                continue;
            }
            self.refine(a, b, fa, fb, roots)?;
        }
        Ok(())
    }
}

fn search_roots(p: &PotentialParams, cfg: &SearchConfig) -> Result<Vec<f64>> {
    let mut work = Bracketing { p, cfg, budget: cfg.max_bisections * cfg.scan_points.max(1) };
    let mut roots = Vec::new();
    for (lo, hi, f_lo, f_hi) in work.scan(cfg.e_lo, cfg.e_hi, cfg.scan_points) {
        let mut local = Vec::new();
        let per_bracket = cfg.max_bisections;
        let saved = work.budget;
        work.budget = per_bracket.min(saved);
        work.refine(lo, hi, f_lo, f_hi, &mut local)?;
        work.budget = saved - (per_bracket.min(saved) - work.budget);
        roots.extend(local);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    // Near-coincident roots: rescan the gap at ten times the resolution.
    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last().copied() {
            Some(prev) if r - prev < cfg.root_tol => {
                let fine = SearchConfig { root_tol: cfg.root_tol / 10.0, ..*cfg };
                let mut finer = Bracketing { p, cfg: &fine, budget: cfg.max_bisections };
                let (lo, hi) = (prev - cfg.root_tol, r + cfg.root_tol);
                let mut found = Vec::new();
                for (a, b, fa, fb) in finer.scan(lo, hi, 10) {
                    finer.refine(a, b, fa, fb, &mut found)?;
                }
                merged.pop();
                if found.len() >= 2 {
                    merged.extend(found);
                } else {
                    merged.push(0.5 * (prev + r));
                }
            }
            _ => merged.push(r),
        }
    }
    Ok(merged)
}

/// Bound states in `cfg`'s window, increasing in energy, numbered from
/// zero, normalized and checked against their node counts.
///
/// In the extended window the numbering continues after the real-window
/// states, which are counted first.
pub fn find_bound_states(p: &PotentialParams, cfg: &SearchConfig) -> Result<Vec<BoundState>> {
    let p = p.validated()?;
    let cfg = cfg.validated()?;
    if !(cfg.contains(&p, cfg.e_lo) && cfg.contains(&p, cfg.e_hi)) {
        return Err(Error::Domain(format!(
            "search window [{}, {}] leaves the {:?} window",
            cfg.e_lo, cfg.e_hi, cfg.window
        )));
    }
    let first_index = match cfg.window {
        Window::Real => 0,
        Window::Extended => match SearchConfig::real_window(&p) {
            Ok(real) => search_roots(&p, &real)?.len(),
            Err(Error::Domain(_)) => 0,
            Err(e) => return Err(e),
        },
    };
    let roots = search_roots(&p, &cfg)?;
    let mut states = Vec::with_capacity(roots.len());
    for (k, energy) in roots.into_iter().enumerate() {
        let indices = SolutionPair::new(&p, energy)?.indices;
        let (alpha, _) = indices.upper();
        let nearest = alpha.re.round();
        let mut state = BoundState {
            n_r: first_index + k,
            energy,
            normalization: 1.0,
            params: p,
            indices,
            full_line_coincidence: nearest <= 0.0 && (alpha - nearest).norm() < COINCIDENCE_TOLERANCE,
        };
        let quad = Quadrature::for_state(&state);
        state.normalization = normalize(&state, quad.r_max, quad.step)?;
        let nodes = count_nodes(&state, &NodeGrid::for_state(&state))?;
        if nodes != state.n_r {
            return Err(Error::Consistency(format!(
                "state at E = {energy} has {nodes} nodes but index {}",
                state.n_r
            )));
        }
        states.push(state);
    }
    Ok(states)
}

/// All states in the default real window; empty when that window is empty.
pub fn bound_states(p: &PotentialParams) -> Result<Vec<BoundState>> {
    match SearchConfig::real_window(p) {
        Ok(cfg) => find_bound_states(p, &cfg),
        Err(Error::Domain(msg)) if msg.starts_with("empty") => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

fn unnormalized(pair: &SolutionPair, p: &PotentialParams, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("r = {r} must be non-negative")));
    }
    Ok(pair.right(r / p.length_scale + p.wall())?.re)
}

/// `C A^((M1+M2)/2) B^((M1-M2)/2) 2F1(M1 - L, L + M1 + 1; M1 + M2 + 1; A)`
/// with `A = q / (e^(2r/a) + q)` and `B = 1 - A`.
pub fn wavefunction(state: &BoundState, r: f64) -> Result<f64> {
    let pair = SolutionPair::new(&state.params, state.energy)?;
    Ok(state.normalization * unnormalized(&pair, &state.params, r)?)
}

/// The wave function on `r_i = i step`, `i = 0..=n`.
pub fn sample(state: &BoundState, step: f64, n: usize) -> Result<Vec<f64>> {
    let pair = SolutionPair::new(&state.params, state.energy)?;
    (0..=n)
        .map(|i| Ok(state.normalization * unnormalized(&pair, &state.params, i as f64 * step)?))
        .collect()
}

/// Composite Simpson integration parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub r_max: f64,
    pub step: f64,
}

impl Quadrature {
    /// Range wide enough that `phi^2` has fallen by more than `e^-60`
    /// below its scale, step `a / 500`.
    pub fn for_state(state: &BoundState) -> Self {
        let a = state.params.length_scale;
        let decay = (state.indices.m1 + state.indices.m2).re.max(1e-3);
        let r_max = a * (state.params.wall().abs() + 4.0 + 30.0 / decay).max(30.0);
        Self { r_max, step: a / 500.0 }
    }
}

/// `C > 0` with `int_0^r_max phi^2 dr = 1` by composite Simpson; the sign of
/// the wave function on its first lobe is made positive.
pub fn normalize(state: &BoundState, r_max: f64, step: f64) -> Result<f64> {
    if !(r_max > 0.0 && step > 0.0 && step < r_max) {
        return Err(Error::Domain(format!("invalid quadrature r_max={r_max}, step={step}")));
    }
    let mut cells = (r_max / step).ceil() as usize;
    cells += cells % 2;
    let h = r_max / cells as f64;
    let raw = BoundState { normalization: 1.0, ..state.clone() };
    let values = sample(&raw, h, cells)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("wave function is not finite on the quadrature grid".into()));
    }
    let integral = simpson(&values.iter().map(|v| v * v).collect::<Vec<_>>(), h);
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let first = values.iter().skip(1).find(|v| v.abs() > 1e-8 * peak).copied().unwrap_or(1.0);
    Ok(first.signum() / integral.sqrt())
}

/// Composite Simpson rule on an odd number of equally spaced samples.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let inner: f64 = values[1..n]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (values[0] + inner + values[n])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGrid {
    pub r_max: f64,
    pub step: f64,
}

impl NodeGrid {
    pub fn for_state(state: &BoundState) -> Self {
        let q = Quadrature::for_state(state);
        Self { r_max: q.r_max, step: state.params.length_scale / 200.0 }
    }
}

/// Strict sign changes of the wave function on `(0, r_max)`.
pub fn count_nodes(state: &BoundState, grid: &NodeGrid) -> Result<usize> {
    let a = state.params.length_scale;
    if !(grid.step > 0.0 && grid.step <= a / 100.0 && grid.r_max > 2.0 * grid.step) {
        return Err(Error::Domain(format!(
            "node grid needs 0 < step <= a/100 and r_max > 2 step, got {grid:?}"
        )));
    }
    let n = (grid.r_max / grid.step).floor() as usize;
    let values = sample(state, grid.step, n)?;
    let interior = &values[1..n];
    if interior[0].signum() != interior[1].signum() && interior[0] != 0.0 {
        return Err(Error::NodeAmbiguity);
    }
    Ok(sign_changes(interior))
}
