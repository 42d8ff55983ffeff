//! Grid-based reference eigensolvers for the radial equation
//!
//! ```text
//! -hbar^2/(2M) phi'' + V_q(r) phi = E phi,   phi(0) = phi(r_max) = 0.
//! ```
//!
//! [`fd_eigen`] diagonalises the three-point discretisation by Sturm-sequence
//! bisection and Richardson-extrapolates over `h` and `h/2`; [`shoot_eigen`]
//! integrates outward with Numerov and matches the decaying tail at `r_max`.
//! Neither depends on the hypergeometric machinery.

use crate::error::{Error, Result};
use crate::hyperbolic::{potential_r_unchecked, PotentialParams};

/// Smallest accepted number of interior grid points.
pub const MIN_INTERIOR_POINTS: usize = 1000;

const MAX_BISECTIONS: usize = 200;
const INVERSE_ITERATIONS: usize = 3;

/// Uniform grid `r_i = i h`, `i = 1..=n`, with `n = r_max / h - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub h: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(r_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && r_max.is_finite() && r_max > h) {
            return Err(Error::Domain(format!("invalid grid r_max={r_max}, h={h}")));
        }
        let cells = (r_max / h).round();
        if ((cells * h - r_max) / r_max).abs() > 1e-9 {
            return Err(Error::Domain(format!("h={h} does not divide r_max={r_max}")));
        }
        let n = cells as usize - 1;
        if n < MIN_INTERIOR_POINTS {
            return Err(Error::Domain(format!(
                "grid has {n} interior points, need at least {MIN_INTERIOR_POINTS}"
            )));
        }
        Ok(Self { r_max, h, n })
    }

    /// `r_max = 40 a`, `h = 1e-3 a`.
    pub fn standard(p: &PotentialParams) -> Self {
        Self::new(40.0 * p.length_scale, 1e-3 * p.length_scale).expect("standard grid is valid")
    }

    pub fn halved(&self) -> Self {
        Self { r_max: self.r_max, h: self.h / 2.0, n: 2 * self.n + 1 }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n).map(move |i| i as f64 * self.h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub grid: GridSpec,
    /// Richardson-extrapolated eigenvalues, increasing.
    pub eigenvalues: Vec<f64>,
    /// Raw eigenvalues on `grid` before extrapolation.
    pub raw_eigenvalues: Vec<f64>,
    /// Eigenvectors on the interior points of `grid`, `sum phi_i^2 h = 1`,
    /// positive on the first lobe.
    pub eigenvectors: Vec<Vec<f64>>,
    pub node_counts: Vec<usize>,
}

impl OracleResult {
    /// Linear interpolation of eigenvector `k`, zero outside `(0, r_max)`.
    pub fn eigenvector_at(&self, k: usize, r: f64) -> f64 {
        let v = &self.eigenvectors[k];
        let s = r / self.grid.h;
        if s <= 0.0 || s >= (self.grid.n + 1) as f64 {
            return 0.0;
        }
        let i = s.floor() as usize;
        let t = s - i as f64;
        let at = |j: usize| if j == 0 || j > self.grid.n { 0.0 } else { v[j - 1] };
        (1.0 - t) * at(i) + t * at(i + 1)
    }
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn assemble(p: &PotentialParams, g: &GridSpec) -> Result<Self> {
        let kinetic = p.hbar * p.hbar / (2.0 * p.mass * g.h * g.h);
        let diag: Vec<f64> = g.points().map(|r| 2.0 * kinetic + potential_r_unchecked(p, r)).collect();
        if diag.iter().any(|d| !d.is_finite()) {
            return Err(Error::Numeric("potential is not finite on the grid".into()));
        }
        Ok(Self { diag, off: -kinetic })
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - x } else { a - x - off2 / d };
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    /// Eigenvalue with zero-based index `k`.
    fn eigenvalue(&self, k: usize) -> Result<f64> {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                return Ok(0.5 * (lo + hi));
            }
        }
        Err(Error::Numeric(format!(
            "eigenvalue {k} bisection did not converge: [{lo:e}, {hi:e}]"
        )))
    }

    /// Solves `(T - shift) x = b` in place by Gaussian elimination with
    /// partial pivoting.
    fn solve_shifted(&self, shift: f64, b: &mut [f64]) {
        let n = self.diag.len();
        let mut d: Vec<f64> = self.diag.iter().map(|a| a - shift).collect();
        let mut du = vec![self.off; n - 1];
        let mut dl = vec![self.off; n - 1];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let guard = |x: f64| if x == 0.0 { f64::EPSILON * self.off.abs() } else { x };
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                let fact = dl[i] / guard(d[i]);
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                du[i] = temp;
                let bi = b[i];
                b[i] = b[i + 1];
                b[i + 1] = bi - fact * b[i + 1];
            }
            dl[i] = 0.0;
        }
        b[n - 1] /= guard(d[n - 1]);
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / guard(d[n - 2]);
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / guard(d[i]);
        }
    }

    fn eigenvector(&self, eigenvalue: f64, h: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = eigenvalue + 1e-10 * eigenvalue.abs().max(self.off.abs() * h * h);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * (0.37 * i as f64).sin()).collect();
        for _ in 0..INVERSE_ITERATIONS {
            self.solve_shifted(shift, &mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let scale = (x.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let first = x.iter().find(|v| v.abs() > 1e-8 * peak).copied().unwrap_or(1.0);
        let sign = if first < 0.0 { -1.0 } else { 1.0 };
        x.iter_mut().for_each(|v| *v *= sign / scale);
        x
    }
}

/// Strict sign changes of a sampled function, ignoring samples below
/// `1e-8` of its peak.
pub fn sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= 1e-8 * peak {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// The lowest `count` eigenvalues of the discretisation on `g`.
pub fn raw_eigenvalues(p: &PotentialParams, g: &GridSpec, count: usize) -> Result<Vec<f64>> {
    let t = Tridiagonal::assemble(&p.validated()?, g)?;
    (0..count).map(|k| t.eigenvalue(k)).collect()
}

/// Number of discrete eigenvalues below `e` on `g`.
pub fn count_below(p: &PotentialParams, g: &GridSpec, e: f64) -> Result<usize> {
    Ok(Tridiagonal::assemble(&p.validated()?, g)?.count_below(e))
}

/// All eigenvalues below `e_upper`, extrapolated from `g` and `g.halved()`.
pub fn fd_eigen(p: &PotentialParams, g: &GridSpec, e_upper: f64) -> Result<OracleResult> {
    let p = p.validated()?;
    let coarse = Tridiagonal::assemble(&p, g)?;
    let fine = Tridiagonal::assemble(&p, &g.halved())?;
    let count = coarse.count_below(e_upper).max(fine.count_below(e_upper));
    let mut result = OracleResult {
        grid: *g,
        eigenvalues: Vec::with_capacity(count),
        raw_eigenvalues: Vec::with_capacity(count),
        eigenvectors: Vec::with_capacity(count),
        node_counts: Vec::with_capacity(count),
    };
    for k in 0..count {
        let e_h = coarse.eigenvalue(k)?;
        let e_h2 = fine.eigenvalue(k)?;
        let extrapolated = (4.0 * e_h2 - e_h) / 3.0;
        if extrapolated >= e_upper {
            break;
        }
        let v = coarse.eigenvector(e_h, g.h);
        result.node_counts.push(sign_changes(&v));
        result.eigenvalues.push(extrapolated);
        result.raw_eigenvalues.push(e_h);
        result.eigenvectors.push(v);
    }
    Ok(result)
}

/// Boundary condition applied by [`shoot_eigen`] at `r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Tail {
    /// `phi'(r_max) + kappa phi(r_max) = 0`.
    Decay,
    /// `phi(r_max) = 0`, used when `E >= V2` leaves no decaying tail.
    Wall,
}

fn numerov_mismatch(p: &PotentialParams, g: &GridSpec, e: f64, tail: Tail) -> f64 {
    let h = g.h;
    let k = 2.0 * p.mass / (p.hbar * p.hbar);
    let w = |r: f64| 1.0 - h * h / 12.0 * k * (potential_r_unchecked(p, r) - e);
    let cells = g.n + 1;
    let (mut prev, mut cur) = (0.0, h);
    let (mut w_prev, mut w_cur) = (w(0.0), w(h));
    let mut before = 0.0;
    for i in 1..=cells {
        let w_next = w((i + 1) as f64 * h);
        let next = ((12.0 - 10.0 * w_cur) * cur - w_prev * prev) / w_next;
        before = prev;
        prev = cur;
        cur = next;
        w_prev = w_cur;
        w_cur = w_next;
        if cur.abs() > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
            before *= 1e-100;
        }
    }
    // prev = phi(r_max), cur = phi(r_max + h), before = phi(r_max - h)
    match tail {
        Tail::Wall => prev,
        Tail::Decay => {
            let kappa = (k * (p.asymmetry - e)).sqrt();
            let derivative = (cur - before) / (2.0 * h);
            derivative + kappa * prev
        }
    }
}

/// Numerov eigenvalue inside `bracket`, refined by bisection on the tail
/// mismatch.
pub fn shoot_eigen(p: &PotentialParams, g: &GridSpec, bracket: (f64, f64)) -> Result<f64> {
    let p = p.validated()?;
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Bracket { lo, hi });
    }
    let tail = if hi < p.asymmetry { Tail::Decay } else { Tail::Wall };
    let f = |e: f64| numerov_mismatch(&p, g, e, tail);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * mid.abs() {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
