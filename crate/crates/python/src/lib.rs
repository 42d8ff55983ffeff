use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use rosen_morse::{greens, hyperbolic, oracle, special, spectrum, Complex64, Error};

fn to_py(err: Error) -> PyErr {
    let text = err.to_string();
    match err {
        Error::Domain(_) | Error::Parse { .. } | Error::UnsupportedRegime(_) => PyValueError::new_err(text),
        Error::Pole(_) | Error::ResolventPole { .. } => PyZeroDivisionError::new_err(text),
        Error::Convergence { .. } | Error::Numeric(_) | Error::Bracket { .. } => PyArithmeticError::new_err(text),
        _ => PyRuntimeError::new_err(text),
    }
}

/// Potential parameters `M, hbar, a, V1, V2, q`.
#[pyclass(name = "PotentialParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: hyperbolic::PotentialParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (v1, v2, q=1.0, mass=1.0, hbar=1.0, a=1.0))]
    fn new(v1: f64, v2: f64, q: f64, mass: f64, hbar: f64, a: f64) -> PyResult<Self> {
        let inner = hyperbolic::PotentialParams::new(v1, v2, q)
            .and_then(|p| p.with_units(mass, hbar, a))
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn v1(&self) -> f64 {
        self.inner.well_depth
    }

    #[getter]
    fn v2(&self) -> f64 {
        self.inner.asymmetry
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.deformation
    }

    #[getter]
    fn wall(&self) -> f64 {
        self.inner.wall()
    }

    fn potential(&self, r: f64) -> PyResult<f64> {
        hyperbolic::potential_r(&self.inner, r).map_err(to_py)
    }

    fn potential_u(&self, u: f64) -> PyResult<f64> {
        hyperbolic::potential_u(&self.inner, u).map_err(to_py)
    }

    /// `(r_min, V_min)`.
    fn potential_minimum(&self) -> PyResult<(f64, f64)> {
        hyperbolic::potential_minimum(&self.inner).map_err(to_py)
    }

    /// `(nu_q, L, M1, M2)` at energy `e`.
    fn spectral_indices(&self, e: f64) -> PyResult<(Complex64, Complex64, Complex64, Complex64)> {
        let ix = greens::spectral_indices(&self.inner, e).map_err(to_py)?;
        Ok((ix.nu_q, ix.l, ix.m1, ix.m2))
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "PotentialParams(v1={}, v2={}, q={}, mass={}, hbar={}, a={})",
            p.well_depth, p.asymmetry, p.deformation, p.mass, p.hbar, p.length_scale
        )
    }
}

#[pyclass(name = "BoundState", frozen, skip_from_py_object)]
struct PyBoundState {
    inner: spectrum::BoundState,
}

#[pymethods]
impl PyBoundState {
    #[getter]
    fn n_r(&self) -> usize {
        self.inner.n_r
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn normalization(&self) -> f64 {
        self.inner.normalization
    }

    fn wavefunction(&self, r: f64) -> PyResult<f64> {
        spectrum::wavefunction(&self.inner, r).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("BoundState(n_r={}, energy={})", self.inner.n_r, self.inner.energy)
    }
}

#[pyfunction]
fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, x: f64) -> PyResult<Complex64> {
    special::hyp2f1(a, b, c, x).map_err(to_py)
}

#[pyfunction]
fn log_gamma(z: Complex64) -> PyResult<Complex64> {
    special::log_gamma(z).map_err(to_py)
}

#[pyfunction]
fn greens_full_line(p: PyRef<'_, PyParams>, e: f64, u_prime: f64, u_dprime: f64) -> PyResult<Complex64> {
    greens::greens_full_line(&p.inner, e, u_prime, u_dprime).map_err(to_py)
}

#[pyfunction]
fn greens_dirichlet(p: PyRef<'_, PyParams>, e: f64, u_prime: f64, u_dprime: f64) -> PyResult<Complex64> {
    greens::greens_dirichlet(&p.inner, e, u_prime, u_dprime).map_err(to_py)
}

#[pyfunction]
fn greens_delta_perturbed(
    p: PyRef<'_, PyParams>,
    e: f64,
    lam: f64,
    u_prime: f64,
    u_dprime: f64,
) -> PyResult<Complex64> {
    greens::greens_delta_perturbed(&p.inner, e, lam, u_prime, u_dprime).map_err(to_py)
}

#[pyfunction]
fn quantization_residual(p: PyRef<'_, PyParams>, e: f64) -> PyResult<f64> {
    Ok(spectrum::quantization_residual(&p.inner, e).map_err(to_py)?.re)
}

/// Bound states below `-|V2|`; `extended=True` adds the experimental
/// `(-|V2|, V2)` window.
#[pyfunction]
#[pyo3(signature = (p, extended=false))]
fn bound_states(py: Python<'_>, p: PyRef<'_, PyParams>, extended: bool) -> PyResult<Vec<PyBoundState>> {
    let params = p.inner;
    let states = py
        .detach(|| -> rosen_morse::Result<Vec<spectrum::BoundState>> {
            let mut states = spectrum::bound_states(&params)?;
            if extended {
                match spectrum::SearchConfig::extended_window(&params) {
                    Ok(cfg) => states.extend(spectrum::find_bound_states(&params, &cfg)?),
                    Err(Error::Domain(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(states)
        })
        .map_err(to_py)?;
    Ok(states.into_iter().map(|inner| PyBoundState { inner }).collect())
}

/// `(eigenvalues, node_counts)` below `e_upper` from the finite-difference
/// oracle.
#[pyfunction]
#[pyo3(signature = (p, e_upper, r_max=40.0, h=1e-3))]
fn fd_eigen(
    py: Python<'_>,
    p: PyRef<'_, PyParams>,
    e_upper: f64,
    r_max: f64,
    h: f64,
) -> PyResult<(Vec<f64>, Vec<usize>)> {
    let params = p.inner;
    let result = py
        .detach(|| oracle::GridSpec::new(r_max, h).and_then(|g| oracle::fd_eigen(&params, &g, e_upper)))
        .map_err(to_py)?;
    Ok((result.eigenvalues, result.node_counts))
}

#[pyfunction]
#[pyo3(signature = (p, e_lo, e_hi, r_max=40.0, h=1e-3))]
fn shoot_eigen(py: Python<'_>, p: PyRef<'_, PyParams>, e_lo: f64, e_hi: f64, r_max: f64, h: f64) -> PyResult<f64> {
    let params = p.inner;
    py.detach(|| oracle::GridSpec::new(r_max, h).and_then(|g| oracle::shoot_eigen(&params, &g, (e_lo, e_hi))))
        .map_err(to_py)
}

#[pymodule]
fn rosen_morse_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyBoundState>()?;
    m.add_function(wrap_pyfunction!(hyp2f1, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(greens_full_line, m)?)?;
    m.add_function(wrap_pyfunction!(greens_dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(greens_delta_perturbed, m)?)?;
    m.add_function(wrap_pyfunction!(quantization_residual, m)?)?;
    m.add_function(wrap_pyfunction!(bound_states, m)?)?;
    m.add_function(wrap_pyfunction!(fd_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(shoot_eigen, m)?)?;
    Ok(())
}
