//! Python bindings for the discrete Calderon-Zygmund operator suite.
//!
//! Exposes kernels, symbol evaluation, winding indices, the periodic
//! Riemann problem and the half-space solvers as the `dcz` module.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dcz_core::{CzError, KernelSpec, PartialSumPlan, PeriodicGrid};

create_exception!(
    dcz,
    NonzeroIndexError,
    PyRuntimeError,
    "the coefficient (or a symbol slice) has nonzero index; the problem is not uniquely solvable"
);

fn to_py(e: CzError) -> PyErr {
    match e {
        CzError::NonzeroIndex { .. } => NonzeroIndexError::new_err(e.to_string()),
        CzError::InvalidInput(_) | CzError::ShapeMismatch(_) | CzError::Parse(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn plan(n: f64) -> PyResult<PartialSumPlan> {
    PartialSumPlan::new(vec![n / 2.0, n]).map_err(to_py)
}

fn grid(values: Vec<Complex64>) -> PyResult<PeriodicGrid> {
    PeriodicGrid::new(values).map_err(to_py)
}

/// A Calderon-Zygmund kernel `K(x) = Omega(x/|x|) / |x|^m`.
#[pyclass(name = "Kernel", skip_from_py_object)]
#[derive(Clone)]
struct PyKernel {
    inner: KernelSpec,
}

#[pymethods]
impl PyKernel {
    /// Riesz kernel component `j` in dimension `m`.
    #[staticmethod]
    fn riesz(m: usize, j: usize) -> PyResult<Self> {
        Ok(PyKernel {
            inner: KernelSpec::riesz(m, j).map_err(to_py)?,
        })
    }

    /// The zero kernel in dimension `m` (the operator is `a I`).
    #[staticmethod]
    fn zero(m: usize) -> Self {
        PyKernel {
            inner: KernelSpec::zero(m),
        }
    }

    /// Custom spherical density from equispaced samples (m = 1: the pair
    /// `[Omega(-1), Omega(+1)]`; m = 2: samples over the circle).
    #[staticmethod]
    #[pyo3(signature = (m, density, normalization = 1.0))]
    fn custom(m: usize, density: Vec<Complex64>, normalization: f64) -> PyResult<Self> {
        Ok(PyKernel {
            inner: KernelSpec::custom(m, density, normalization).map_err(to_py)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Kernel value at a lattice point (0 at the origin).
    fn eval(&self, x: Vec<f64>) -> PyResult<Complex64> {
        if x.len() != self.inner.dim() {
            return Err(PyValueError::new_err("point dimension mismatch"));
        }
        Ok(self.inner.eval(&x))
    }

    /// Mean of the density over the sphere (must vanish; diagnostic).
    #[pyo3(signature = (oversample = 4))]
    fn spherical_mean(&self, oversample: usize) -> Complex64 {
        self.inner.spherical_mean(oversample)
    }

    fn __repr__(&self) -> String {
        format!("Kernel(m={})", self.inner.dim())
    }
}

/// Discrete symbol `a + sigma_h(xi)` by cube partial sums of radius up to `n`.
#[pyfunction]
#[pyo3(signature = (kernel, a, h, xi, n = 30.0))]
fn discrete_symbol(
    kernel: &PyKernel,
    a: Complex64,
    h: f64,
    xi: Vec<f64>,
    n: f64,
) -> PyResult<Complex64> {
    let s = dcz_core::discrete_symbol(&kernel.inner, a, h, &xi, &plan(n)?).map_err(to_py)?;
    Ok(s.value)
}

/// Continuous symbol `a + sigma(xi)`.
#[pyfunction]
fn continuous_symbol(kernel: &PyKernel, a: Complex64, xi: Vec<f64>) -> PyResult<Complex64> {
    dcz_core::continuous_symbol(&kernel.inner, a, &xi).map_err(to_py)
}

/// Transmission check: `(sigma_south, sigma_north, defect, passed)`.
#[pyfunction]
fn transmission(kernel: &PyKernel, a: Complex64) -> PyResult<(Complex64, Complex64, f64, bool)> {
    let r = dcz_core::transmission_check(&kernel.inner, a).map_err(to_py)?;
    Ok((r.sigma_south, r.sigma_north, r.defect, r.passed))
}

/// Winding of `a + sigma_h(xi', .)` over one period of `xi_m`.
#[pyfunction]
#[pyo3(signature = (kernel, a, h, xi_prime, resolution = 256, n = 30.0))]
fn discrete_winding(
    kernel: &PyKernel,
    a: Complex64,
    h: f64,
    xi_prime: Vec<f64>,
    resolution: usize,
    n: f64,
) -> PyResult<i64> {
    let r = dcz_core::discrete_winding(&kernel.inner, a, h, &xi_prime, resolution, &plan(n)?)
        .map_err(to_py)?;
    Ok(r.winding)
}

/// Winding of `a + sigma(xi', .)` over the compactified `xi_m` line.
#[pyfunction]
#[pyo3(signature = (kernel, a, xi_prime, resolution = 2048))]
fn continuous_winding(
    kernel: &PyKernel,
    a: Complex64,
    xi_prime: Vec<f64>,
    resolution: usize,
) -> PyResult<i64> {
    let r = dcz_core::continuous_winding(&kernel.inner, a, &xi_prime, resolution).map_err(to_py)?;
    Ok(r.winding)
}

/// Index `(1/2pi) int d arg G` of a nonvanishing periodic coefficient
/// sampled on a uniform power-of-two grid over `[-pi, pi)`.
#[pyfunction]
fn index(values: Vec<Complex64>) -> PyResult<i64> {
    dcz_core::compute_index(&grid(values)?).map_err(to_py)
}

/// Canonical factorization `G = X_+ X_-` of an index-zero coefficient.
#[pyfunction]
fn factorize(values: Vec<Complex64>) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
    let f = dcz_core::factorize(&grid(values)?).map_err(to_py)?;
    Ok((f.x_plus.values().to_vec(), f.x_minus.values().to_vec()))
}

/// Solve the periodic Riemann problem `Phi^+ = G Phi^- + g`.
/// Returns `(phi_plus, phi_minus, residual_max)`.
#[pyfunction]
fn riemann_solve(
    coefficient: Vec<Complex64>,
    rhs: Vec<Complex64>,
) -> PyResult<(Vec<Complex64>, Vec<Complex64>, f64)> {
    let p = dcz_core::RiemannProblem::new(grid(coefficient)?, grid(rhs)?).map_err(to_py)?;
    let s = dcz_core::solve_riemann(&p).map_err(to_py)?;
    Ok((
        s.phi_plus.values().to_vec(),
        s.phi_minus.values().to_vec(),
        s.residual_max,
    ))
}

/// Solve the discrete half-space equation on the periodic lateral box.
///
/// `rhs` is row-major over `[2 lateral_half] * (m - 1)` lateral axes with
/// the depth index fastest. Returns a dict with `solution`, `residual_max`,
/// `iterations`, `method`, `converged`.
#[pyfunction]
#[pyo3(signature = (kernel, a, h, lateral_half, depth, rhs, method = "wiener-hopf", tol = 1e-8))]
#[allow(clippy::too_many_arguments)]
fn solve_half_space(
    py: Python<'_>,
    kernel: &PyKernel,
    a: Complex64,
    h: f64,
    lateral_half: usize,
    depth: usize,
    rhs: Vec<Complex64>,
    method: &str,
    tol: f64,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let p = dcz_core::HalfSpaceProblem::new(kernel.inner.clone(), a, h, lateral_half, depth, rhs)
        .map_err(to_py)?;
    let rep = match method {
        "dense" => dcz_core::solve_dense(&p),
        "iterative" => dcz_core::solve_truncated(&p, tol),
        "wiener-hopf" => dcz_core::solve_wiener_hopf(&p, tol),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown method {other:?}; use dense, iterative or wiener-hopf"
            )))
        }
    }
    .map_err(to_py)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("solution", rep.solution)?;
    d.set_item("residual_max", rep.residual_max)?;
    d.set_item("iterations", rep.iterations)?;
    d.set_item("method", rep.method.to_string())?;
    d.set_item("converged", rep.converged)?;
    d.set_item("slice_warnings", rep.slice_warnings)?;
    Ok(d.into())
}

#[pymodule]
fn dcz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKernel>()?;
    m.add_function(wrap_pyfunction!(discrete_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(continuous_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_winding, m)?)?;
    m.add_function(wrap_pyfunction!(continuous_winding, m)?)?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_half_space, m)?)?;
    m.add("NonzeroIndexError", m.py().get_type::<NonzeroIndexError>())?;
    Ok(())
}
