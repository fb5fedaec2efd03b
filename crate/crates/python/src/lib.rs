use std::path::PathBuf;

use dpcomb::regularized::parse_samples;
use dpcomb::{CombSpec, DipoleArraySpec, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        Error::NumericalCorruption(_) | Error::IntegrationFailure { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// SU(1,1) transfer matrix `[[z1, conj z2], [z2, conj z1]]`.
#[pyclass(name = "TransferMatrix", frozen, skip_from_py_object, module = "dpcomb")]
#[derive(Clone, Copy)]
struct PyTransferMatrix(dpcomb::TransferMatrix);

#[pymethods]
impl PyTransferMatrix {
    #[new]
    fn new(z1: Complex64, z2: Complex64) -> Self {
        Self(dpcomb::TransferMatrix::new(z1, z2))
    }

    #[getter]
    fn z1(&self) -> Complex64 {
        self.0.z1
    }

    #[getter]
    fn z2(&self) -> Complex64 {
        self.0.z2
    }

    fn entries(&self) -> [[Complex64; 2]; 2] {
        self.0.entries()
    }

    fn su11_defect(&self) -> f64 {
        self.0.su11_defect()
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    /// `(t, r)` read off the matrix.
    fn amplitudes(&self) -> PyResult<(Complex64, Complex64)> {
        let a = dpcomb::amplitudes_from_matrix(&self.0).map_err(err)?;
        Ok((a.t, a.r))
    }

    fn transmission(&self) -> PyResult<f64> {
        Ok(dpcomb::amplitudes_from_matrix(&self.0).map_err(err)?.transmission())
    }

    fn __matmul__(&self, other: PyRef<'_, Self>) -> Self {
        Self(self.0 * other.0)
    }

    fn __repr__(&self) -> String {
        format!("TransferMatrix(z1={}, z2={})", self.0.z1, self.0.z2)
    }
}

/// A half-bound state on `[-1, 1]` and its potential.
#[pyclass(name = "ResonantPotential", frozen, skip_from_py_object, module = "dpcomb")]
#[derive(Clone)]
struct PyPotential(dpcomb::ResonantPotential);

#[pymethods]
impl PyPotential {
    /// The quartic example family.
    #[staticmethod]
    fn example(theta: f64) -> PyResult<Self> {
        dpcomb::example_potential(theta).map(Self).map_err(err)
    }

    /// From `(x, u(x))` samples covering `[-1, 1]`.
    #[staticmethod]
    fn from_samples(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        dpcomb::custom_potential(&samples).map(Self).map_err(err)
    }

    /// From a `# half-bound-state v1` file.
    #[staticmethod]
    fn from_file(path: PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)?;
        let samples = parse_samples(&text).map_err(err)?;
        dpcomb::custom_potential(&samples).map(Self).map_err(err)
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta()
    }

    #[getter]
    fn is_closed_form(&self) -> bool {
        self.0.is_closed_form()
    }

    fn u(&self, x: f64) -> f64 {
        self.0.u(x)
    }

    fn potential(&self, x: f64) -> f64 {
        self.0.potential(x)
    }

    fn samples(&self, count: usize) -> Vec<(f64, f64)> {
        self.0.samples(count)
    }

    fn __repr__(&self) -> String {
        format!("ResonantPotential(theta={}, eta={})", self.0.theta(), self.0.eta())
    }
}

#[pyfunction]
fn chebyshev_u(n: usize, x: f64) -> f64 {
    dpcomb::chebyshev_u(n, x)
}

/// `T_n(θ, k)` from the closed form.
#[pyfunction]
fn transmission(theta: f64, k: f64, n: usize) -> PyResult<f64> {
    dpcomb::transmission_closed_form(theta, k, n).map_err(err)
}

/// `T_n(θ, k)` over many k at once.
#[pyfunction]
fn transmission_grid(theta: f64, ks: Vec<f64>, n: usize) -> PyResult<Vec<f64>> {
    ks.iter()
        .map(|&k| dpcomb::transmission_closed_form(theta, k, n).map_err(err))
        .collect()
}

/// `(t_n, r_n)` from the closed form.
#[pyfunction]
fn amplitudes(theta: f64, k: f64, n: usize) -> PyResult<(Complex64, Complex64)> {
    let a = dpcomb::amplitudes_closed_form(theta, k, n).map_err(err)?;
    Ok((a.t, a.r))
}

#[pyfunction]
fn single_matrix(theta: f64, z: f64) -> PyResult<PyTransferMatrix> {
    let c = dpcomb::Contrast::new(theta).map_err(err)?;
    Ok(PyTransferMatrix(dpcomb::single_matrix(c, z)))
}

#[pyfunction]
#[pyo3(signature = (theta, k, n, spacing = 1.0))]
fn comb_matrix(theta: f64, k: f64, n: usize, spacing: f64) -> PyResult<PyTransferMatrix> {
    let spec = CombSpec::new(n, theta, spacing).map_err(err)?;
    dpcomb::comb_matrix(&spec, k).map(PyTransferMatrix).map_err(err)
}

#[pyfunction]
fn resonances(theta: f64, n: usize) -> PyResult<Vec<f64>> {
    Ok(dpcomb::resonances(theta, n).map_err(err)?.points)
}

#[pyfunction]
fn passband(theta: f64) -> PyResult<(f64, f64)> {
    let b = dpcomb::passband(theta).map_err(err)?;
    Ok((b.lo, b.hi))
}

#[pyfunction]
fn envelope(theta: f64, k: f64) -> PyResult<f64> {
    dpcomb::envelope(theta, k).map_err(err)
}

#[pyfunction]
fn small_theta_bound(theta: f64, k: f64, n: usize) -> PyResult<f64> {
    dpcomb::small_theta_bound(theta, k, n).map_err(err)
}

#[pyfunction]
fn theta_to_one_bound(theta: f64, n: usize) -> PyResult<f64> {
    dpcomb::theta_to_one_bound(theta, n).map_err(err)
}

#[pyfunction]
fn dipole_matrix(theta: f64, eta: f64, x0: f64, k: f64, epsilon: f64) -> PyResult<PyTransferMatrix> {
    dpcomb::dipole_matrix_analytic(theta, eta, x0, k, epsilon)
        .map(PyTransferMatrix)
        .map_err(err)
}

#[pyfunction]
fn dipole_matrix_numeric(
    potential: PyRef<'_, PyPotential>,
    x0: f64,
    k: f64,
    epsilon: f64,
) -> PyResult<PyTransferMatrix> {
    dpcomb::dipole_matrix_numeric(&potential.0, x0, k, epsilon)
        .map(PyTransferMatrix)
        .map_err(err)
}

fn array(potential: &PyPotential, n: usize, epsilon: f64, spacing: f64) -> PyResult<DipoleArraySpec> {
    DipoleArraySpec::new(potential.0.clone(), n, epsilon, spacing).map_err(err)
}

/// `T_{n,ε}(k)` from the analytic dipole matrices.
#[pyfunction]
#[pyo3(signature = (potential, k, n, epsilon, spacing = 1.0))]
fn regularized_transmission(
    potential: PyRef<'_, PyPotential>,
    k: f64,
    n: usize,
    epsilon: f64,
    spacing: f64,
) -> PyResult<f64> {
    dpcomb::regularized_transmission(&array(&potential, n, epsilon, spacing)?, k).map_err(err)
}

/// `T_{n,ε}(k)` by integrating through the array.
#[pyfunction]
#[pyo3(signature = (potential, k, n, epsilon, spacing = 1.0))]
fn numeric_transmission(
    potential: PyRef<'_, PyPotential>,
    k: f64,
    n: usize,
    epsilon: f64,
    spacing: f64,
) -> PyResult<f64> {
    dpcomb::array_transmission_numeric(&array(&potential, n, epsilon, spacing)?, k).map_err(err)
}

#[pymodule]
#[pyo3(name = "dpcomb")]
fn dpcomb_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTransferMatrix>()?;
    m.add_class::<PyPotential>()?;
    m.add_function(wrap_pyfunction!(chebyshev_u, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(transmission_grid, m)?)?;
    m.add_function(wrap_pyfunction!(amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(single_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(comb_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(resonances, m)?)?;
    m.add_function(wrap_pyfunction!(passband, m)?)?;
    m.add_function(wrap_pyfunction!(envelope, m)?)?;
    m.add_function(wrap_pyfunction!(small_theta_bound, m)?)?;
    m.add_function(wrap_pyfunction!(theta_to_one_bound, m)?)?;
    m.add_function(wrap_pyfunction!(dipole_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(dipole_matrix_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(regularized_transmission, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_transmission, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
