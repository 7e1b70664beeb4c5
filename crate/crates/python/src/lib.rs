//! Python bindings for `monospec`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use monospec::dominance::{self, DominanceMatrix, LiftWitness, Liftability};
use monospec::matrix::{self, DEFAULT_TOL};
use monospec::realise::{self, Family, FamilyId};
use monospec::regions::RegionName;
use monospec::sampler::{self, SampleConfig};
use monospec::spectra::{self, EigenPair};

fn py_err(e: monospec::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated monotone stochastic matrix.
#[pyclass(name = "MonotoneMatrix", module = "monospec_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMonotoneMatrix {
    inner: matrix::MonotoneMatrix,
}

#[pymethods]
impl PyMonotoneMatrix {
    #[new]
    #[pyo3(signature = (rows, tol = DEFAULT_TOL))]
    fn new(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<Self> {
        let inner = matrix::MonotoneMatrix::new(&rows, tol).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows()
    }

    fn dominance(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(dominance::dominance_of(&self.inner).map_err(py_err)?.rows())
    }

    /// All eigenvalues, 1 included, sorted by real then imaginary part descending.
    fn spectrum(&self) -> PyResult<Vec<Complex64>> {
        Ok(spectra::spectrum_of_stochastic(self.inner.as_stochastic()).map_err(py_err)?.values().to_vec())
    }

    /// `(λ₂, λ₃)` of a 3×3 matrix from the closed form.
    fn eigenpair(&self) -> PyResult<(f64, f64)> {
        let p = spectra::eigenpair_3x3(&dominance::dominance_of(&self.inner).map_err(py_err)?).map_err(py_err)?;
        Ok((p.lambda2, p.lambda3))
    }

    /// The reduction result as a JSON string.
    fn reduce(&self) -> PyResult<String> {
        Ok(monospec::reduction::reduce(&self.inner).map_err(py_err)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!("MonotoneMatrix({:?})", self.inner.rows())
    }
}

#[pyclass(name = "RegionVerdict", module = "monospec_py", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRegionVerdict {
    member: bool,
    margin: f64,
    violated: Option<String>,
}

#[pymethods]
impl PyRegionVerdict {
    fn __bool__(&self) -> bool {
        self.member
    }

    fn __repr__(&self) -> String {
        match &self.violated {
            None => format!("RegionVerdict(member=True, margin={})", self.margin),
            Some(v) => format!("RegionVerdict(member=False, violated={v:?}, margin={})", self.margin),
        }
    }
}

#[pyfunction]
fn dominance_of(m: &PyMonotoneMatrix) -> PyResult<Vec<Vec<f64>>> {
    m.dominance()
}

#[pyfunction]
#[pyo3(signature = (rows, tol = DEFAULT_TOL))]
fn spectrum(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<Vec<Complex64>> {
    let s = matrix::validate_stochastic(&rows, tol).map_err(py_err)?;
    Ok(spectra::spectrum_of_stochastic(&s).map_err(py_err)?.values().to_vec())
}

/// Minimal lift witness `(m11, m33)`, or `None` when no 3×3 monotone matrix has this dominance matrix.
#[pyfunction]
#[pyo3(signature = (d, tol = DEFAULT_TOL))]
fn check_liftable(d: Vec<Vec<f64>>, tol: f64) -> PyResult<Option<(f64, f64)>> {
    let d = DominanceMatrix::new(&d, tol).map_err(py_err)?;
    Ok(match dominance::check_liftable(&d, tol).map_err(py_err)? {
        Liftability::Feasible(w) => Some((w.m11, w.m33)),
        Liftability::Infeasible { .. } => None,
    })
}

#[pyfunction]
#[pyo3(signature = (d, m11, m33, tol = DEFAULT_TOL))]
fn lift(d: Vec<Vec<f64>>, m11: f64, m33: f64, tol: f64) -> PyResult<PyMonotoneMatrix> {
    let d = DominanceMatrix::new(&d, tol).map_err(py_err)?;
    let inner = dominance::lift(&d, LiftWitness { m11, m33 }, tol).map_err(py_err)?;
    Ok(PyMonotoneMatrix { inner })
}

/// Evaluates a named region (`xi1`, `xi2`, `xi3`, `xi3pair`, `theta2`, `theta3`, `s3realpair`) at a point.
#[pyfunction]
#[pyo3(signature = (name, point, tol = DEFAULT_TOL))]
fn region(name: &str, point: Vec<f64>, tol: f64) -> PyResult<PyRegionVerdict> {
    let region: RegionName = name.parse().map_err(py_err)?;
    let v = region.evaluate(&point, tol).map_err(py_err)?;
    Ok(PyRegionVerdict { member: v.member, margin: v.margin, violated: v.violated })
}

#[pyfunction]
fn family_matrix(family: &str, alpha: f64) -> PyResult<PyMonotoneMatrix> {
    let family: Family = family.parse().map_err(py_err)?;
    let id = FamilyId::new(family, alpha).map_err(py_err)?;
    Ok(PyMonotoneMatrix { inner: realise::family_matrix(id).map_err(py_err)? })
}

/// Returns `(family, alpha, matrix)`.
#[pyfunction]
fn realise_eigenvalue(lam: f64) -> PyResult<(String, f64, PyMonotoneMatrix)> {
    let (id, inner) = realise::realise_eigenvalue(lam).map_err(py_err)?;
    Ok((id.family.name().to_string(), id.alpha, PyMonotoneMatrix { inner }))
}

#[pyfunction]
#[pyo3(signature = (l2, l3, tol = DEFAULT_TOL))]
fn realise_pair(l2: f64, l3: f64, tol: f64) -> PyResult<PyMonotoneMatrix> {
    let inner = realise::realise_pair(EigenPair { lambda2: l2, lambda3: l3 }, tol).map_err(py_err)?;
    Ok(PyMonotoneMatrix { inner })
}

#[pyfunction]
fn reduce(m: &PyMonotoneMatrix) -> PyResult<String> {
    m.reduce()
}

#[pyfunction]
#[pyo3(signature = (n, count, seed, workers = 1))]
fn sample(py: Python<'_>, n: usize, count: usize, seed: u64, workers: usize) -> PyResult<Vec<PyMonotoneMatrix>> {
    let cfg = SampleConfig { n, count, seed, workers };
    let samples = py.detach(|| sampler::sample_monotone(&cfg)).map_err(py_err)?;
    Ok(samples.into_iter().map(|inner| PyMonotoneMatrix { inner }).collect())
}

#[pymodule]
fn monospec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMonotoneMatrix>()?;
    m.add_class::<PyRegionVerdict>()?;
    m.add_function(wrap_pyfunction!(dominance_of, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(check_liftable, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(region, m)?)?;
    m.add_function(wrap_pyfunction!(family_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(realise_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(realise_pair, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    Ok(())
}
