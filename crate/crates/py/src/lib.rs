use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use qwit_core::bell::chsh_report;
use qwit_core::classical::{example2_demo, example3_demo};
use qwit_core::collective::scaling_report;
use qwit_core::format;
use qwit_core::operator::{self as op, HermitianOperator, C64, DEFAULT_TOL};
use qwit_core::optimal::{self, lambda_minus_tu};
use qwit_core::phase_space::{self as ps, FockTruncation, DEFAULT_TAIL_BUDGET};
use qwit_core::rng::DEFAULT_SEED;
use qwit_core::states::DensityMatrix;
use qwit_core::witness::{build_c, build_v, construct_for_state, WitnessReport};
use qwit_core::QwitError;

fn to_py_err(e: QwitError) -> PyErr {
    if e.is_io() {
        PyOSError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Converts a report to a Python dict through its canonical JSON text.
fn to_dict<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (format::to_json_string(v),))
}

/// Hermitian operator on a finite-dimensional space.
#[pyclass(name = "Operator", module = "qwit", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOperator(HermitianOperator);

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (re, im = None))]
    fn new(re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>>) -> PyResult<Self> {
        let n = re.len();
        let im = im.unwrap_or_else(|| vec![vec![0.0; n]; n]);
        let j = op::OperatorJson { dim: n, re, im, kind: None };
        HermitianOperator::from_json(&j).map(PyOperator).map_err(to_py_err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyOperator(HermitianOperator::identity(n))
    }

    #[staticmethod]
    fn diagonal(d: Vec<f64>) -> Self {
        PyOperator(HermitianOperator::diagonal(&d))
    }

    #[staticmethod]
    fn projector(v: Vec<C64>) -> Self {
        PyOperator(HermitianOperator::projector(&op::normalize(&v)))
    }

    #[staticmethod]
    fn pauli(axis: &str) -> PyResult<Self> {
        match axis {
            "x" => Ok(PyOperator(HermitianOperator::pauli_x())),
            "y" => Ok(PyOperator(HermitianOperator::pauli_y())),
            "z" => Ok(PyOperator(HermitianOperator::pauli_z())),
            _ => Err(PyValueError::new_err(format!("unknown Pauli axis '{axis}'"))),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn re(&self) -> Vec<Vec<f64>> {
        self.0.matrix().re_rows()
    }

    fn im(&self) -> Vec<Vec<f64>> {
        self.0.matrix().im_rows()
    }

    fn trace(&self) -> f64 {
        self.0.trace()
    }

    fn eigvalsh(&self) -> Vec<f64> {
        op::eig_hermitian(&self.0).eigenvalues
    }

    /// Ascending eigenvalues and the matching eigenvectors.
    fn eigh(&self) -> (Vec<f64>, Vec<Vec<C64>>) {
        let e = op::eig_hermitian(&self.0);
        (e.eigenvalues, e.eigenvectors)
    }

    fn min_eigenvalue(&self) -> f64 {
        op::eig_hermitian(&self.0).min()
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn is_psd(&self, tol: f64) -> bool {
        op::is_psd(&self.0, tol)
    }

    /// True when `other - self` is positive semidefinite.
    #[pyo3(signature = (other, tol = DEFAULT_TOL))]
    fn leq(&self, other: &PyOperator, tol: f64) -> PyResult<bool> {
        op::leq(&self.0, &other.0, tol).map_err(to_py_err)
    }

    /// `<v|self|v>` for a normalized copy of `v`.
    fn mean(&self, v: Vec<C64>) -> PyResult<f64> {
        if v.len() != self.0.dim() {
            return Err(to_py_err(QwitError::DimensionMismatch { expected: self.0.dim(), found: v.len() }));
        }
        Ok(self.0.sandwich(&op::normalize(&v)))
    }

    fn square(&self) -> Self {
        PyOperator(self.0.square())
    }

    fn scale(&self, s: f64) -> Self {
        PyOperator(self.0.scale(s))
    }

    fn kron(&self, other: &PyOperator) -> Self {
        PyOperator(op::kron(&self.0, &other.0))
    }

    fn anticommutator(&self, other: &PyOperator) -> PyResult<Self> {
        op::anticommutator(&self.0, &other.0).map(PyOperator).map_err(to_py_err)
    }

    fn __add__(&self, other: &PyOperator) -> PyResult<Self> {
        self.0.add(&other.0).map(PyOperator).map_err(to_py_err)
    }

    fn __sub__(&self, other: &PyOperator) -> PyResult<Self> {
        self.0.sub(&other.0).map(PyOperator).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Operator(dim={}, re={:?}, im={:?})", self.0.dim(), self.re(), self.im())
    }
}

fn witness_dict<'py>(py: Python<'py>, r: &WitnessReport) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &r.to_json())
}

/// The optimal qubit pair `(A, B)` with `Tr B = 2`.
#[pyfunction]
fn optimal_pair() -> (PyOperator, PyOperator) {
    let (a, b) = optimal::optimal_pair();
    (PyOperator(a), PyOperator(b))
}

#[pyfunction]
fn optimal_witness(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_dict(py, &optimal::optimal_witness().to_json())
}

/// Smallest eigenvalue of `B² - A²` along the saturated family `(t, u)`.
#[pyfunction]
fn lambda_minus(t: f64, u: f64) -> PyResult<f64> {
    lambda_minus_tu(t, u).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (grid = 101, seed = DEFAULT_SEED))]
fn numeric_search(grid: usize, seed: u64) -> PyResult<(f64, f64, f64)> {
    let r = optimal::numeric_search(grid, 10_000, seed).map_err(to_py_err)?;
    Ok((r.t, r.u, r.lambda))
}

/// `V = B² - A²` for `0 <= A <= B`.
#[pyfunction]
#[pyo3(signature = (a, b, tol = DEFAULT_TOL))]
fn witness_v<'py>(py: Python<'py>, a: &PyOperator, b: &PyOperator, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    witness_dict(py, &build_v(&a.0, &b.0, tol).map_err(to_py_err)?)
}

/// `C = XY + YX` for `X, Y >= 0`.
#[pyfunction]
#[pyo3(signature = (x, y, tol = DEFAULT_TOL))]
fn witness_c<'py>(py: Python<'py>, x: &PyOperator, y: &PyOperator, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    witness_dict(py, &build_c(&x.0, &y.0, tol).map_err(to_py_err)?)
}

/// Anticommutator witness with a negative mean on the density matrix `rho`.
#[pyfunction]
#[pyo3(signature = (rho, alpha = None))]
fn construct<'py>(py: Python<'py>, rho: &PyOperator, alpha: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let rho = DensityMatrix::new(rho.0.clone()).map_err(to_py_err)?;
    to_dict(py, &construct_for_state(&rho, alpha).map_err(to_py_err)?.to_json())
}

#[pyfunction]
#[pyo3(signature = (a, b, n_max = 5))]
fn collective<'py>(py: Python<'py>, a: &PyOperator, b: &PyOperator, n_max: usize) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &scaling_report(&a.0, &b.0, n_max).map_err(to_py_err)?.to_json())
}

#[pyfunction]
#[pyo3(signature = (seeds = 100, dims = vec![2, 3], seed = DEFAULT_SEED))]
fn chsh(py: Python<'_>, seeds: usize, dims: Vec<usize>, seed: u64) -> PyResult<Bound<'_, PyAny>> {
    to_dict(py, &chsh_report(seeds, &dims, seed).map_err(to_py_err)?.to_json())
}

#[pyfunction]
fn classical_demo(py: Python<'_>, example: u8) -> PyResult<Bound<'_, PyAny>> {
    match example {
        2 => to_dict(py, &example2_demo().to_json()),
        3 => to_dict(py, &example3_demo().to_json()),
        _ => Err(PyValueError::new_err("example must be 2 or 3")),
    }
}

/// Diagonal of the truncated oscillator witness `K_m` at cutoff `dim`.
#[pyfunction]
fn k_m(m: u64, dim: usize) -> PyResult<Vec<f64>> {
    let t = FockTruncation::new(dim).map_err(to_py_err)?;
    let k = ps::k_m_operator(&t, m).map_err(to_py_err)?;
    Ok((0..dim).map(|n| k.get(n, n).re).collect())
}

/// `<z|K_m|z>` with a cutoff chosen from the tail budget.
#[pyfunction]
fn coherent_mean(m: u64, z: C64) -> PyResult<f64> {
    let d = ps::required_cutoff_for_moment(z.norm_sqr(), DEFAULT_TAIL_BUDGET, 2)
        .map_err(to_py_err)?
        .max(ps::min_cutoff_for_window(m));
    let t = FockTruncation::new(d).map_err(to_py_err)?;
    let k = ps::k_m_operator(&t, m).map_err(to_py_err)?;
    ps::coherent_mean(&k, z, DEFAULT_TAIL_BUDGET).map_err(to_py_err)
}

#[pyfunction]
fn negative_window(m: u64) -> PyResult<(f64, f64, Vec<u64>)> {
    let w = ps::negative_window(m).map_err(to_py_err)?;
    Ok((w.lo, w.hi, w.levels))
}

#[pymodule]
fn qwit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(optimal_pair, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_witness, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_minus, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_search, m)?)?;
    m.add_function(wrap_pyfunction!(witness_v, m)?)?;
    m.add_function(wrap_pyfunction!(witness_c, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(collective, m)?)?;
    m.add_function(wrap_pyfunction!(chsh, m)?)?;
    m.add_function(wrap_pyfunction!(classical_demo, m)?)?;
    m.add_function(wrap_pyfunction!(k_m, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_mean, m)?)?;
    m.add_function(wrap_pyfunction!(negative_window, m)?)?;
    Ok(())
}
