//! Python bindings. Matrices are lists of rows, eigenpairs are
//! `(complex, [complex])` tuples.

use lppiep_core::generate::{self as problems, RandomParams};
use lppiep_core::io::{matrix_to_rows, rows_to_matrix};
use lppiep_core::{
    encode, monicize as monicize_core, residual as residual_core, solve as solve_core, verify, BoundPolicy,
    EigenpairInput, MonicPolynomial, RealEigenpairs, SolveOptions, StructureKind, ToleranceConfig,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

type Rows = Vec<Vec<f64>>;
type Pair = (Complex64, Vec<Complex64>);

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn to_matrix(rows: &Rows, what: &str) -> PyResult<DMatrix<f64>> {
    rows_to_matrix(rows, what).map_err(value_error)
}

fn to_pairs(pairs: Vec<Pair>) -> Vec<EigenpairInput> {
    pairs.into_iter().map(|(lambda, v)| EigenpairInput::new(lambda, DVector::from_vec(v))).collect()
}

fn from_pairs(pairs: &[EigenpairInput]) -> Vec<Pair> {
    pairs.iter().map(|p| (p.lambda, p.vector.iter().copied().collect())).collect()
}

fn real_form(pairs: Vec<Pair>) -> PyResult<RealEigenpairs> {
    let n = pairs.first().map(|p| p.1.len()).ok_or_else(|| value_error("no eigenpairs given"))?;
    encode(&to_pairs(pairs), n).map_err(value_error)
}

fn polynomial(coefficients: &[Rows]) -> PyResult<MonicPolynomial> {
    let mats = coefficients
        .iter()
        .enumerate()
        .map(|(i, rows)| to_matrix(rows, &format!("coefficients[{i}]")))
        .collect::<PyResult<Vec<_>>>()?;
    MonicPolynomial::new(mats).map_err(value_error)
}

/// Ordered basis of a linear matrix structure.
#[pyclass(name = "StructureBasis", module = "lppiep", frozen)]
struct PyStructureBasis {
    inner: lppiep_core::StructureBasis,
}

#[pymethods]
impl PyStructureBasis {
    /// Canonical basis of a built-in structure such as `"symmetric"`.
    #[new]
    fn new(structure: &str, n: usize) -> PyResult<Self> {
        let kind: StructureKind = structure.parse().map_err(value_error)?;
        let inner = lppiep_core::StructureBasis::build(kind, n).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Custom basis from linearly independent `n x n` matrices.
    #[staticmethod]
    fn from_matrices(matrices: Vec<Rows>) -> PyResult<Self> {
        let mats = matrices
            .iter()
            .enumerate()
            .map(|(i, rows)| to_matrix(rows, &format!("matrices[{i}]")))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = lppiep_core::StructureBasis::from_matrices(&mats).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    fn matrices(&self) -> Vec<Rows> {
        self.inner.matrices().iter().map(matrix_to_rows).collect()
    }

    /// Matrix with the given structure coordinates.
    fn realize(&self, coords: Vec<f64>) -> PyResult<Rows> {
        let a = self.inner.realize(&DVector::from_vec(coords)).map_err(value_error)?;
        Ok(matrix_to_rows(a.dense()))
    }

    /// Coordinates of a structured matrix; raises if it is not in the structure.
    fn coords_of(&self, matrix: Rows) -> PyResult<Vec<f64>> {
        let a = to_matrix(&matrix, "matrix")?;
        Ok(self.inner.coords_of(&a).map_err(value_error)?.iter().copied().collect())
    }

    fn __repr__(&self) -> String {
        format!("StructureBasis('{}', n={}, r={})", self.inner.kind().as_str(), self.inner.n(), self.inner.r())
    }
}

/// Outcome of `solve`. `coefficients` is `None` when the eigendata is
/// inconsistent with the structure.
#[pyclass(name = "SolveResult", module = "lppiep", frozen, get_all)]
struct PySolveResult {
    consistent: bool,
    unique: bool,
    rank: usize,
    nullity: usize,
    consistency_residual: f64,
    residual_fro: Option<f64>,
    singular_values: Vec<f64>,
    x0: Vec<f64>,
    coefficients: Option<Vec<Rows>>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!(
            "SolveResult(consistent={}, unique={}, rank={}, nullity={})",
            self.consistent, self.unique, self.rank, self.nullity
        )
    }
}

/// Structured monic polynomial of degree `k` with the given eigenpairs.
///
/// `structure` is a tag or a `StructureBasis`; `y` selects a member of the
/// solution family (zero gives the minimal-norm one).
#[pyfunction]
#[pyo3(signature = (eigenpairs, structure, k, *, tol_consistency=None, tol_rank_factor=None, y=None, allow_overdetermined=false))]
#[allow(clippy::too_many_arguments)]
fn solve(
    eigenpairs: Vec<Pair>,
    structure: &Bound<'_, PyAny>,
    k: usize,
    tol_consistency: Option<f64>,
    tol_rank_factor: Option<f64>,
    y: Option<Vec<f64>>,
    allow_overdetermined: bool,
) -> PyResult<PySolveResult> {
    let ep = real_form(eigenpairs)?;
    let basis = if let Ok(b) = structure.cast::<PyStructureBasis>() {
        b.get().inner.clone()
    } else {
        let tag: String = structure.extract()?;
        PyStructureBasis::new(&tag, ep.n())?.inner
    };
    let mut tol = ToleranceConfig::default();
    if let Some(c) = tol_consistency {
        tol = tol.with_consistency(c);
    }
    tol.rank_cutoff_factor = tol_rank_factor;
    let bound = if allow_overdetermined { BoundPolicy::AllowOverdetermined } else { BoundPolicy::Strict };
    let opts = SolveOptions { tol, free: y.map(DVector::from_vec), bound };
    let out = solve_core(&ep, &basis, k, &opts).map_err(value_error)?;
    let fam = &out.family;
    Ok(PySolveResult {
        consistent: fam.consistent(),
        unique: fam.unique(),
        rank: fam.rank(),
        nullity: fam.nullity(),
        consistency_residual: fam.consistency_residual(),
        residual_fro: out.residual_fro,
        singular_values: fam.singular_values().to_vec(),
        x0: fam.x0().iter().copied().collect(),
        coefficients: out.polynomial.map(|p| p.coefficients().iter().map(matrix_to_rows).collect()),
    })
}

/// Residual of `lambda^k I + sum lambda^i A_i` on the eigenpairs:
/// `{"fro", "relative", "per_pair"}`.
#[pyfunction]
fn residual<'py>(py: Python<'py>, coefficients: Vec<Rows>, eigenpairs: Vec<Pair>) -> PyResult<Bound<'py, PyDict>> {
    let poly = polynomial(&coefficients)?;
    let report = residual_core(&poly, &real_form(eigenpairs)?).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("fro", report.fro)?;
    out.set_item("relative", report.relative)?;
    out.set_item("per_pair", report.per_pair)?;
    Ok(out)
}

/// Eigenpairs of the monic polynomial, one per conjugate pair.
#[pyfunction]
fn companion_eigs(coefficients: Vec<Rows>) -> PyResult<Vec<Pair>> {
    let poly = polynomial(&coefficients)?;
    Ok(from_pairs(&verify::companion_eigs(&poly).map_err(value_error)?))
}

/// Monic form of a symmetric polynomial with positive-definite leading
/// coefficient: returns `(coefficients, transform)` where eigenvectors map as
/// `transform @ x`.
#[pyfunction]
fn monicize(leading: Rows, coefficients: Vec<Rows>) -> PyResult<(Vec<Rows>, Rows)> {
    let ak = to_matrix(&leading, "leading")?;
    let coeffs = coefficients
        .iter()
        .enumerate()
        .map(|(i, rows)| to_matrix(rows, &format!("coefficients[{i}]")))
        .collect::<PyResult<Vec<_>>>()?;
    let mon = monicize_core(&ak, &coeffs, &ToleranceConfig::default()).map_err(value_error)?;
    Ok((mon.coefficients.iter().map(matrix_to_rows).collect(), matrix_to_rows(&mon.transform)))
}

/// Test problem: `"example1"`, `"example2"`, `"example3"` or `"random"`.
#[pyfunction]
#[pyo3(signature = (kind, *, m=None, n=None, k=None, structure=None, seed=0))]
fn generate<'py>(
    py: Python<'py>,
    kind: &str,
    m: Option<usize>,
    n: Option<usize>,
    k: Option<usize>,
    structure: Option<&str>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let problem = match kind {
        "example1" => problems::example1(),
        "example2" => problems::example2(),
        "example3" => problems::example3(m.unwrap_or(4)).map_err(value_error)?,
        "random" => {
            let missing = |what: &str| value_error(format!("random needs {what}"));
            let structure: StructureKind = structure.ok_or_else(|| missing("structure"))?.parse().map_err(value_error)?;
            let params = RandomParams {
                structure,
                n: n.ok_or_else(|| missing("n"))?,
                degree: k.ok_or_else(|| missing("k"))?,
                m: m.ok_or_else(|| missing("m"))?,
                seed,
            };
            problems::random(params).map_err(value_error)?
        }
        other => return Err(value_error(format!("unknown problem '{other}'"))),
    };
    let out = PyDict::new(py);
    out.set_item("n", problem.n)?;
    out.set_item("k", problem.degree)?;
    out.set_item("structure", problem.structure.as_str())?;
    out.set_item("eigenpairs", from_pairs(&problem.eigenpairs))?;
    out.set_item(
        "ground_truth",
        problem.ground_truth.as_ref().map(|p| p.coefficients().iter().map(matrix_to_rows).collect::<Vec<_>>()),
    )?;
    out.set_item("consistency_tol", problem.consistency_tol)?;
    Ok(out)
}

#[pymodule]
fn lppiep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStructureBasis>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(companion_eigs, m)?)?;
    m.add_function(wrap_pyfunction!(monicize, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
