//! Python bindings: graphs, energies, matrix kernels, bound checkers and sweeps.
//!
//! Matrices cross the boundary as lists of rows (`list[list[float]]`).

use graph_energy::error::Error;
use graph_energy::generate::{Family, FamilyKind, WeightScheme};
use graph_energy::sweep::SweepConfig;
use graph_energy::theorems::{self, BoundReport, Equality, Tolerances};
use graph_energy::{energy, linalg, SymMatrix, WeightRegime, WeightedGraph};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } | Error::Inconsistent { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<SymMatrix> {
    SymMatrix::from_rows(&rows).map_err(to_py_err)
}

#[pyclass(
    name = "WeightedGraph",
    module = "graph_energy_py",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyWeightedGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyWeightedGraph {
    /// `weights=None` selects degree weights.
    #[new]
    #[pyo3(signature = (n, edges, weights=None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let inner = match weights {
            Some(w) => WeightedGraph::new(n, &edges, w),
            None => WeightedGraph::with_degree_weight(n, &edges),
        }
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        WeightedGraph::from_json(text)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn disjoint_union(parts: Vec<PyRef<'_, Self>>) -> PyResult<Self> {
        let parts: Vec<WeightedGraph> = parts.iter().map(|p| p.inner.clone()).collect();
        WeightedGraph::disjoint_union(&parts)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn regime(&self) -> &'static str {
        match self.inner.regime() {
            WeightRegime::Degree => "degree",
            WeightRegime::Custom => "custom",
        }
    }

    fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        self.inner.adjacency_matrix().rows()
    }

    fn weight_diag(&self) -> Vec<Vec<f64>> {
        self.inner.weight_diag().rows()
    }

    fn laplacian(&self) -> Vec<Vec<f64>> {
        self.inner.laplacian().rows()
    }

    fn signless_laplacian(&self) -> Vec<Vec<f64>> {
        self.inner.signless_laplacian().rows()
    }

    /// Side labels of a bipartition, or `None`.
    fn is_bipartite(&self) -> Option<Vec<bool>> {
        self.inner.is_bipartite().map(|b| b.side)
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    #[pyo3(signature = (tol=0.0))]
    fn is_omega_regular(&self, tol: f64) -> bool {
        self.inner.is_omega_regular(tol)
    }

    /// `(mean, md, var)` of the vertex weights.
    fn weight_stats(&self) -> (f64, f64, f64) {
        let s = energy::weight_stats(&self.inner);
        (s.mean, s.md, s.var)
    }

    fn energy(&self) -> PyResult<f64> {
        energy::graph_energy(&self.inner).map_err(to_py_err)
    }

    fn laplacian_energy(&self) -> PyResult<f64> {
        energy::laplacian_energy(&self.inner).map_err(to_py_err)
    }

    /// `(spectral, matrix)` routes to LE_ω; raises if they disagree.
    fn laplacian_energy_routes(&self) -> PyResult<(f64, f64)> {
        energy::laplacian_energy_checked(&self.inner)
            .map(|le| (le.spectral, le.matrix))
            .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "WeightedGraph(n={}, m={}, regime={})",
            self.inner.vertex_count(),
            self.inner.edge_count(),
            self.regime()
        )
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "BoundReport", module = "graph_energy_py", frozen, get_all)]
pub struct PyBoundReport {
    theorem: &'static str,
    lhs: f64,
    rhs: f64,
    gap: f64,
    holds: bool,
    equality: &'static str,
    predicted_equality: Option<bool>,
    consistent: Option<bool>,
}

impl From<BoundReport> for PyBoundReport {
    fn from(r: BoundReport) -> Self {
        Self {
            theorem: r.theorem.name(),
            lhs: r.lhs,
            rhs: r.rhs,
            gap: r.gap,
            holds: r.holds,
            equality: match r.equality {
                Equality::Strict => "strict",
                Equality::EqualWithinTol => "equal_within_tol",
                Equality::Violated => "violated",
            },
            predicted_equality: r.predicted_equality,
            consistent: r.consistent,
        }
    }
}

#[pymethods]
impl PyBoundReport {
    fn __repr__(&self) -> String {
        format!(
            "BoundReport(theorem={}, lhs={}, rhs={}, holds={}, equality={})",
            self.theorem, self.lhs, self.rhs, self.holds, self.equality
        )
    }
}

fn tolerances(abs_tol: f64, eq_tol: f64) -> Tolerances {
    Tolerances { abs_tol, eq_tol }
}

#[pyfunction]
fn eigenvalues(rows: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    linalg::eigvalsh(&matrix(rows)?).map_err(to_py_err)
}

#[pyfunction]
fn singular_values(rows: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    linalg::singular_values(&matrix(rows)?)
        .map(|s| s.values)
        .map_err(to_py_err)
}

#[pyfunction]
fn matrix_energy(rows: Vec<Vec<f64>>) -> PyResult<f64> {
    linalg::matrix_energy(&matrix(rows)?).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (rows, tol=1e-10))]
fn is_psd(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    linalg::is_psd(&matrix(rows)?, tol).map_err(to_py_err)
}

#[pyfunction]
fn matrix_abs(rows: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    linalg::matrix_abs(&matrix(rows)?)
        .map(|m| m.rows())
        .map_err(to_py_err)
}

#[pyfunction]
fn direct_sum(blocks: Vec<Vec<Vec<f64>>>) -> PyResult<Vec<Vec<f64>>> {
    let blocks = blocks
        .into_iter()
        .map(matrix)
        .collect::<PyResult<Vec<_>>>()?;
    linalg::direct_sum(&blocks)
        .map(|m| m.rows())
        .map_err(to_py_err)
}

#[pyfunction]
fn mean_deviation(xs: Vec<f64>) -> PyResult<f64> {
    energy::mean_deviation(&xs).map_err(to_py_err)
}

#[pyfunction]
fn variance(xs: Vec<f64>) -> PyResult<f64> {
    energy::variance(&xs).map_err(to_py_err)
}

/// Generates a family member; `weight` is `degree`, `const:C` or `uniform:LO:HI`.
#[pyfunction]
#[pyo3(signature = (family, n, p=0.5, m=None, weight="degree", seed=0))]
fn generate(
    family: &str,
    n: usize,
    p: f64,
    m: Option<usize>,
    weight: &str,
    seed: u64,
) -> PyResult<PyWeightedGraph> {
    let kind: FamilyKind = family.parse().map_err(to_py_err)?;
    let weight: WeightScheme = weight.parse().map_err(to_py_err)?;
    let member = match kind {
        FamilyKind::Path => Family::Path { n },
        FamilyKind::Cycle => Family::Cycle { n },
        FamilyKind::Complete => Family::Complete { n },
        FamilyKind::CompleteBipartite => Family::CompleteBipartite {
            left: n,
            right: m.unwrap_or(n),
        },
        FamilyKind::Star => Family::Star { n },
        FamilyKind::Gnp => Family::Gnp { n, p },
        FamilyKind::RandomBipartite => Family::RandomBipartite { n, p },
    };
    graph_energy::generate(&member, &weight, seed)
        .map(|inner| PyWeightedGraph { inner })
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (a, b, abs_tol=1e-8, eq_tol=1e-7))]
fn check_ky_fan(
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    abs_tol: f64,
    eq_tol: f64,
) -> PyResult<PyBoundReport> {
    theorems::check_ky_fan(&matrix(a)?, &matrix(b)?, &tolerances(abs_tol, eq_tol))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (g, abs_tol=1e-8, eq_tol=1e-7))]
fn check_md_bound(
    g: PyRef<'_, PyWeightedGraph>,
    abs_tol: f64,
    eq_tol: f64,
) -> PyResult<PyBoundReport> {
    theorems::check_md_bound(&g.inner, &tolerances(abs_tol, eq_tol))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (g, abs_tol=1e-8, eq_tol=1e-7))]
fn check_bipartite_lower(
    g: PyRef<'_, PyWeightedGraph>,
    abs_tol: f64,
    eq_tol: f64,
) -> PyResult<PyBoundReport> {
    theorems::check_bipartite_lower(&g.inner, &tolerances(abs_tol, eq_tol))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (g, abs_tol=1e-8, eq_tol=1e-7))]
fn check_sandwich(
    g: PyRef<'_, PyWeightedGraph>,
    abs_tol: f64,
    eq_tol: f64,
) -> PyResult<PyBoundReport> {
    theorems::check_sandwich(&g.inner, &tolerances(abs_tol, eq_tol))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (g, abs_tol=1e-8, eq_tol=1e-7))]
fn check_bipartite_similarity(
    g: PyRef<'_, PyWeightedGraph>,
    abs_tol: f64,
    eq_tol: f64,
) -> PyResult<PyBoundReport> {
    theorems::check_bipartite_similarity(&g.inner, &tolerances(abs_tol, eq_tol))
        .map(Into::into)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (parts, abs_tol=1e-8, eq_tol=1e-7))]
fn check_union_bound(
    parts: Vec<PyRef<'_, PyWeightedGraph>>,
    abs_tol: f64,
    eq_tol: f64,
) -> PyResult<PyBoundReport> {
    let parts: Vec<WeightedGraph> = parts.iter().map(|p| p.inner.clone()).collect();
    theorems::check_union_bound(&parts, &tolerances(abs_tol, eq_tol))
        .map(Into::into)
        .map_err(to_py_err)
}

/// Runs a sweep described by a JSON `SweepConfig` and returns the JSON report.
#[pyfunction]
fn run_sweep(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let config: SweepConfig = serde_json::from_str(config_json)
        .map_err(|e| PyValueError::new_err(format!("bad sweep config: {e}")))?;
    let report = py
        .detach(|| graph_energy::run_sweep(&config))
        .map_err(to_py_err)?;
    Ok(report.to_json())
}

#[pymodule]
fn graph_energy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeightedGraph>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_energy, m)?)?;
    m.add_function(wrap_pyfunction!(is_psd, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_abs, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(mean_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(check_ky_fan, m)?)?;
    m.add_function(wrap_pyfunction!(check_md_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_bipartite_lower, m)?)?;
    m.add_function(wrap_pyfunction!(check_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(check_bipartite_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(check_union_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
