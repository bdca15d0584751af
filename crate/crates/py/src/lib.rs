use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use turanlab_core as tl;
use tl::density::digraph::build_dense_digraph;
use tl::density::DensityParams;
use tl::extremal::{Forbidden, SearchMode, SearchOptions};
use tl::regularity::RegularizeOptions;
use tl::roots::RootMethod;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON into plain dicts and lists.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn params(r: usize, s: usize, t: usize) -> PyResult<tl::PatternParams> {
    tl::PatternParams::new(r, s, t).map_err(value_err)
}

fn method(name: &str) -> PyResult<RootMethod> {
    match name {
        "matching" => Ok(RootMethod::Matching),
        "exact" => Ok(RootMethod::Exact),
        other => Err(PyValueError::new_err(format!("unknown root method {other:?}"))),
    }
}

fn forbidden(name: &str, r: usize, s: usize, t: usize) -> PyResult<Forbidden> {
    match name {
        "kst" => Ok(Forbidden::Kst(params(r, s, t)?)),
        "quadruple" => Ok(Forbidden::Quadruple),
        other => Err(PyValueError::new_err(format!("unknown pattern {other:?}"))),
    }
}

#[pyclass(name = "Hypergraph", module = "turanlab", frozen)]
pub struct PyHypergraph {
    inner: tl::Hypergraph,
}

#[pymethods]
impl PyHypergraph {
    /// `part_sizes` of length 1 gives a general host.
    #[new]
    fn new(r: usize, part_sizes: Vec<usize>, edges: Vec<Vec<u32>>) -> PyResult<Self> {
        let inner = tl::Hypergraph::new(r, part_sizes, edges).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = tl::Hypergraph::from_text(text).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Self::from_text(&text)
    }

    #[staticmethod]
    fn complete_partite(part_sizes: Vec<usize>) -> PyResult<Self> {
        let inner = tl::Hypergraph::complete_partite(part_sizes).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    fn complete(n: usize, r: usize) -> PyResult<Self> {
        let inner = tl::Hypergraph::complete(n, r).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    fn star(n: usize, r: usize) -> PyResult<Self> {
        let inner = tl::extremal::construct_star(n, r).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    /// Greedy maximal free hypergraph; `parts` selects a partite host.
    #[staticmethod]
    #[pyo3(signature = (n, r, seed=0, pattern="kst", s=2, t=2, parts=None))]
    fn random_maximal(
        n: usize,
        r: usize,
        seed: u64,
        pattern: &str,
        s: usize,
        t: usize,
        parts: Option<Vec<usize>>,
    ) -> PyResult<Self> {
        let inner = match parts {
            Some(parts) => {
                let f = forbidden(pattern, parts.len(), s, t)?;
                tl::extremal::construct_random_maximal_partite(parts, f, seed)
            }
            None => tl::extremal::construct_random_maximal(n, r, forbidden(pattern, r, s, t)?, seed),
        }
        .map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn part_sizes(&self) -> Vec<usize> {
        self.inner.part_sizes().to_vec()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<Vec<u32>> {
        self.inner.edges().to_vec()
    }

    fn contains_edge(&self, edge: Vec<u32>) -> bool {
        let mut e = edge;
        e.sort_unstable();
        self.inner.contains_edge(&e)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Hypergraph(r={}, part_sizes={:?}, edges={})",
            self.inner.r(),
            self.inner.part_sizes(),
            self.inner.edge_count()
        )
    }

    /// The least copy of `K_{s,t}^{(r)}` as a dict, or `None`.
    #[pyo3(signature = (s=2, t=2))]
    fn find_kst<'py>(&self, py: Python<'py>, s: usize, t: usize) -> PyResult<Bound<'py, PyAny>> {
        let found = tl::patterns::find_kst(&self.inner, params(self.inner.r(), s, t)?).map_err(value_err)?;
        to_py(py, &found)
    }

    #[pyo3(signature = (s=2, t=2))]
    fn is_kst_free(&self, s: usize, t: usize) -> PyResult<bool> {
        tl::patterns::is_kst_free(&self.inner, params(self.inner.r(), s, t)?).map_err(value_err)
    }

    fn find_erdos_quadruple<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &tl::patterns::find_erdos_quadruple(&self.inner))
    }

    fn common_neighborhood(&self, set: Vec<u32>) -> PyResult<Vec<Vec<u32>>> {
        tl::roots::common_neighborhood(&self.inner, &set).map_err(value_err)
    }

    #[pyo3(signature = (set, method="matching", exact_budget=tl::roots::DEFAULT_EXACT_BUDGET))]
    fn root_set<'py>(&self, py: Python<'py>, set: Vec<u32>, method: &str, exact_budget: usize) -> PyResult<Bound<'py, PyAny>> {
        let report = tl::roots::root_set(&self.inner, &set, self::method(method)?, exact_budget).map_err(value_err)?;
        to_py(py, &report)
    }

    #[pyo3(signature = (s=2, epsilon=0.1, seed=0, deletion_divisor=None))]
    fn find_regular_subgraph<'py>(
        &self,
        py: Python<'py>,
        s: usize,
        epsilon: f64,
        seed: u64,
        deletion_divisor: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let options = RegularizeOptions {
            seed,
            threshold_divisor: deletion_divisor,
            ..RegularizeOptions::new(s, epsilon)
        };
        let reg = tl::regularity::find_regular_subgraph(&self.inner, &options).map_err(value_err)?;
        to_py(py, &reg)
    }

    /// The dense part digraph; `permissive` lowers every threshold.
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (s=2, epsilon=0.1, alpha=2.0, codegree_threshold=None, permissive=false, require_regular=false))]
    fn dense_digraph<'py>(
        &self,
        py: Python<'py>,
        s: usize,
        epsilon: f64,
        alpha: f64,
        codegree_threshold: Option<f64>,
        permissive: bool,
        require_regular: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mut params = if permissive {
            DensityParams::permissive(s)
        } else {
            DensityParams::new(s, epsilon, alpha)
        };
        if codegree_threshold.is_some() {
            params.codegree_threshold = codegree_threshold;
        }
        let d = build_dense_digraph(&self.inner, &params, require_regular).map_err(value_err)?;
        let out = serde_json::json!({
            "nodes": d.nodes,
            "arcs": d.arcs,
            "verdicts": d.verdicts(),
            "failures": d.failures,
        });
        to_py(py, &out)
    }
}

fn search_options(budget: u64) -> SearchOptions {
    SearchOptions {
        budget,
        ..SearchOptions::default()
    }
}

/// Exact `ex(n, K_{s,t}^{(r)})` with witnesses.
#[pyfunction]
#[pyo3(signature = (n, r=3, s=2, t=2, mode="all", budget=tl::extremal::DEFAULT_BUDGET))]
fn turan_exact<'py>(py: Python<'py>, n: usize, r: usize, s: usize, t: usize, mode: &str, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let mode = match mode {
        "all" => SearchMode::All,
        "partite" => SearchMode::Partite,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let res = tl::extremal::turan_exact(n, params(r, s, t)?, mode, search_options(budget)).map_err(value_err)?;
    to_py(py, &res)
}

#[pyfunction]
#[pyo3(signature = (n, r=3, budget=tl::extremal::DEFAULT_BUDGET))]
fn erdos_fr_exact<'py>(py: Python<'py>, n: usize, r: usize, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let res = tl::extremal::erdos_fr_exact(n, r, search_options(budget)).map_err(value_err)?;
    to_py(py, &res)
}

/// Runs the command-line front end; returns its exit status.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    tl::cli::main_with_args(std::iter::once("turanlab".to_string()).chain(args))
}

#[pymodule]
fn turanlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyHypergraph>()?;
    m.add_function(wrap_pyfunction!(turan_exact, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_fr_exact, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
