//! Python bindings. Randomized functions take an integer seed and derive
//! their streams the same way the command-line tool does, so equal seeds
//! give equal graphs in both.

use dipercolation_core as core;
use dipercolation_core::{experiments, io, Error, Mode, SimpleFormula, Stream, TheoryMode};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(inner) => PyOSError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

#[pyclass(name = "DegreeSequence", module = "dipercolation")]
#[derive(Clone)]
struct PyDegreeSequence {
    inner: core::DegreeSequence,
}

#[pymethods]
impl PyDegreeSequence {
    #[new]
    fn new(pairs: Vec<(usize, usize)>) -> Self {
        PyDegreeSequence { inner: core::DegreeSequence::new(pairs) }
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyDegreeSequence { inner: io::read_sequence(path.as_ref()).map_err(to_py)? })
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.pairs().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn is_valid(&self) -> bool {
        self.inner.validate().valid
    }

    fn is_graphical(&self) -> PyResult<bool> {
        self.inner.is_graphical().map_err(to_py)
    }

    fn properness_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner.properness_report().map_err(to_py)?)
    }

    fn empirical_distribution(&self) -> PyResult<PyDegreeDistribution> {
        let e = self.inner.empirical_distribution().map_err(to_py)?;
        Ok(PyDegreeDistribution { inner: e.distribution })
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("DegreeSequence(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

#[pyclass(name = "DegreeDistribution", module = "dipercolation")]
#[derive(Clone)]
struct PyDegreeDistribution {
    inner: core::DegreeDistribution,
}

#[pymethods]
impl PyDegreeDistribution {
    /// Normalizes nonnegative weights keyed by `(in, out)`.
    #[staticmethod]
    fn from_weights(weights: Vec<((usize, usize), f64)>) -> PyResult<Self> {
        Ok(PyDegreeDistribution { inner: core::DegreeDistribution::from_weights(weights).map_err(to_py)? })
    }

    #[staticmethod]
    fn poisson(lam: f64) -> PyResult<Self> {
        Ok(PyDegreeDistribution { inner: core::DegreeDistribution::poisson(lam).map_err(to_py)? })
    }

    #[staticmethod]
    fn constant(d: usize) -> PyResult<Self> {
        Ok(PyDegreeDistribution { inner: core::DegreeDistribution::constant(d).map_err(to_py)? })
    }

    #[staticmethod]
    fn geometric(p: f64) -> PyResult<Self> {
        Ok(PyDegreeDistribution { inner: core::DegreeDistribution::geometric(p).map_err(to_py)? })
    }

    /// `poisson:<λ>`, `const:<d>`, `geometric:<p>` or `file:<path>`.
    #[staticmethod]
    fn load(source: &str) -> PyResult<Self> {
        let source: core::DistributionSource = parse(source)?;
        Ok(PyDegreeDistribution { inner: source.load().map_err(to_py)? })
    }

    fn get(&self, j: usize, k: usize) -> f64 {
        self.inner.get(j, k)
    }

    fn items(&self) -> Vec<((usize, usize), f64)> {
        self.inner.iter().collect()
    }

    fn moment(&self, i: usize, l: usize) -> f64 {
        self.inner.moment(i, l)
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    #[getter]
    fn mu11(&self) -> f64 {
        self.inner.mu11()
    }

    #[getter]
    fn mu20(&self) -> f64 {
        self.inner.mu20()
    }

    #[getter]
    fn mu02(&self) -> f64 {
        self.inner.mu02()
    }

    fn total_variation(&self, other: &PyDegreeDistribution) -> f64 {
        self.inner.total_variation(&other.inner)
    }

    fn bond(&self, pi: f64) -> PyResult<Self> {
        Ok(PyDegreeDistribution { inner: core::bond_distribution(&self.inner, pi).map_err(to_py)? })
    }

    fn site(&self, pi: f64) -> PyResult<Self> {
        Ok(PyDegreeDistribution { inner: core::site_distribution(&self.inner, pi).map_err(to_py)? })
    }

    fn realize(&self, n: usize, seed: u64) -> PyResult<PyDegreeSequence> {
        let mut rng = Stream::keyed(&[seed]).split(0);
        Ok(PyDegreeSequence { inner: core::realize_sequence(&self.inner, n, &mut rng).map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("DegreeDistribution(support={}, mean={})", self.inner.support_len(), self.inner.mean())
    }
}

#[pyclass(name = "Digraph", module = "dipercolation")]
#[derive(Clone)]
struct PyDigraph {
    inner: core::Digraph,
}

#[pymethods]
impl PyDigraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyDigraph { inner: core::Digraph::new(n, edges).map_err(to_py)? })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyDigraph { inner: io::read_edge_list(path.as_ref()).map_err(to_py)? })
    }

    fn to_edge_list(&self) -> String {
        io::write_edge_list(&self.inner, &io::EdgeListHeader::default())
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn is_simple(&self) -> bool {
        self.inner.is_simple()
    }

    fn degree_sequence(&self) -> PyDegreeSequence {
        PyDegreeSequence { inner: self.inner.degree_sequence() }
    }

    /// Component label of every vertex.
    fn scc(&self) -> Vec<usize> {
        core::strongly_connected_components(&self.inner).component_id().to_vec()
    }

    fn scc_sizes(&self) -> Vec<usize> {
        core::strongly_connected_components(&self.inner).component_sizes().to_vec()
    }

    fn largest_scc_fraction(&self) -> PyResult<f64> {
        core::largest_scc_fraction(&self.inner).map_err(to_py)
    }

    fn strong_component_of(&self, v: usize) -> PyResult<Vec<usize>> {
        core::strong_component_of(&self.inner, v).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Digraph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

#[pyfunction]
fn sample_configuration(seq: &PyDegreeSequence, seed: u64) -> PyResult<PyDigraph> {
    let mut rng = Stream::keyed(&[seed]).split(1);
    Ok(PyDigraph { inner: core::sample_configuration(&seq.inner, &mut rng).map_err(to_py)? })
}

/// Uniform simple digraph; returns `(graph, attempts)`.
#[pyfunction]
#[pyo3(signature = (seq, seed, max_attempts = core::DEFAULT_MAX_ATTEMPTS))]
fn sample_simple(seq: &PyDegreeSequence, seed: u64, max_attempts: usize) -> PyResult<(PyDigraph, usize)> {
    let mut rng = Stream::keyed(&[seed]).split(1);
    let s = core::sample_simple(&seq.inner, &mut rng, max_attempts).map_err(to_py)?;
    Ok((PyDigraph { inner: s.graph }, s.attempts))
}

/// Returns `(graph, deleted_vertices)`.
#[pyfunction]
#[pyo3(signature = (graph, pi, seed, mode = "bond"))]
fn percolate(graph: &PyDigraph, pi: f64, seed: u64, mode: &str) -> PyResult<(PyDigraph, Vec<usize>)> {
    let mode: Mode = parse(mode)?;
    let out = core::percolate(&graph.inner, mode, pi, &mut Stream::keyed(&[seed])).map_err(to_py)?;
    Ok((PyDigraph { inner: out.graph }, out.deleted_vertices))
}

#[pyfunction]
fn matching_probability(graph: &PyDigraph, seq: &PyDegreeSequence) -> PyResult<f64> {
    Ok(core::matching_probability(&graph.inner, &seq.inner).map_err(to_py)?.to_f64())
}

#[pyfunction]
#[pyo3(signature = (dist, formula = "standard"))]
fn simple_probability(dist: &PyDegreeDistribution, formula: &str) -> PyResult<f64> {
    let formula = match formula {
        "standard" => SimpleFormula::Standard,
        "as_printed" => SimpleFormula::AsPrinted,
        other => return Err(PyValueError::new_err(format!("unknown formula {other:?}"))),
    };
    core::simple_probability(&dist.inner, formula).map_err(to_py)
}

#[pyfunction]
fn critical_threshold(dist: &PyDegreeDistribution) -> PyResult<f64> {
    Ok(core::critical_threshold(&dist.inner).map_err(to_py)?.pi_c)
}

/// Theory prediction as a dict.
#[pyfunction]
#[pyo3(signature = (dist, pi, mode = "bond"))]
fn gscc_fraction<'py>(
    py: Python<'py>,
    dist: &PyDegreeDistribution,
    pi: f64,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let mode: TheoryMode = parse(mode)?;
    json_to_py(py, &core::gscc_fraction(&dist.inner, pi, mode).map_err(to_py)?)
}

/// Runs an experiment from `key = value` config text; returns
/// `(csv_text, summary)`.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config: &str) -> PyResult<(String, Bound<'py, PyAny>)> {
    let cfg = core::ExperimentConfig::parse(config).map_err(to_py)?;
    let result = py.detach(|| core::run_experiment(&cfg)).map_err(to_py)?;
    Ok((experiments::records_to_csv(&result.records), json_to_py(py, &result.summary)?))
}

#[pymodule]
fn dipercolation(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDegreeSequence>()?;
    m.add_class::<PyDegreeDistribution>()?;
    m.add_class::<PyDigraph>()?;
    m.add_function(wrap_pyfunction!(sample_configuration, m)?)?;
    m.add_function(wrap_pyfunction!(sample_simple, m)?)?;
    m.add_function(wrap_pyfunction!(percolate, m)?)?;
    m.add_function(wrap_pyfunction!(matching_probability, m)?)?;
    m.add_function(wrap_pyfunction!(simple_probability, m)?)?;
    m.add_function(wrap_pyfunction!(critical_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(gscc_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
