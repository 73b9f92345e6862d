//! Python bindings: generation, edge-list I/O, assortativity coefficients and
//! the bucketed joint-degree views.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tgirg::assortativity::{coefficient_report, hill_from_degrees};
use tgirg::generators::{calibrate_avg_degree, Alpha, CalibrationOptions, Model, ModelParams};
use tgirg::joint::{conditional_change_heatmap, degree_ccdf_curves, joint_degree_histogram, BucketScheme};
use tgirg::{io, Error};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::Csv(_) | Error::Json(_) => PyIOError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

/// Immutable simple undirected graph.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: tgirg::Graph,
    scale: Option<f64>,
}

#[pymethods]
impl PyGraph {
    /// Builds a graph from `(u, v)` id pairs; self-loops and duplicates are dropped.
    #[staticmethod]
    fn from_edges(edges: Vec<(u64, u64)>) -> Self {
        PyGraph {
            inner: tgirg::build_graph(edges).graph,
            scale: None,
        }
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// Kernel scale found by calibration, for generated graphs.
    #[getter]
    fn scale(&self) -> Option<f64> {
        self.scale
    }

    fn degrees(&self) -> Vec<u32> {
        self.inner.degrees()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges().to_vec()
    }

    fn average_degree(&self) -> f64 {
        self.inner.average_degree()
    }

    fn average_clustering(&self) -> PyResult<f64> {
        self.inner.average_clustering().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

/// Generates a graph calibrated to `avg_degree` (or with `radius`, for rgg).
#[pyfunction]
#[pyo3(signature = (model, n, tau=2.8, sigma=1.0, dim=2, temperature=0.0, avg_degree=None, radius=None, seed=20240601, allow_non_power_law=false, workers=0))]
#[allow(clippy::too_many_arguments)]
fn generate(
    model: &str,
    n: usize,
    tau: f64,
    sigma: f64,
    dim: usize,
    temperature: f64,
    avg_degree: Option<f64>,
    radius: Option<f64>,
    seed: u64,
    allow_non_power_law: bool,
    workers: usize,
) -> PyResult<PyGraph> {
    let model: Model = model.parse().map_err(to_py)?;
    let mut params = ModelParams::new(model, n)
        .tau(tau)
        .sigma(sigma)
        .dim(dim)
        .alpha(Alpha::from_temperature(temperature).map_err(to_py)?)
        .allow_non_power_law(allow_non_power_law)
        .seed(seed);
    if let Some(k) = avg_degree {
        params = params.avg_degree(k);
    }
    if radius.is_some() {
        params.rgg_radius = radius;
        params.target_avg_degree = avg_degree;
    }
    let opts = CalibrationOptions {
        workers,
        ..Default::default()
    };
    let cal = calibrate_avg_degree(&params, &opts).map_err(to_py)?;
    Ok(PyGraph {
        inner: cal.instance.graph,
        scale: Some(cal.scale),
    })
}

#[pyfunction]
#[pyo3(signature = (path, one_indexed=true))]
fn read_edge_list(path: &str, one_indexed: bool) -> PyResult<PyGraph> {
    let (graph, _) = io::read_edge_list(&io::EdgeListFile::new(path).one_indexed(one_indexed)).map_err(to_py)?;
    Ok(PyGraph {
        inner: graph,
        scale: None,
    })
}

#[pyfunction]
fn write_edge_list(graph: &PyGraph, path: &str) -> PyResult<()> {
    io::write_edge_list(&graph.inner, path).map_err(to_py)
}

/// Pearson, Spearman and Kendall assortativity; undefined values are `None`.
#[pyfunction]
fn coefficients<'py>(py: Python<'py>, graph: &PyGraph) -> PyResult<Bound<'py, PyDict>> {
    let r = coefficient_report(&graph.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("pearson", r.pearson)?;
    d.set_item("spearman", r.spearman)?;
    d.set_item("kendall", r.kendall)?;
    d.set_item("concordant", r.concordant)?;
    d.set_item("discordant", r.discordant)?;
    d.set_item("excluded_same_edge_pairs", r.excluded_same_edge_pairs)?;
    d.set_item("tie_fraction", r.tie_fraction)?;
    Ok(d)
}

/// Hill estimate of the degree tail exponent.
#[pyfunction]
#[pyo3(signature = (graph, k_tail=None, seed=0))]
fn hill(graph: &PyGraph, k_tail: Option<usize>, seed: u64) -> PyResult<Option<f64>> {
    Ok(hill_from_degrees(&graph.inner.degree_sequence(), k_tail, seed)
        .map_err(to_py)?
        .tau)
}

/// Joint bucket probabilities and conditional change matrix.
#[pyfunction]
#[pyo3(signature = (graph, buckets=21))]
fn heatmaps<'py>(py: Python<'py>, graph: &PyGraph, buckets: usize) -> PyResult<Bound<'py, PyDict>> {
    let scheme = BucketScheme::for_graph(&graph.inner, buckets).map_err(to_py)?;
    let joint = joint_degree_histogram(&graph.inner, &scheme).map_err(to_py)?;
    let heat = conditional_change_heatmap(&joint);
    let d = PyDict::new(py);
    d.set_item("lower_bounds", scheme.lower_bounds())?;
    d.set_item("joint", joint.probs())?;
    d.set_item("conditional_change", heat.change)?;
    Ok(d)
}

/// Node, edge and conditional degree CCDFs as lists of `(degree, value)`.
#[pyfunction]
#[pyo3(signature = (graph, buckets=21))]
fn ccdf<'py>(py: Python<'py>, graph: &PyGraph, buckets: usize) -> PyResult<Bound<'py, PyDict>> {
    let scheme = BucketScheme::for_graph(&graph.inner, buckets).map_err(to_py)?;
    let curves = degree_ccdf_curves(&graph.inner, &scheme).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("node", curves.node)?;
    d.set_item("edge", curves.edge)?;
    let cond = PyDict::new(py);
    for c in curves.conditional {
        cond.set_item(c.bucket, c.curve)?;
    }
    d.set_item("conditional", cond)?;
    Ok(d)
}

#[pymodule]
fn tgirg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(read_edge_list, m)?)?;
    m.add_function(wrap_pyfunction!(write_edge_list, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(hill, m)?)?;
    m.add_function(wrap_pyfunction!(heatmaps, m)?)?;
    m.add_function(wrap_pyfunction!(ccdf, m)?)?;
    Ok(())
}
