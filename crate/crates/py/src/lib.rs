//! Python bindings: `import pybatchcover`.
//!
//! Set indices are 1-based on the Python side, matching the JSON format.

use batchcover::harness::{self, ExperimentGrid};
use batchcover::solvers::{self, DPolicy, ElementOrder, SolverConfig};
use batchcover::{generators, harmonic as hm, vc, Algorithm, Error};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr>(text: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    text.parse()
        .map_err(|e: T::Err| PyValueError::new_err(e.to_string()))
}

fn one_based(sets: &[usize]) -> Vec<usize> {
    sets.iter().map(|j| j + 1).collect()
}

/// A batched set cover instance.
#[pyclass(name = "Instance", module = "pybatchcover", frozen)]
pub struct PyInstance {
    inner: batchcover::Instance,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = batchcover::Instance::from_json(text).map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    #[pyo3(signature = (pretty = false))]
    fn to_json(&self, pretty: bool) -> String {
        if pretty {
            self.inner.to_json_pretty()
        } else {
            self.inner.to_json()
        }
    }

    #[getter]
    fn num_sets(&self) -> usize {
        self.inner.num_sets()
    }

    #[getter]
    fn num_elements(&self) -> usize {
        self.inner.num_elements()
    }

    #[getter]
    fn costs(&self) -> Vec<f64> {
        self.inner.system.costs.clone()
    }

    /// Membership lists per batch, per element.
    #[getter]
    fn batches(&self) -> Vec<Vec<Vec<usize>>> {
        self.inner
            .batches
            .iter()
            .map(|b| b.elements.iter().map(|e| one_based(&e.member_of)).collect())
            .collect()
    }

    /// Validation messages; empty when the instance is well formed.
    fn validate(&self) -> Vec<String> {
        self.inner.validate()
    }

    fn vc_dimensions(&self) -> PyResult<Vec<usize>> {
        vc::batch_vc_dimensions(&self.inner).map_err(py_err)
    }

    fn check_adversary_restriction(&self, z: u32) -> PyResult<bool> {
        vc::check_adversary_restriction(&self.inner, z).map_err(py_err)
    }

    /// `(cost, chosen_sets)` of an optimal integral cover.
    fn offline_opt(&self) -> PyResult<(f64, Vec<usize>)> {
        let sol = solvers::offline_opt(&self.inner).map_err(py_err)?;
        Ok((sol.cost, one_based(&sol.chosen_sets)))
    }

    fn __len__(&self) -> usize {
        self.inner.batches.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(num_sets={}, batches={}, elements={})",
            self.inner.num_sets(),
            self.inner.batches.len(),
            self.inner.num_elements()
        )
    }
}

#[pyfunction]
fn harmonic(r: usize) -> f64 {
    hm::harmonic(r)
}

#[pyfunction]
fn lower_bound(m: usize, z: u32) -> PyResult<f64> {
    hm::lower_bound(m, z).map_err(py_err)
}

#[pyfunction]
fn lemma3_holds(r: usize, t: usize) -> PyResult<bool> {
    hm::lemma3_holds(r, t).map_err(py_err)
}

#[pyfunction]
fn x_value(cost: f64, d: usize, dual_mass: f64) -> f64 {
    solvers::x_value(cost, d, dual_mass)
}

#[pyfunction]
fn gen_online_worst(m: usize) -> PyResult<PyInstance> {
    let inner = generators::gen_online_worst(m).map_err(py_err)?;
    Ok(PyInstance { inner })
}

#[pyfunction]
fn gen_batched_worst(m: usize, z: u32) -> PyResult<PyInstance> {
    let inner = generators::gen_batched_worst(m, z).map_err(py_err)?;
    Ok(PyInstance { inner })
}

/// Runs one algorithm and returns the result as a dict.
#[pyfunction]
#[pyo3(signature = (instance, algorithm, epsilon = 0.001, d = "m", seed = None))]
fn run<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    algorithm: &str,
    epsilon: f64,
    d: &str,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = SolverConfig {
        d_policy: parse::<DPolicy>(d)?,
        order: seed.map_or(ElementOrder::Position, |seed| ElementOrder::Shuffled {
            seed,
        }),
        ..SolverConfig::new(parse::<Algorithm>(algorithm)?, epsilon)
    };
    let inner = &instance.inner;
    let res = py.detach(|| solvers::run(inner, &config)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("algorithm", res.algorithm.name())?;
    out.set_item("epsilon", res.epsilon)?;
    out.set_item("d", res.d)?;
    out.set_item("primal_cost", res.primal_cost)?;
    out.set_item("dual_value", res.dual_value)?;
    out.set_item("opt_cost", res.opt_cost)?;
    out.set_item("ratio", res.ratio)?;
    let trace: Vec<(usize, f64)> = res
        .per_batch_trace
        .iter()
        .map(|t| (t.batch, t.primal_cost))
        .collect();
    out.set_item("per_batch_trace", trace)?;
    Ok(out)
}

/// Sweeps the adversarial families; one dict per grid row.
#[pyfunction]
#[pyo3(signature = (z_values, m_max, epsilon = 0.001, algorithms = None, adaptive = true))]
fn run_grid<'py>(
    py: Python<'py>,
    z_values: Vec<u32>,
    m_max: usize,
    epsilon: f64,
    algorithms: Option<Vec<String>>,
    adaptive: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let algorithms = match algorithms {
        Some(names) => names
            .iter()
            .map(|a| parse::<Algorithm>(a))
            .collect::<PyResult<_>>()?,
        None => Algorithm::ALL.to_vec(),
    };
    let grid = ExperimentGrid {
        z_values,
        m_range: 1..=m_max,
        epsilon,
        algorithms,
        adaptive,
        ..ExperimentGrid::default()
    };
    let result = py.detach(|| harness::run_grid(&grid));
    if let Some(f) = result.failed.first() {
        return Err(PyValueError::new_err(format!(
            "cell z={} m={} {} failed: {}",
            f.z, f.m, f.algorithm, f.error
        )));
    }
    result
        .rows
        .iter()
        .map(|r| {
            let row = PyDict::new(py);
            row.set_item("z", r.z)?;
            row.set_item("m", r.m)?;
            row.set_item("algorithm", r.algorithm.name())?;
            row.set_item("epsilon", r.epsilon)?;
            row.set_item("alg_cost", r.alg_cost)?;
            row.set_item("opt_cost", r.opt_cost)?;
            row.set_item("ratio", r.ratio)?;
            row.set_item("lower_bound", r.lower_bound)?;
            Ok(row)
        })
        .collect()
}

/// `(best_ratio, best_sequence, evaluated)` over all online sequences.
#[pyfunction]
#[pyo3(signature = (m, algorithm, max_len, epsilon = 0.001))]
fn adversary_search(
    py: Python<'_>,
    m: usize,
    algorithm: &str,
    max_len: usize,
    epsilon: f64,
) -> PyResult<(f64, Vec<Vec<usize>>, usize)> {
    let alg = parse::<Algorithm>(algorithm)?;
    let out = py
        .detach(|| harness::adversary_search(m, alg, epsilon, max_len))
        .map_err(py_err)?;
    let seq = out.best_sequence.iter().map(|s| one_based(s)).collect();
    Ok((out.best_ratio, seq, out.evaluated))
}

#[pymodule]
fn pybatchcover(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(lemma3_holds, m)?)?;
    m.add_function(wrap_pyfunction!(x_value, m)?)?;
    m.add_function(wrap_pyfunction!(gen_online_worst, m)?)?;
    m.add_function(wrap_pyfunction!(gen_batched_worst, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_grid, m)?)?;
    m.add_function(wrap_pyfunction!(adversary_search, m)?)?;
    Ok(())
}
