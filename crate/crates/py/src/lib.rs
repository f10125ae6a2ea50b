//! Python bindings: instances, the center-selection sweep, axiom checks,
//! baselines and metrics.

#![allow(clippy::useless_conversion)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use prfair_core::axioms::{
    check_core, check_pf, check_prf2, check_prf3, check_prf_discrete, check_prf_unconstrained,
    check_up, Axiom, AxiomReport, PrfMethod,
};
use prfair_core::baselines;
use prfair_core::io::{self, DatasetSpec};
use prfair_core::{Error, Metric, Mode, Outcome, Point};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_metric(name: &str) -> PyResult<Metric> {
    match name.to_ascii_lowercase().as_str() {
        "euclidean" => Ok(Metric::Euclidean),
        "manhattan" => Ok(Metric::Manhattan),
        other => Err(PyValueError::new_err(format!("unknown metric {other}"))),
    }
}

fn points(rows: Vec<Vec<f64>>) -> Vec<Point> {
    rows.into_iter().map(Point::new).collect()
}

#[pyclass(frozen, module = "prfair")]
#[derive(Clone)]
pub struct Instance {
    inner: prfair_core::Instance,
}

impl Instance {
    fn outcome(&self, selected: Vec<usize>) -> PyResult<Outcome> {
        Outcome::new(&self.inner, selected).map_err(py_err)
    }
}

#[pymethods]
impl Instance {
    /// Candidate centers are the agents themselves.
    #[staticmethod]
    #[pyo3(signature = (agents, k, metric = "euclidean"))]
    fn unconstrained(agents: Vec<Vec<f64>>, k: usize, metric: &str) -> PyResult<Self> {
        let inner = prfair_core::Instance::unconstrained(points(agents), k, parse_metric(metric)?)
            .map_err(py_err)?;
        Ok(Instance { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (agents, candidates, k, metric = "euclidean"))]
    fn discrete(
        agents: Vec<Vec<f64>>,
        candidates: Vec<Vec<f64>>,
        k: usize,
        metric: &str,
    ) -> PyResult<Self> {
        let inner = prfair_core::Instance::discrete(
            points(agents),
            points(candidates),
            k,
            parse_metric(metric)?,
        )
        .map_err(py_err)?;
        Ok(Instance { inner })
    }

    /// One of the built-in synthetic instances.
    #[staticmethod]
    #[pyo3(signature = (name, params = None))]
    fn generate(name: &str, params: Option<BTreeMap<String, f64>>) -> PyResult<Self> {
        let inner = io::generate(name, &params.unwrap_or_default()).map_err(py_err)?;
        Ok(Instance { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, k, columns = None, standardize = false, id_column = None, metric = "euclidean"))]
    fn load_csv(
        path: PathBuf,
        k: usize,
        columns: Option<Vec<String>>,
        standardize: bool,
        id_column: Option<String>,
        metric: &str,
    ) -> PyResult<Self> {
        let spec = DatasetSpec {
            path,
            columns,
            standardize,
            id_column,
        };
        let inner = io::load_csv(&spec, k, parse_metric(metric)?).map_err(py_err)?;
        Ok(Instance { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.mode() {
            Mode::Unconstrained => "unconstrained",
            Mode::Discrete => "discrete",
        }
    }

    #[getter]
    fn agents(&self) -> Vec<Vec<f64>> {
        self.inner
            .agents()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect()
    }

    #[getter]
    fn candidates(&self) -> Vec<Vec<f64>> {
        self.inner
            .candidates()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect()
    }

    /// Distance from agent `i` to candidate `c`.
    fn dist(&self, i: usize, c: usize) -> PyResult<f64> {
        if i >= self.inner.n() || c >= self.inner.m() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.dist(i, c))
    }

    fn with_k(&self, k: usize) -> PyResult<Self> {
        Ok(Instance {
            inner: self.inner.with_k(k).map_err(py_err)?,
        })
    }

    fn scaled(&self, alpha: f64) -> PyResult<Self> {
        Ok(Instance {
            inner: self.inner.scaled(alpha).map_err(py_err)?,
        })
    }

    fn digest(&self) -> String {
        io::instance_digest(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, m={}, k={}, dim={}, mode={})",
            self.inner.n(),
            self.inner.m(),
            self.inner.k(),
            self.inner.dim(),
            self.mode()
        )
    }
}

/// Result of the center-selection sweep.
#[pyclass(frozen, get_all, module = "prfair")]
pub struct Selection {
    selected: Vec<usize>,
    /// Radius at which each center was selected.
    radii: Vec<f64>,
    trace_json: String,
}

#[pyfunction]
fn select_prf_centers(inst: &Instance) -> PyResult<Selection> {
    let (x, trace) = prfair_core::select_prf_centers(&inst.inner).map_err(py_err)?;
    Ok(Selection {
        selected: x.selected().to_vec(),
        radii: trace.rounds.iter().map(|r| r.radius).collect(),
        trace_json: serde_json::to_string(&trace).map_err(|e| py_err(e.into()))?,
    })
}

#[pyclass(frozen, module = "prfair")]
pub struct Report {
    inner: AxiomReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn axiom(&self) -> &'static str {
        self.inner.axiom.name()
    }

    #[getter]
    fn satisfied(&self) -> bool {
        self.inner.satisfied
    }

    /// Agents of the violating group, if any.
    #[getter]
    fn witness_agents(&self) -> Option<Vec<usize>> {
        self.inner.witness.as_ref().map(|w| w.agents.clone())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| py_err(e.into()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(axiom={}, satisfied={})",
            self.axiom(),
            self.inner.satisfied
        )
    }
}

/// Checks one axiom (`up`, `pf`, `core`, `prf`, `prf2`, `prf3`) on an outcome.
/// `prf` picks the unconstrained or discrete form from the instance's mode.
#[pyfunction]
#[pyo3(signature = (inst, selected, axiom, exhaustive = false))]
fn check(inst: &Instance, selected: Vec<usize>, axiom: &str, exhaustive: bool) -> PyResult<Report> {
    let x = inst.outcome(selected)?;
    let method = if exhaustive {
        PrfMethod::Exhaustive
    } else {
        PrfMethod::Auto
    };
    let axiom = match axiom.to_ascii_lowercase().as_str() {
        "prf" if inst.inner.mode() == Mode::Unconstrained => Axiom::PrfUnconstrained,
        "prf" => Axiom::PrfDiscrete,
        other => other.parse().map_err(py_err)?,
    };
    let i = &inst.inner;
    let report = match axiom {
        Axiom::Up => check_up(i, &x),
        Axiom::Pf => check_pf(i, &x),
        Axiom::Core => check_core(i, &x),
        Axiom::PrfUnconstrained => check_prf_unconstrained(i, &x, method),
        Axiom::PrfDiscrete => check_prf_discrete(i, &x, method),
        Axiom::Prf2 => check_prf2(i, &x),
        Axiom::Prf3 => check_prf3(i, &x),
    }
    .map_err(py_err)?;
    Ok(Report { inner: report })
}

#[pyfunction]
#[pyo3(signature = (inst, seed = 0))]
fn kmeanspp(inst: &Instance, seed: u64) -> PyResult<Vec<usize>> {
    let x = baselines::kmeanspp(&inst.inner, seed).map_err(py_err)?;
    Ok(x.selected().to_vec())
}

/// Returns `(selected, underfilled, padded)`.
#[pyfunction]
#[pyo3(signature = (inst, pad = false))]
fn greedy_capture(inst: &Instance, pad: bool) -> PyResult<(Vec<usize>, bool, bool)> {
    let g = baselines::greedy_capture(&inst.inner, pad).map_err(py_err)?;
    Ok((g.outcome.selected().to_vec(), g.underfilled, g.padded))
}

#[pyfunction]
#[pyo3(signature = (inst, selected, j, squared = true))]
fn msd_j(inst: &Instance, selected: Vec<usize>, j: usize, squared: bool) -> PyResult<f64> {
    let x = inst.outcome(selected)?;
    prfair_core::evaluation::msd_j(&inst.inner, &x, j, squared).map_err(py_err)
}

#[pymodule]
fn prfair(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<Selection>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(select_prf_centers, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(kmeanspp, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_capture, m)?)?;
    m.add_function(wrap_pyfunction!(msd_j, m)?)?;
    Ok(())
}
