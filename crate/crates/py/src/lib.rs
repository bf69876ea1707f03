//! Python bindings: run a benchmark from a JSON config, read back nodal
//! values, convergence tables and the property suite.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dgweno::harness::{self, RunConfig, RunReport, Scheme};
use dgweno::problems::riemann::{Primitive, RiemannSolution};
use dgweno::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Config(_) | Error::UnknownBenchmark(_) | Error::Unsupported(_) => PyValueError::new_err(err.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_config(config: &str) -> PyResult<RunConfig> {
    RunConfig::from_json(config).map_err(to_py)
}

fn report_dict<'py>(py: Python<'py>, r: &RunReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("problem", &r.problem)?;
    d.set_item("scheme", &r.scheme)?;
    d.set_item("p", r.p)?;
    d.set_item("mesh", r.mesh.clone())?;
    d.set_item("time", r.time)?;
    d.set_item("t_final", r.t_final)?;
    d.set_item("steps", r.steps)?;
    d.set_item("wall_time", r.wall_time)?;
    d.set_item("ranges", r.ranges.iter().map(|v| (v[0], v[1])).collect::<Vec<_>>())?;
    d.set_item("l1_error", r.l1_error.clone())?;
    d.set_item("failure", r.failure.as_ref().map(|f| f.message.clone()))?;
    Ok(d)
}

/// Runs the JSON config to its final time and returns the metrics as a dict.
/// A numerical breakdown is reported under "failure", not raised.
#[pyfunction]
fn run(py: Python<'_>, config: &str) -> PyResult<Py<PyDict>> {
    let c = parse_config(config)?;
    let r = py.detach(|| harness::run_simulation(&c)).map_err(to_py)?;
    Ok(report_dict(py, &r)?.unbind())
}

/// Runs the config and returns (x, values) at every Lagrange node of a 1D
/// mesh, values being one list per component.
#[pyfunction]
fn nodal_solution(py: Python<'_>, config: &str) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let c = parse_config(config)?;
    let sim = py
        .detach(|| {
            let mut sim = harness::Simulation::from_config(&c)?;
            sim.run().map_err(|f| Error::InvalidState { cell: f.cell, reason: f.message })?;
            Ok::<_, Error>(sim)
        })
        .map_err(to_py)?;
    if sim.disc.mesh.dim != 1 {
        return Err(PyValueError::new_err("nodal_solution supports 1D problems"));
    }
    let f = &sim.field;
    let mut xs = Vec::new();
    let mut vals = vec![Vec::new(); f.n_vars];
    for e in 0..f.n_cells {
        for (j, xi) in sim.disc.elem.nodes.iter().enumerate() {
            xs.push(sim.disc.mesh.map_to_physical(e, xi)[0]);
            for (c, v) in vals.iter_mut().enumerate() {
                v.push(f.component(e, c)[j]);
            }
        }
    }
    Ok((xs, vals))
}

/// Convergence table as a list of (scheme, cells, error, eoc or None).
#[pyfunction]
#[pyo3(signature = (config, meshes, schemes = vec!["dg".to_string(), "lo".to_string(), "weno".to_string()]))]
fn converge(
    py: Python<'_>,
    config: &str,
    meshes: Vec<usize>,
    schemes: Vec<String>,
) -> PyResult<Vec<(String, usize, f64, Option<f64>)>> {
    let c = parse_config(config)?;
    let schemes = schemes
        .iter()
        .map(|s| s.parse::<Scheme>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    let rows = py.detach(|| harness::convergence_study(&c, &meshes, &schemes)).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.scheme, r.cells, r.error, r.eoc)).collect())
}

/// EOCs between consecutive (h, error) pairs.
#[pyfunction]
fn eoc(h: Vec<f64>, errors: Vec<f64>) -> PyResult<Vec<f64>> {
    if h.len() != errors.len() {
        return Err(PyValueError::new_err("h and errors differ in length"));
    }
    let data: Vec<(f64, f64)> = h.into_iter().zip(errors).collect();
    harness::compute_eoc(&data).map_err(to_py)
}

/// Exact Euler Riemann solution (rho, u, p) sampled at x/t = xi.
#[pyfunction]
#[pyo3(signature = (left, right, xi, gamma = 1.4))]
fn riemann(left: (f64, f64, f64), right: (f64, f64, f64), xi: f64, gamma: f64) -> PyResult<(f64, f64, f64)> {
    let l = Primitive::new(left.0, left.1, left.2);
    let r = Primitive::new(right.0, right.1, right.2);
    let sol = RiemannSolution::solve(l, r, gamma).map_err(to_py)?;
    let s = sol.sample(xi);
    Ok((s.rho, s.u, s.p))
}

/// Property suite; returns (passed, TAP text).
#[pyfunction]
#[pyo3(signature = (filter = None))]
fn run_suite(py: Python<'_>, filter: Option<String>) -> (bool, String) {
    let report = py.detach(|| dgweno::suite::run_suite_with(filter.as_deref(), None));
    (report.passed(), report.tap())
}

#[pyfunction]
fn benchmarks() -> Vec<&'static str> {
    dgweno::problems::BENCHMARKS.to_vec()
}

#[pymodule]
fn dgweno_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(nodal_solution, m)?)?;
    m.add_function(wrap_pyfunction!(converge, m)?)?;
    m.add_function(wrap_pyfunction!(eoc, m)?)?;
    m.add_function(wrap_pyfunction!(riemann, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(benchmarks, m)?)?;
    Ok(())
}
