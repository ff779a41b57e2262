//! Python bindings. Results cross the boundary as JSON text, which the
//! `cuspforge` Python package decodes; the Rust side stays free of Python
//! object construction.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use cuspforge::error::Error;
use cuspforge::io::Document;
use cuspforge::moment_angle::{cusp_census, Colouring};
use cuspforge::pipeline::{run_pipeline, PipelineConfig};
use cuspforge::zoo::gosset;

create_exception!(cuspforge_py, CuspforgeError, PyException);

fn to_py(e: Error) -> PyErr {
    CuspforgeError::new_err((e.code(), e.to_string(), e.exit_code()))
}

/// Face lattice of the Gosset polytope `G^n` as a JSON document.
#[pyfunction]
fn gosset_lattice(n: usize) -> PyResult<String> {
    let g = gosset(n).map_err(to_py)?;
    let lattice = g.lattice().map_err(to_py)?;
    serde_json::to_string(&Document::from(&lattice)).map_err(|e| to_py(e.into()))
}

/// Vertex and facet counts of `G^n` without building its lattice.
#[pyfunction]
fn gosset_counts(n: usize) -> PyResult<(usize, usize)> {
    let g = gosset(n).map_err(to_py)?;
    Ok((g.vertex_count(), g.facet_count()))
}

/// Exact cusp census of `P^n`; `colours` is `"distinct"` or a comma
/// separated list of bitmasks.
#[pyfunction]
#[pyo3(signature = (n, colours = "distinct"))]
fn census(n: usize, colours: &str) -> PyResult<String> {
    let p = gosset(n).and_then(|g| g.ideal_polytope()).map_err(to_py)?;
    let c = Colouring::parse(colours, p.facet_count()).map_err(to_py)?;
    let census = cusp_census(&p, &c).map_err(to_py)?;
    Ok(census.to_json().to_string())
}

/// Runs the pipeline for `n` and returns its JSON record.
#[pyfunction]
#[pyo3(signature = (n, out_dir = None, budget = None, census_only = false))]
fn pipeline(py: Python<'_>, n: usize, out_dir: Option<PathBuf>, budget: Option<u64>, census_only: bool) -> PyResult<String> {
    let mut cfg = PipelineConfig::preset(n);
    cfg.out_dir = out_dir;
    cfg.budget = budget;
    cfg.census_only |= census_only;
    let run = py.detach(|| run_pipeline(&cfg));
    match run {
        Ok(run) => Ok(run.to_json().to_string()),
        Err(e) => Err(CuspforgeError::new_err((e.error.code(), e.to_string(), e.exit_code()))),
    }
}

/// Runs a named self-check suite.
#[pyfunction]
fn verify(py: Python<'_>, suite: &str) -> PyResult<String> {
    let report = py.detach(|| cuspforge::verify::verify(suite)).map_err(to_py)?;
    Ok(report.to_json().to_string())
}

#[pymodule]
fn cuspforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CuspforgeError", m.py().get_type::<CuspforgeError>())?;
    m.add("SUITES", cuspforge::verify::SUITES.to_vec())?;
    m.add_function(wrap_pyfunction!(gosset_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(gosset_counts, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
