//! Python bindings for deltav-core.
//!
//! Exposes the analysis pipeline as simple functions; structured results come
//! back as JSON strings so callers can `json.loads` them.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use deltav_core::error::Error;
use deltav_core::parse::parse_poly;
use deltav_core::polytope::subdivide;
use deltav_core::rat::{rat_str, ExtRat};
use deltav_core::{jumps, report};

fn value_err(e: Error) -> PyErr {
    PyValueError::new_err(format!("{}", e))
}

/// Full analysis report (subdivision, regularity, jumps) as a JSON string.
#[pyfunction]
fn analyze(poly: &str, prime: u64) -> PyResult<String> {
    let rep = report::analyze(poly, prime).map_err(value_err)?;
    serde_json::to_string(&rep).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Jumps with multiplicities, e.g. [("1/6", 1), ("1/2", 1)].
#[pyfunction(name = "jumps")]
fn jumps_py(poly: &str, prime: u64) -> PyResult<Vec<(String, usize)>> {
    let f = parse_poly(poly).map_err(value_err)?;
    let jr = jumps::jumps(&f, prime).map_err(value_err)?;
    Ok(jr
        .jumps
        .iter()
        .map(|(v, m)| (rat_str(v), *m))
        .collect())
}

/// Geometric genus (number of interior lattice points of the Newton polygon).
#[pyfunction]
fn genus(poly: &str, prime: u64) -> PyResult<usize> {
    let f = parse_poly(poly).map_err(value_err)?;
    Ok(jumps::jumps(&f, prime).map_err(value_err)?.genus)
}

/// Smallest e with e * jumps integral.
#[pyfunction]
fn stabilisation_index(poly: &str, prime: u64) -> PyResult<u64> {
    let f = parse_poly(poly).map_err(value_err)?;
    Ok(jumps::jumps(&f, prime).map_err(value_err)?.stabilisation_index)
}

/// Regularity verdict: "pass", "fail" or "indeterminate".
#[pyfunction]
fn regularity(poly: &str, prime: u64) -> PyResult<String> {
    let f = parse_poly(poly).map_err(value_err)?;
    let jr = jumps::jumps(&f, prime).map_err(value_err)?;
    Ok(jr.regularity.overall.as_str().to_string())
}

/// v_can of a linear combination of Baker basis forms, e.g. "2*w(1,1) + w(2,1)".
/// Returns a rational string, or "infinity" for the zero form.
#[pyfunction]
fn vcan(poly: &str, prime: u64, form: &str) -> PyResult<String> {
    let f = parse_poly(poly).map_err(value_err)?;
    let sd = subdivide(&f, prime).map_err(value_err)?;
    let w = report::parse_form(form).map_err(value_err)?;
    Ok(match jumps::vcan_form(&sd, &w).map_err(value_err)? {
        ExtRat::Finite(r) => rat_str(&r),
        ExtRat::Infinity => "infinity".to_string(),
    })
}

/// Tame base-change report (relative jumps, lattice exponents, scaled v) as JSON.
#[pyfunction]
fn base_change(poly: &str, prime: u64, degree: u64) -> PyResult<String> {
    let bc = report::base_change_report(poly, prime, degree).map_err(value_err)?;
    serde_json::to_string(&bc).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Decorated Newton polygon as an SVG document.
#[pyfunction]
fn svg(poly: &str, prime: u64) -> PyResult<String> {
    let f = parse_poly(poly).map_err(value_err)?;
    let sd = subdivide(&f, prime).map_err(value_err)?;
    Ok(report::render_svg(&sd))
}

#[pymodule]
fn deltav_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(jumps_py, m)?)?;
    m.add_function(wrap_pyfunction!(genus, m)?)?;
    m.add_function(wrap_pyfunction!(stabilisation_index, m)?)?;
    m.add_function(wrap_pyfunction!(regularity, m)?)?;
    m.add_function(wrap_pyfunction!(vcan, m)?)?;
    m.add_function(wrap_pyfunction!(base_change, m)?)?;
    m.add_function(wrap_pyfunction!(svg, m)?)?;
    Ok(())
}
