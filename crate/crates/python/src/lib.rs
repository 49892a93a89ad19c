//! Python bindings. Every call goes through the same code path as the
//! `netrep` binary and returns the parsed JSON document.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use netrep_core::cli;

fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn dumps(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()
}

/// Runs the command line with `args` (without the program name) and
/// returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("netrep".to_string()).chain(args);
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

/// Like `run`, but parses stdout and raises `ValueError` on exit code 2.
fn call<'py>(py: Python<'py>, args: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let (code, out, err) = run(args);
    if code == 2 {
        return Err(PyValueError::new_err(err.trim().to_string()));
    }
    let doc = loads(py, &out)?;
    doc.cast::<PyDict>()?.set_item("exit_code", code)?;
    Ok(doc)
}

fn args(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Checks a lattice property (`submodular`, `bisubmodular`, `ksubmodular(k)`, ...).
#[pyfunction]
fn check<'py>(py: Python<'py>, property: &str, function: &str) -> PyResult<Bound<'py, PyAny>> {
    call(py, args(&["check", "--property", property, "--function", function]))
}

/// Decides submodular representability. `function` and `encoding` are file
/// paths or `builtin:NAME`.
#[pyfunction]
#[pyo3(signature = (function, encoding, full_dom = false))]
fn decide<'py>(py: Python<'py>, function: &str, encoding: &str, full_dom: bool) -> PyResult<Bound<'py, PyAny>> {
    let mut a = args(&["decide", "--function", function, "--encoding", encoding]);
    if full_dom {
        a.push("--full-dom".into());
    }
    call(py, a)
}

#[pyfunction]
#[pyo3(signature = (omega, function = None))]
fn wpol_refute<'py>(py: Python<'py>, omega: &str, function: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let mut a = args(&["wpol-refute", "--omega", omega]);
    if let Some(f) = function {
        a.extend(args(&["--function", f]));
    }
    call(py, a)
}

#[pyfunction]
#[pyo3(signature = (n, encoding = "builtin:pair", symmetry = None))]
fn rays<'py>(py: Python<'py>, n: usize, encoding: &str, symmetry: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let n = n.to_string();
    let mut a = args(&["rays", "--n", &n, "--encoding", encoding]);
    if let Some(s) = symmetry {
        a.extend(args(&["--symmetry", s]));
    }
    call(py, a)
}

/// Re-checks a document returned by `decide`, `wpol_refute` or the
/// `decompose` subcommand.
#[pyfunction]
fn verify_certificate<'py>(py: Python<'py>, doc: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let value: serde_json::Value =
        serde_json::from_str(&dumps(doc)?).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let (report, _) = cli::verify_certificate(&value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    loads(py, &report.to_string())
}

#[pymodule]
fn netrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(wpol_refute, m)?)?;
    m.add_function(wrap_pyfunction!(rays, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    Ok(())
}
