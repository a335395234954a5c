//! Python bindings. Every function takes file paths in the CLI's JSON formats.

use std::path::Path;

use nlie_core::io::{self, Document};
use nlie_core::{deformation, Error};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

type Dims = (usize, usize, usize);

fn dims(r: nlie_core::CohomologyReport) -> Dims {
    (r.dim_z, r.dim_b, r.dim_h)
}

/// Returns `(kind, valid)` for any supported document.
#[pyfunction]
fn validate(path: &str) -> PyResult<(String, bool)> {
    let doc = io::load_document(Path::new(path)).map_err(py_err)?;
    let valid = match &doc {
        Document::Algebra(a) => a.is_valid(),
        Document::Morphism(phi) => phi.is_valid(),
        Document::Deformation(dm) => deformation::validate_deformation(dm).is_valid(),
        Document::Automorphism(_) | Document::Cochain(..) => true,
    };
    Ok((doc.kind().to_string(), valid))
}

/// `(dim Z^r, dim B^r, dim H^r)` of an algebra with adjoint coefficients.
#[pyfunction]
fn cohomology(algebra: &str, degree: usize) -> PyResult<Dims> {
    let a = io::load_algebra(Path::new(algebra)).map_err(py_err)?;
    a.ensure_valid().map_err(py_err)?;
    nlie_core::cohomology_self(&a, degree).map(dims).map_err(py_err)
}

/// Same, with coefficients in the target of a morphism.
#[pyfunction]
fn module_cohomology(morphism: &str, degree: usize) -> PyResult<Dims> {
    let phi = io::load_morphism(Path::new(morphism)).map_err(py_err)?;
    phi.ensure_valid().map_err(py_err)?;
    nlie_core::cohomology_module(&phi, degree).map(dims).map_err(py_err)
}

#[pyfunction]
fn morphism_cohomology(morphism: &str, degree: usize) -> PyResult<Dims> {
    let phi = io::load_morphism(Path::new(morphism)).map_err(py_err)?;
    phi.ensure_valid().map_err(py_err)?;
    nlie_core::morphism_cohomology(&phi, degree).map(dims).map_err(py_err)
}

/// Extends a deformation by one order. Returns the new document as JSON,
/// or `None` when the obstruction class is nonzero.
#[pyfunction]
fn extend(path: &str) -> PyResult<Option<String>> {
    let dm = io::load_deformation(Path::new(path)).map_err(py_err)?;
    match nlie_core::extend_order(&dm).map_err(py_err)? {
        Some((_, next)) => io::to_json_pretty(&io::deformation_to_file(&next))
            .map(Some)
            .map_err(py_err),
        None => Ok(None),
    }
}

#[pymodule]
fn nlie(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(module_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(morphism_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(extend, m)?)?;
    Ok(())
}
