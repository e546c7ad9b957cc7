//! Python extension module exposing the exact-rational signature kernel:
//! tensor series, piecewise linear paths, barycenters, and recovery.
//! Rationals cross the boundary as "p/q" strings so nothing is rounded.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

use ::sigbary::barycenter::{bary, bary_residual, GroupSample};
use ::sigbary::congruence_recovery as recovery;
use ::sigbary::signatures::{sig_axis, sig_pwl, signed_area, Composition, PwlPath as CorePath};
use ::sigbary::tensor_algebra::{
    exp as core_exp, group_inverse, is_grouplike, lie_algebra_dim, log as core_log, mul,
    TensorSeq,
};
use ::sigbary::verify::run_suite;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_ratio(text: &str) -> PyResult<BigRational> {
    let t = text.trim();
    if let Some((_, den)) = t.split_once('/') {
        if den.trim().parse::<BigInt>().map(|d| d.is_zero()).unwrap_or(false) {
            return Err(value_error(format!("invalid rational '{text}'")));
        }
    }
    t.parse::<BigRational>()
        .map_err(|_| value_error(format!("invalid rational '{text}'")))
}

fn ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn parse_json(text: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(text).map_err(value_error)
}

/// A truncated tensor series with exact rational coefficients.
#[pyclass(name = "TensorSeries", from_py_object)]
#[derive(Clone)]
struct PyTensorSeries {
    inner: TensorSeq,
}

#[pymethods]
impl PyTensorSeries {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = TensorSeq::from_json(&parse_json(text)?).map_err(value_error)?;
        Ok(PyTensorSeries { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn level(&self) -> usize {
        self.inner.level()
    }

    /// Coefficients of one graded component as "p/q" strings, in row-major
    /// word order.
    fn component(&self, level: usize) -> PyResult<Vec<String>> {
        if level > self.inner.level() {
            return Err(value_error(format!(
                "component {level} out of range 0..={}",
                self.inner.level()
            )));
        }
        Ok(self.inner.component(level).iter().map(ratio_string).collect())
    }

    fn is_grouplike(&self) -> bool {
        is_grouplike(&self.inner)
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(PyTensorSeries { inner: group_inverse(&self.inner).map_err(value_error)? })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyTensorSeries { inner: mul(&self.inner, &other.inner).map_err(value_error)? })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// A piecewise linear path, stored as its matrix of segment increments.
#[pyclass(name = "PwlPath", from_py_object)]
#[derive(Clone)]
struct PyPwlPath {
    inner: CorePath,
}

#[pymethods]
impl PyPwlPath {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = CorePath::from_json(&parse_json(text)?).map_err(value_error)?;
        Ok(PyPwlPath { inner })
    }

    /// Builds a path from segment increments, one list of "p/q" coordinate
    /// strings per segment.
    #[staticmethod]
    fn from_increments(segments: Vec<Vec<String>>) -> PyResult<Self> {
        let first = segments.first().ok_or_else(|| value_error("path needs a segment"))?;
        let dim = first.len();
        let mut m = recovery::RationalMatrix::zeros(dim, segments.len());
        for (j, segment) in segments.iter().enumerate() {
            if segment.len() != dim {
                return Err(value_error(format!(
                    "segment {j} has {} coordinates, expected {dim}",
                    segment.len()
                )));
            }
            for (i, text) in segment.iter().enumerate() {
                m.set(i, j, parse_ratio(text)?);
            }
        }
        Ok(PyPwlPath { inner: CorePath::new(m).map_err(value_error)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn segments(&self) -> usize {
        self.inner.segments()
    }

    fn signature(&self, level: usize) -> PyResult<PyTensorSeries> {
        Ok(PyTensorSeries { inner: sig_pwl(&self.inner, level).map_err(value_error)? })
    }

    /// Signed area enclosed against the chord, for 2-dimensional paths.
    fn signed_area(&self) -> PyResult<String> {
        Ok(ratio_string(&signed_area(&self.inner).map_err(value_error)?))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("PwlPath(dim={}, segments={})", self.inner.dim(), self.inner.segments())
    }
}

/// Dimension of the free nilpotent Lie algebra with `d` letters at level `k`.
#[pyfunction]
fn dim(d: usize, k: usize) -> PyResult<BigUint> {
    if d == 0 || k == 0 {
        return Err(value_error("d and k must be at least 1"));
    }
    Ok(lie_algebra_dim(d, k))
}

/// Signature of the m-segment axis path.
#[pyfunction]
fn axis_signature(m: usize, level: usize) -> PyResult<PyTensorSeries> {
    Ok(PyTensorSeries { inner: sig_axis(m, level).map_err(value_error)? })
}

/// Group barycenter of the given group-like series.
#[pyfunction]
fn barycenter(members: Vec<PyTensorSeries>) -> PyResult<PyTensorSeries> {
    let sample = GroupSample::new(members.into_iter().map(|m| m.inner).collect())
        .map_err(value_error)?;
    let center = bary(&sample);
    debug_assert!(bary_residual(&center, &sample).map(|r| r.is_zero()).unwrap_or(false));
    Ok(PyTensorSeries { inner: center })
}

/// Exponential of a series with zero constant term.
#[pyfunction]
fn exp(x: &PyTensorSeries) -> PyResult<PyTensorSeries> {
    Ok(PyTensorSeries { inner: core_exp(&x.inner).map_err(value_error)? })
}

/// Logarithm of a series with unit constant term.
#[pyfunction]
fn log(x: &PyTensorSeries) -> PyResult<PyTensorSeries> {
    Ok(PyTensorSeries { inner: core_log(&x.inner).map_err(value_error)? })
}

/// Recovers one path whose level-2 signature equals the barycenter of the
/// inputs' signatures.
#[pyfunction]
#[pyo3(signature = (paths, level = 2))]
fn recover(paths: Vec<PyPwlPath>, level: usize) -> PyResult<PyPwlPath> {
    let inner: Vec<CorePath> = paths.into_iter().map(|p| p.inner).collect();
    Ok(PyPwlPath { inner: recovery::recover_k2(&inner, level).map_err(value_error)? })
}

/// Number of segments needed to represent an axis-sample barycenter in
/// dimension `d`.
#[pyfunction]
fn recovery_order(d: usize, alpha: Vec<usize>) -> PyResult<usize> {
    let alpha = Composition::new(alpha).map_err(value_error)?;
    recovery::recovery_order(d, &alpha).map_err(value_error)
}

/// Simultaneous congruence normal form data for a composition, as JSON.
#[pyfunction]
fn normal_form_json(alpha: Vec<usize>) -> PyResult<String> {
    let alpha = Composition::new(alpha).map_err(value_error)?;
    let nf = recovery::w_alpha_nf(&alpha);
    let rows = |m: &recovery::RationalMatrix| -> Vec<Vec<String>> {
        m.to_rows().iter().map(|row| row.iter().map(ratio_string).collect()).collect()
    };
    Ok(json!({
        "alpha": alpha.parts(),
        "transform": rows(&nf.congruence.transform),
        "normal_form": rows(&nf.congruence.normal_form),
        "rank": nf.congruence.rank,
        "vector_image": nf.vector_image.iter().map(ratio_string).collect::<Vec<_>>(),
    })
    .to_string())
}

/// Checks the explicit level-3 recovery family at the given rational
/// parameter ("p/q").
#[pyfunction]
fn verify_recovery_k3(omega: &str) -> PyResult<bool> {
    recovery::verify_recovery_k3(&parse_ratio(omega)?).map_err(value_error)
}

/// Runs the library's full self-check suite; returns (name, passed, detail)
/// triples.
#[pyfunction]
fn run_checks() -> Vec<(String, bool, String)> {
    run_suite(None)
        .into_iter()
        .map(|o| (o.name.to_string(), o.passed, o.detail))
        .collect()
}

#[pymodule]
fn sigbary(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensorSeries>()?;
    m.add_class::<PyPwlPath>()?;
    m.add_function(wrap_pyfunction!(dim, m)?)?;
    m.add_function(wrap_pyfunction!(axis_signature, m)?)?;
    m.add_function(wrap_pyfunction!(barycenter, m)?)?;
    m.add_function(wrap_pyfunction!(exp, m)?)?;
    m.add_function(wrap_pyfunction!(log, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(recovery_order, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify_recovery_k3, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
