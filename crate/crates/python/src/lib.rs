//! Python bindings: `Curve` and `Correspondence` classes plus the exact and
//! approximate distance and decision functions.
//!
//! Any function taking a curve also accepts a plain list of points. Vertex
//! and parameter indices are 1-based, as in the Rust crate.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use frechet_core::approxdecide::{approx_decide_run, DecisionOutcome};
use frechet_core::freespace::{self, DEFAULT_REL_TOL};
use frechet_core::optimize;
use frechet_core::{Chain, FrechetError};

fn err(e: FrechetError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A polygonal chain in R^d.
#[pyclass(frozen, from_py_object, module = "frechet_approx")]
#[derive(Clone)]
pub struct Curve {
    inner: Chain,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(points: Vec<Vec<f64>>) -> PyResult<Curve> {
        Chain::new(points).map(|inner| Curve { inner }).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Curve(len={}, dim={})", self.inner.len(), self.inner.dim())
    }
}

/// A monotone polyline of breakpoints `(s, t)` in the parameter rectangle.
#[pyclass(frozen, skip_from_py_object, module = "frechet_approx")]
#[derive(Clone)]
pub struct Correspondence {
    inner: freespace::Correspondence,
}

#[pymethods]
impl Correspondence {
    #[new]
    fn new(breakpoints: Vec<(f64, f64)>) -> PyResult<Correspondence> {
        freespace::Correspondence::new(breakpoints)
            .map(|inner| Correspondence { inner })
            .map_err(err)
    }

    #[getter]
    fn breakpoints(&self) -> Vec<(f64, f64)> {
        self.inner.breakpoints().to_vec()
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    fn reversed(&self) -> Correspondence {
        Correspondence { inner: self.inner.reversed() }
    }

    fn __len__(&self) -> usize {
        self.inner.breakpoints().len()
    }

    fn __repr__(&self) -> String {
        format!("Correspondence({} breakpoints)", self.inner.breakpoints().len())
    }
}

#[derive(FromPyObject)]
enum CurveArg {
    Curve(Curve),
    Points(Vec<Vec<f64>>),
}

impl CurveArg {
    fn chain(self) -> PyResult<Chain> {
        match self {
            CurveArg::Curve(c) => Ok(c.inner),
            CurveArg::Points(pts) => Chain::new(pts).map_err(err),
        }
    }
}

fn pair(p: CurveArg, q: CurveArg) -> PyResult<(Chain, Chain)> {
    let (p, q) = (p.chain()?, q.chain()?);
    if p.dim() != q.dim() {
        return Err(PyValueError::new_err(format!("dimensions differ: {} and {}", p.dim(), q.dim())));
    }
    Ok((p, q))
}

fn check_delta(delta: f64) -> PyResult<()> {
    if delta >= 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(PyValueError::new_err(format!("delta must be finite and non-negative, got {delta}")))
    }
}

fn wrap(c: freespace::Correspondence) -> Correspondence {
    Correspondence { inner: c }
}

fn default_alpha(p: &Chain, q: &Chain, alpha: Option<f64>) -> f64 {
    alpha.unwrap_or_else(|| (p.len().max(q.len()) as f64).sqrt())
}

/// Exact Fréchet distance by bisection; returns `(value, correspondence)`.
#[pyfunction]
#[pyo3(signature = (p, q, rel_tol = DEFAULT_REL_TOL))]
fn exact_frechet(py: Python<'_>, p: CurveArg, q: CurveArg, rel_tol: f64) -> PyResult<(f64, Correspondence)> {
    let (p, q) = pair(p, q)?;
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(PyValueError::new_err("rel_tol must lie in (0, 1)"));
    }
    let (v, c) = py.detach(|| freespace::exact_frechet_witness(&p, &q, rel_tol));
    Ok((v, wrap(c)))
}

/// Exact decision `FD <= delta`; returns `(reachable, correspondence or None)`.
#[pyfunction]
fn exact_decide(py: Python<'_>, p: CurveArg, q: CurveArg, delta: f64) -> PyResult<(bool, Option<Correspondence>)> {
    let (p, q) = pair(p, q)?;
    check_delta(delta)?;
    let d = py.detach(|| freespace::exact_decide(&p, &q, delta, true));
    Ok((d.reachable, d.correspondence.filter(|_| d.reachable).map(wrap)))
}

/// Approximate decision; returns `(success, measured cost or None,
/// correspondence or None)`. `alpha` defaults to `sqrt(n)`.
#[pyfunction]
#[pyo3(signature = (p, q, delta, alpha = None))]
fn approx_decide(
    py: Python<'_>,
    p: CurveArg,
    q: CurveArg,
    delta: f64,
    alpha: Option<f64>,
) -> PyResult<(bool, Option<f64>, Option<Correspondence>)> {
    let (p, q) = pair(p, q)?;
    check_delta(delta)?;
    let alpha = default_alpha(&p, &q, alpha);
    let run = py.detach(|| approx_decide_run(&p, &q, delta, alpha));
    Ok(match run.outcome {
        DecisionOutcome::Success { correspondence, measured_cost } => (true, Some(measured_cost), Some(wrap(correspondence))),
        DecisionOutcome::Failure => (false, None, None),
    })
}

/// `O(alpha)`-approximate distance; returns `(value, correspondence)`.
#[pyfunction]
#[pyo3(signature = (p, q, alpha = None, eps = 1.0))]
fn approx_frechet(py: Python<'_>, p: CurveArg, q: CurveArg, alpha: Option<f64>, eps: f64) -> PyResult<(f64, Correspondence)> {
    let (p, q) = pair(p, q)?;
    let alpha = default_alpha(&p, &q, alpha);
    let (v, c) = py.detach(|| optimize::approx_frechet(&p, &q, alpha, eps)).map_err(err)?;
    Ok((v, wrap(c)))
}

/// Largest distance between points matched by `corr`.
#[pyfunction]
fn correspondence_cost(p: CurveArg, q: CurveArg, corr: &Correspondence) -> PyResult<f64> {
    let (p, q) = pair(p, q)?;
    freespace::correspondence_cost(&p, &q, &corr.inner).map_err(err)
}

/// Greedy `nu`-simplification; returns `(simplified curve, marked indices)`.
#[pyfunction]
fn nu_simplify(r: CurveArg, nu: f64) -> PyResult<(Curve, Vec<usize>)> {
    if !(nu > 0.0) {
        return Err(PyValueError::new_err("nu must be positive"));
    }
    let res = optimize::nu_simplify(&r.chain()?, nu);
    Ok((Curve { inner: res.simplified }, res.marks))
}

/// Sorted distinct distances between all vertex pairs of both curves.
#[pyfunction]
fn candidate_distances(p: CurveArg, q: CurveArg) -> PyResult<Vec<f64>> {
    let (p, q) = pair(p, q)?;
    Ok(optimize::candidate_distances(&p, &q).values)
}

#[pymodule]
fn frechet_approx(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_class::<Correspondence>()?;
    m.add_function(wrap_pyfunction!(exact_frechet, m)?)?;
    m.add_function(wrap_pyfunction!(exact_decide, m)?)?;
    m.add_function(wrap_pyfunction!(approx_decide, m)?)?;
    m.add_function(wrap_pyfunction!(approx_frechet, m)?)?;
    m.add_function(wrap_pyfunction!(correspondence_cost, m)?)?;
    m.add_function(wrap_pyfunction!(nu_simplify, m)?)?;
    m.add_function(wrap_pyfunction!(candidate_distances, m)?)?;
    Ok(())
}
