//! Python bindings. Exact values cross the boundary as `fractions.Fraction`; reports come
//! back as plain dicts built from the library's JSON output.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

use mixvol_core::criteria::{self, MonotonicityVerdict};
use mixvol_core::lattice::PrimitiveVector;
use mixvol_core::linalg::RatMatrix;
use mixvol_core::mixed::{self, Method};
use mixvol_core::polytope;
use mixvol_core::rational::{fmt_rat, parse_rat, Int, Point, Rat};
use mixvol_core::{io, system, Error};

fn to_py_err(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rat_from_py(obj: &Bound<'_, PyAny>) -> PyResult<Rat> {
    if let Ok(s) = obj.extract::<String>() {
        return parse_rat(&s).map_err(to_py_err);
    }
    if obj.hasattr("numerator")? && obj.hasattr("denominator")? {
        let p: Int = obj.getattr("numerator")?.str()?.to_str()?.parse().map_err(|_| PyValueError::new_err("bad numerator"))?;
        let q: Int = obj.getattr("denominator")?.str()?.to_str()?.parse().map_err(|_| PyValueError::new_err("bad denominator"))?;
        if q == Int::from(0) {
            return Err(PyValueError::new_err("zero denominator"));
        }
        return Ok(Rat::new(p, q));
    }
    Err(PyValueError::new_err("coordinates must be int, Fraction or 'p/q' strings"))
}

fn rat_to_py<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_rat(r),))
}

fn points_from_py(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Point>> {
    obj.try_iter()?
        .map(|p| p?.try_iter()?.map(|c| rat_from_py(&c?)).collect::<PyResult<Point>>())
        .collect()
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A convex polytope with exact rational coordinates.
#[pyclass(name = "Polytope", module = "mixvol", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    inner: polytope::Polytope,
}

#[pymethods]
impl PyPolytope {
    /// Convex hull of the given points.
    #[new]
    fn new(points: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = polytope::Polytope::from_points(points_from_py(points)?).map_err(to_py_err)?;
        Ok(PyPolytope { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v = io::parse_json(text).map_err(to_py_err)?;
        Ok(PyPolytope {
            inner: io::polytope_from_json(&v).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    /// Vertices in sorted order, as lists of `Fraction`.
    #[getter]
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .inner
            .sorted_vertices()
            .iter()
            .map(|v| v.iter().map(|c| rat_to_py(py, c)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn is_lattice(&self) -> bool {
        self.inner.is_lattice()
    }

    fn volume<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        rat_to_py(py, &self.inner.euclidean_volume())
    }

    /// `dim! · Vol`.
    fn normalized_volume<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        rat_to_py(py, &self.inner.normalized_volume())
    }

    fn support_value<'py>(&self, py: Python<'py>, u: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let u: Point = u.try_iter()?.map(|c| rat_from_py(&c?)).collect::<PyResult<_>>()?;
        if u.len() != self.inner.ambient_dim() {
            return Err(PyValueError::new_err("direction has the wrong length"));
        }
        rat_to_py(py, &self.inner.support_value(&u))
    }

    fn contains(&self, other: &PyPolytope) -> bool {
        self.inner.contains(&other.inner)
    }

    fn __add__(&self, other: &PyPolytope) -> PyResult<PyPolytope> {
        Ok(PyPolytope {
            inner: self.inner.minkowski_sum(&other.inner).map_err(to_py_err)?,
        })
    }

    fn to_json(&self) -> String {
        io::polytope_to_json(&self.inner).to_string()
    }

    fn __eq__(&self, other: &PyPolytope) -> bool {
        self.inner.sorted_vertices() == other.inner.sorted_vertices()
    }

    fn __repr__(&self) -> String {
        let vs: Vec<String> = self
            .inner
            .sorted_vertices()
            .iter()
            .map(|v| format!("({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("Polytope([{}])", vs.join(", "))
    }
}

fn unwrap_all(ps: Vec<PyRef<'_, PyPolytope>>) -> Vec<polytope::Polytope> {
    ps.iter().map(|p| p.inner.clone()).collect()
}

/// Mixed volume report: `{"normalized", "euclidean", "runs", "agree", "skipped"}`.
#[pyfunction]
#[pyo3(signature = (polytopes, method = "all", seed = 0))]
fn mixed_volume(py: Python<'_>, polytopes: Vec<PyRef<'_, PyPolytope>>, method: &str, seed: u64) -> PyResult<Py<PyAny>> {
    let method: Method = method.parse().map_err(to_py_err)?;
    let r = mixed::mixed_volume(&unwrap_all(polytopes), method, seed).map_err(to_py_err)?;
    json_to_py(py, &r.to_json())
}

/// `n! · V(P₁,…,Pₙ)` as a `Fraction`, cross-checked by every applicable method.
#[pyfunction]
fn normalized_mixed_volume<'py>(py: Python<'py>, polytopes: Vec<PyRef<'py, PyPolytope>>) -> PyResult<Bound<'py, PyAny>> {
    let v = mixed::normalized_mixed_volume(&unwrap_all(polytopes)).map_err(to_py_err)?;
    rat_to_py(py, &v)
}

#[pyfunction]
fn is_essential(polytopes: Vec<PyRef<'_, PyPolytope>>) -> PyResult<bool> {
    criteria::is_essential(&unwrap_all(polytopes)).map_err(to_py_err)
}

/// Strict monotonicity verdict with witness. Give either `outer` (a list) or `equal` (one
/// polytope `Q` used for every member).
#[pyfunction]
#[pyo3(signature = (inner, outer = None, equal = None, compare = false))]
fn strict_monotonicity(
    py: Python<'_>,
    inner: Vec<PyRef<'_, PyPolytope>>,
    outer: Option<Vec<PyRef<'_, PyPolytope>>>,
    equal: Option<PyRef<'_, PyPolytope>>,
    compare: bool,
) -> PyResult<Py<PyAny>> {
    let ps = unwrap_all(inner);
    let (verdict, qs): (MonotonicityVerdict, Vec<polytope::Polytope>) = match (outer, equal) {
        (Some(o), None) => {
            let qs = unwrap_all(o);
            (criteria::strict_monotonicity_general(&ps, &qs).map_err(to_py_err)?, qs)
        }
        (None, Some(q)) => (
            criteria::strict_monotonicity_equal(&ps, &q.inner).map_err(to_py_err)?,
            vec![q.inner.clone(); ps.len()],
        ),
        _ => return Err(PyValueError::new_err("give exactly one of outer= or equal=")),
    };
    let verdict = if compare { verdict.with_volumes(&ps, &qs).map_err(to_py_err)? } else { verdict };
    json_to_py(py, &verdict.to_json())
}

/// Best certified lower bound on `n!Vol(Q) − n!V(P₁,…,Pₙ)` for the facet with normal `v`.
#[pyfunction]
fn deficit_bound(py: Python<'_>, inner: Vec<PyRef<'_, PyPolytope>>, q: PyRef<'_, PyPolytope>, v: Vec<i64>) -> PyResult<Py<PyAny>> {
    let v = PrimitiveVector::from_i64(&v).map_err(to_py_err)?;
    let best = criteria::best_deficit_bound(&unwrap_all(inner), &q.inner, &v).map_err(to_py_err)?;
    match best {
        Some(b) => json_to_py(py, &b.to_json()),
        None => Ok(py.None()),
    }
}

/// A sparse polynomial system `C · x^A = 0`.
#[pyclass(name = "SparseSystem", module = "mixvol", frozen)]
struct PySparseSystem {
    inner: system::SparseSystem,
}

#[pymethods]
impl PySparseSystem {
    /// Parses polynomial text (or matrix JSON when it starts with `{`).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySparseSystem {
            inner: io::read_system(text).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn from_matrix(points: Vec<Vec<i64>>, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        let rows = points_from_py(c)?;
        let m = RatMatrix::from_rows(rows).map_err(to_py_err)?;
        Ok(PySparseSystem {
            inner: system::SparseSystem::from_matrix(points, m).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.variables().to_vec()
    }

    #[getter]
    fn points(&self) -> Vec<Vec<i64>> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn coefficients<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self
            .inner
            .coefficients()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|c| rat_to_py(py, c)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    /// 0-based column indices of each individual support.
    fn supports(&self) -> Vec<Vec<usize>> {
        self.inner.supports()
    }

    fn newton_polytopes(&self) -> PyResult<Vec<PyPolytope>> {
        Ok(self.inner.newton_polytopes().map_err(to_py_err)?.into_iter().map(|inner| PyPolytope { inner }).collect())
    }

    fn support_polytope(&self) -> PyResult<PyPolytope> {
        Ok(PyPolytope {
            inner: self.inner.support_polytope().map_err(to_py_err)?,
        })
    }

    fn bkk_bound(&self) -> PyResult<String> {
        Ok(self.inner.bkk_bound().map_err(to_py_err)?.to_string())
    }

    fn volume_bound(&self) -> PyResult<String> {
        Ok(self.inner.volume_bound().map_err(to_py_err)?.to_string())
    }

    fn ber_check(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &system::ber_check(&self.inner).map_err(to_py_err)?.to_json())
    }

    fn cramer_check(&self) -> PyResult<bool> {
        system::cramer_check(&self.inner).map_err(to_py_err)
    }

    #[pyo3(signature = (seed = 0))]
    fn analyze(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        json_to_py(py, &system::analyze_system(&self.inner, seed).map_err(to_py_err)?.to_json())
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("SparseSystem(n={}, points={})", self.inner.n(), self.inner.points().len())
    }
}

#[pymodule]
fn mixvol(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PySparseSystem>()?;
    m.add_function(wrap_pyfunction!(mixed_volume, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_mixed_volume, m)?)?;
    m.add_function(wrap_pyfunction!(is_essential, m)?)?;
    m.add_function(wrap_pyfunction!(strict_monotonicity, m)?)?;
    m.add_function(wrap_pyfunction!(deficit_bound, m)?)?;
    Ok(())
}
