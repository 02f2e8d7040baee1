//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use guardwalk_core::geometry::{Point, PolygonWithHoles};
use guardwalk_core::sim::{SimConfig, SimOutcome};
use guardwalk_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(m) => PyRuntimeError::new_err(m),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn pts(v: Vec<(i64, i64)>) -> Vec<Point> {
    v.into_iter().map(Point::from).collect()
}

/// A polygon with holes on the integer grid.
#[pyclass(name = "Polygon", frozen)]
#[derive(Clone)]
struct PyPolygon {
    inner: PolygonWithHoles,
}

#[pymethods]
impl PyPolygon {
    #[new]
    #[pyo3(signature = (outer, holes = Vec::new()))]
    fn new(outer: Vec<(i64, i64)>, holes: Vec<Vec<(i64, i64)>>) -> PyResult<Self> {
        let inner = PolygonWithHoles::new(pts(outer), holes.into_iter().map(pts).collect()).map_err(py_err)?;
        Ok(PyPolygon { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyPolygon { inner: guardwalk_core::io::parse_polygon(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        guardwalk_core::io::polygon_to_string(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn h(&self) -> usize {
        self.inner.h()
    }

    #[getter]
    fn vertices(&self) -> Vec<(i64, i64)> {
        self.inner.vertices().iter().map(|p| (p.x, p.y)).collect()
    }

    fn triangle_count(&self) -> usize {
        self.inner.triangle_count()
    }

    fn guard_bound(&self) -> usize {
        self.inner.guard_bound()
    }

    fn contains(&self, x: i64, y: i64) -> bool {
        self.inner.contains(Point::new(x, y))
    }

    fn sees(&self, a: (i64, i64), b: (i64, i64)) -> bool {
        self.inner.sees(a.into(), b.into())
    }

    fn __repr__(&self) -> String {
        format!("Polygon(n={}, h={})", self.inner.n(), self.inner.h())
    }
}

#[pyfunction]
fn comb(teeth: usize) -> PyResult<PyPolygon> {
    Ok(PyPolygon { inner: guardwalk_core::gen::comb(teeth).map_err(py_err)? })
}

#[pyfunction]
fn ring_of_holes(holes: usize) -> PyResult<PyPolygon> {
    Ok(PyPolygon { inner: guardwalk_core::gen::ring_of_holes(holes).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (n, holes = 0, seed = 0))]
fn random_polygon(n: usize, holes: usize, seed: u64) -> PyResult<PyPolygon> {
    Ok(PyPolygon { inner: guardwalk_core::gen::random_polygon(n, holes, seed).map_err(py_err)? })
}

/// Triangles of the triangulation as vertex index triples.
#[pyfunction]
fn triangulate(poly: &PyPolygon) -> PyResult<Vec<(usize, usize, usize)>> {
    let t = guardwalk_core::triangulation::triangulate(&poly.inner).map_err(py_err)?;
    Ok(t.triangles.iter().map(|t| (t.v[0], t.v[1], t.v[2])).collect())
}

/// Vertex indices of a cooperative guard set.
#[pyfunction]
fn cooperative_guards(poly: &PyPolygon) -> PyResult<Vec<usize>> {
    Ok(guardwalk_core::guards::cooperative_guards(&poly.inner).map_err(py_err)?.guards)
}

#[pyfunction]
#[pyo3(signature = (poly, guards, samples = 10_000, seed = 0))]
fn verify<'py>(
    py: Python<'py>,
    poly: &PyPolygon,
    guards: Vec<(i64, i64)>,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = guardwalk_core::verify::verify_guards(&poly.inner, &pts(guards), samples, seed).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("coverage", r.coverage.fraction())?;
    d.set_item("connected", r.connectivity.connected)?;
    d.set_item("bound", r.bound)?;
    d.set_item("bound_ok", r.bound_ok)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

fn outcome<'py>(py: Python<'py>, poly: &PolygonWithHoles, o: SimOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("rounds", o.trace.total_rounds)?;
    d.set_item("broadcasts", o.trace.total_broadcasts)?;
    d.set_item("peak_mem", o.trace.max_follower_peak())?;
    d.set_item("guards", o.guards.guards.clone())?;
    d.set_item("guard_points", o.guards.points(poly).iter().map(|p| (p.x, p.y)).collect::<Vec<_>>())?;
    d.set_item("trace", o.trace.to_text())?;
    Ok(d)
}

/// Runs a depth-perception simulation, `mode` being "warmup" or
/// "small-memory".
#[pyfunction]
#[pyo3(signature = (poly, mode = "warmup", agents = None, start = None, seed = 0))]
fn simulate<'py>(
    py: Python<'py>,
    poly: &PyPolygon,
    mode: &str,
    agents: Option<usize>,
    start: Option<(i64, i64)>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let p = &poly.inner;
    let start = start.map_or(p.vertex(0), Point::from);
    let o = match mode {
        "warmup" => {
            let cfg = SimConfig { agents: agents.unwrap_or(p.guard_bound().max(1)), start, seed };
            guardwalk_core::sim::simulate_warmup(p, &cfg)
        }
        "small-memory" => {
            let cfg = SimConfig { agents: agents.unwrap_or(p.triangle_count().div_ceil(2)), start, seed };
            guardwalk_core::sim::simulate_small_memory(p, &cfg)
        }
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    }
    .map_err(py_err)?;
    guardwalk_core::sim::model_check(&o.trace, p).map_err(py_err)?;
    outcome(py, p, o)
}

#[pyfunction]
fn proximity_explore<'py>(py: Python<'py>, poly: &PyPolygon) -> PyResult<Bound<'py, PyDict>> {
    let r = guardwalk_core::proximity::proximity_explore(&poly.inner).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("triangles", r.triangulation.triangles.iter().map(|t| (t.v[0], t.v[1], t.v[2])).collect::<Vec<_>>())?;
    d.set_item("guards", r.guards.guards.clone())?;
    d.set_item("estimated_rounds", r.cost.total_estimated_rounds)?;
    d.set_item("validations", r.cost.validations)?;
    d.set_item("validation_steps", r.cost.validation_steps)?;
    Ok(d)
}

/// Vertex indices and agent ids seen from `observer`, in view order.
#[pyfunction]
#[pyo3(signature = (poly, observer, agents = Vec::new()))]
fn look_view(
    poly: &PyPolygon,
    observer: (i64, i64),
    agents: Vec<(u64, (i64, i64))>,
) -> PyResult<(Vec<usize>, Vec<u64>)> {
    let agents: Vec<(u64, Point)> = agents.into_iter().map(|(id, p)| (id, p.into())).collect();
    let v = guardwalk_core::proximity::look_view(&poly.inner, observer.into(), &agents).map_err(py_err)?;
    Ok((v.vertex_seq, v.agent_seq))
}

#[pymodule]
fn guardwalk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolygon>()?;
    m.add_function(wrap_pyfunction!(comb, m)?)?;
    m.add_function(wrap_pyfunction!(ring_of_holes, m)?)?;
    m.add_function(wrap_pyfunction!(random_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(triangulate, m)?)?;
    m.add_function(wrap_pyfunction!(cooperative_guards, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(proximity_explore, m)?)?;
    m.add_function(wrap_pyfunction!(look_view, m)?)?;
    Ok(())
}
