//! Python bindings for the `equidistant` crate.
//!
//! Points cross the boundary as `(x, y)` tuples. Curves are returned as
//! [`Curve`] objects; geometric obstructions raise `ObstructionError`, bad
//! input raises `ValueError`.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use equidistant::chained::{self, ChainError};
use equidistant::geometry::{self, ArcCycle, CycleKind, GeometryError, Point, PointSet, Side, Tolerance};
use equidistant::io::{emit_svg, CurveDocument, SvgLayer};
use equidistant::offset::{self, OffsetError};
use equidistant::separation::{self, SeparationError};

create_exception!(equidistant_py, ObstructionError, pyo3::exceptions::PyException);

fn point_set(points: Vec<(f64, f64)>) -> PyResult<PointSet> {
    PointSet::new(points.into_iter().map(|(x, y)| Point::new(x, y))).map_err(geometry_err)
}

fn geometry_err(e: GeometryError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chain_err(e: ChainError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn offset_err(e: OffsetError) -> PyErr {
    match e {
        OffsetError::NotInComplement { .. } => ObstructionError::new_err(e.to_string()),
        OffsetError::InvalidEpsilon(_) | OffsetError::Geometry(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn separation_err(e: SeparationError) -> PyErr {
    if e.is_hypothesis_failure() {
        ObstructionError::new_err(e.to_string())
    } else {
        match e {
            SeparationError::Offset(inner) => offset_err(inner),
            SeparationError::Chain(inner) => chain_err(inner),
            SeparationError::Geometry(inner) => geometry_err(inner),
            other => PyRuntimeError::new_err(other.to_string()),
        }
    }
}

fn xy(p: Point) -> (f64, f64) {
    (p.x, p.y)
}

/// A simple closed curve made of circular arcs.
#[pyclass(frozen, module = "equidistant_py")]
struct Curve {
    cycle: ArcCycle,
}

#[pymethods]
impl Curve {
    /// `"outer"` or `"hole"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.cycle.kind() {
            CycleKind::Outer => "outer",
            CycleKind::Hole => "hole",
        }
    }

    /// Arcs in travel order as dicts with centre, radius, angles and direction.
    fn arcs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.cycle
            .arcs()
            .iter()
            .map(|ca| {
                let d = PyDict::new(py);
                d.set_item("center", xy(ca.arc.center()))?;
                d.set_item("radius", ca.arc.radius())?;
                d.set_item("start_angle", ca.arc.start_angle())?;
                d.set_item("end_angle", ca.arc.end_angle())?;
                d.set_item("ccw", !ca.reversed)?;
                d.set_item("full_circle", ca.arc.is_full_circle())?;
                d.set_item("start", xy(ca.from()))?;
                d.set_item("end", xy(ca.to()))?;
                Ok(d)
            })
            .collect()
    }

    /// `per_arc` evenly spaced points of every arc.
    #[pyo3(signature = (per_arc = 64))]
    fn sample(&self, per_arc: usize) -> Vec<(f64, f64)> {
        self.cycle.sample(per_arc).into_iter().map(xy).collect()
    }

    fn distance_to(&self, point: (f64, f64)) -> f64 {
        self.cycle.distance_to(&Point::new(point.0, point.1))
    }

    /// `"inside"`, `"outside"` or `"on_curve"`.
    #[pyo3(signature = (point, seed = 0))]
    fn side(&self, point: (f64, f64), seed: u64) -> PyResult<&'static str> {
        let tol = Tolerance::default().with_seed(seed);
        let side = geometry::point_in_cycle(&Point::new(point.0, point.1), &self.cycle, &tol).map_err(geometry_err)?;
        Ok(match side {
            Side::Inside => "inside",
            Side::Outside => "outside",
            Side::OnCurve => "on_curve",
        })
    }

    fn is_simple(&self) -> PyResult<bool> {
        let report = geometry::cycle_is_simple(self.cycle.arcs(), &Tolerance::default()).map_err(geometry_err)?;
        Ok(report.is_simple())
    }

    fn length(&self) -> f64 {
        self.cycle.length()
    }

    /// The curve as a one-curve JSON document.
    #[pyo3(signature = (role = "curve"))]
    fn to_json(&self, role: &str) -> String {
        let mut doc = CurveDocument::new(role, 0);
        doc.push(&self.cycle, role);
        doc.to_json()
    }

    fn __len__(&self) -> usize {
        self.cycle.len()
    }

    fn __repr__(&self) -> String {
        format!("Curve(kind={:?}, arcs={})", self.kind(), self.cycle.len())
    }
}

fn curve(cycle: ArcCycle) -> Curve {
    Curve { cycle }
}

#[pyfunction]
fn set_distance(a: Vec<(f64, f64)>, b: Vec<(f64, f64)>) -> PyResult<f64> {
    Ok(chained::set_distance(&point_set(a)?, &point_set(b)?))
}

/// Blocks of points joined by steps strictly shorter than `delta`.
#[pyfunction]
fn chained_components(points: Vec<(f64, f64)>, delta: f64) -> PyResult<Vec<Vec<(f64, f64)>>> {
    let partition = chained::chained_components(&point_set(points)?, delta).map_err(chain_err)?;
    Ok(partition
        .blocks
        .iter()
        .map(|b| b.iter().map(|p| xy(*p)).collect())
        .collect())
}

#[pyfunction]
fn is_chained(points: Vec<(f64, f64)>, delta: f64) -> PyResult<bool> {
    chained::is_chained(&point_set(points)?, delta).map_err(chain_err)
}

/// Hypothesis report as a dict: `rho_AB`, `a_chained`, `b_chained`,
/// `violations` (messages) and `holds`.
#[pyfunction]
fn check_hypotheses<'py>(
    py: Python<'py>,
    a: Vec<(f64, f64)>,
    b: Vec<(f64, f64)>,
    epsilon: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = chained::check_hypotheses(&point_set(a)?, &point_set(b)?, epsilon).map_err(chain_err)?;
    let d = PyDict::new(py);
    d.set_item("rho_AB", report.rho_ab)?;
    d.set_item("a_chained", report.a_chained)?;
    d.set_item("b_chained", report.b_chained)?;
    d.set_item(
        "violations",
        report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
    )?;
    d.set_item("holds", report.holds())?;
    Ok(d)
}

/// Every cycle of the ε-boundary, outer cycles and holes alike.
#[pyfunction]
fn offset_boundary(points: Vec<(f64, f64)>, epsilon: f64) -> PyResult<Vec<Curve>> {
    let ob = offset::offset_boundary(&point_set(points)?, epsilon, &Tolerance::default()).map_err(offset_err)?;
    Ok(ob.cycles().iter().cloned().map(curve).collect())
}

#[pyfunction]
fn outer_curve(points: Vec<(f64, f64)>, epsilon: f64) -> PyResult<Curve> {
    separation::outer_curve(&point_set(points)?, epsilon, &Tolerance::default())
        .map(curve)
        .map_err(separation_err)
}

/// Curve in the ε-boundary of `a` separating `a` from `b`.
#[pyfunction]
#[pyo3(signature = (a, b, epsilon, force = false))]
fn separating_curve(a: Vec<(f64, f64)>, b: Vec<(f64, f64)>, epsilon: f64, force: bool) -> PyResult<Curve> {
    separation::separating_curve(&point_set(a)?, &point_set(b)?, epsilon, &Tolerance::default(), force)
        .map(|r| curve(r.curve))
        .map_err(separation_err)
}

/// Separating curve at half the distance between the sets; returns the
/// curve and `rho_AB`.
#[pyfunction]
#[pyo3(signature = (a, b, force = false))]
fn midway_curve(a: Vec<(f64, f64)>, b: Vec<(f64, f64)>, force: bool) -> PyResult<(Curve, f64)> {
    let m = separation::midway_curve(&point_set(a)?, &point_set(b)?, &Tolerance::default(), force)
        .map_err(separation_err)?;
    Ok((curve(m.separation.curve), m.rho_ab))
}

#[pyfunction]
fn some_simple_closed_curve(points: Vec<(f64, f64)>, epsilon: f64) -> PyResult<Curve> {
    separation::some_simple_closed_curve(&point_set(points)?, epsilon, &Tolerance::default())
        .map(curve)
        .map_err(separation_err)
}

/// SVG drawing of curves and, optionally, the two point sets.
#[pyfunction]
#[pyo3(signature = (curves, a = None, b = None))]
fn render_svg(
    curves: Vec<PyRef<'_, Curve>>,
    a: Option<Vec<(f64, f64)>>,
    b: Option<Vec<(f64, f64)>>,
) -> PyResult<String> {
    let a = a.map(point_set).transpose()?;
    let b = b.map(point_set).transpose()?;
    let mut layers: Vec<SvgLayer> = curves
        .iter()
        .map(|c| SvgLayer::Curve {
            class: "result",
            curve: &c.cycle,
        })
        .collect();
    if let Some(a) = &a {
        layers.push(SvgLayer::Points { class: "set-a", set: a });
    }
    if let Some(b) = &b {
        layers.push(SvgLayer::Points { class: "set-b", set: b });
    }
    Ok(emit_svg(&layers))
}

#[pymodule]
fn equidistant_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ObstructionError", m.py().get_type::<ObstructionError>())?;
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(set_distance, m)?)?;
    m.add_function(wrap_pyfunction!(chained_components, m)?)?;
    m.add_function(wrap_pyfunction!(is_chained, m)?)?;
    m.add_function(wrap_pyfunction!(check_hypotheses, m)?)?;
    m.add_function(wrap_pyfunction!(offset_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(outer_curve, m)?)?;
    m.add_function(wrap_pyfunction!(separating_curve, m)?)?;
    m.add_function(wrap_pyfunction!(midway_curve, m)?)?;
    m.add_function(wrap_pyfunction!(some_simple_closed_curve, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    Ok(())
}
