//! Primitive plane geometry shared by every other module: points, point sets,
//! circles, arcs, arc cycles and the predicates that operate on them.
//!
//! All tolerances live in a single [`Tolerance`] value that is passed
//! explicitly; nothing in this crate reads a global threshold.

mod arc;
mod cycle;

pub use arc::{circle_circle_intersections, point_to_arc_distance, Arc, Circle, CircleIntersection};
pub use cycle::{
    check_closed, cycle_is_simple, point_in_cycle, ray_crossings, ArcCycle, CycleArc, CycleKind, Side,
    SimplicityReport, SimplicityViolation, MAX_RAY_ATTEMPTS,
};

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point set is empty")]
    EmptySet,
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("circles coincide; they have infinitely many common points")]
    IdenticalCircles,
    #[error("arc chain does not close: arc {index} ends at {end} but the next arc starts at {next_start}")]
    NotClosed {
        index: usize,
        end: Point,
        next_start: Point,
    },
    #[error("arc chain is empty")]
    EmptyChain,
    #[error("ray casting stayed degenerate after {attempts} attempts at {point}")]
    RobustnessExhausted { point: Point, attempts: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
}

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    /// Lexicographic order by `(x, y)` using IEEE total ordering.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x.total_cmp(&other.x).then_with(|| self.y.total_cmp(&other.y))
    }

    pub fn polar(center: Point, radius: f64, angle: f64) -> Point {
        Point::new(center.x + radius * angle.cos(), center.y + radius * angle.sin())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<BBox> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = BBox { min: first, max: first };
        for p in it {
            bb.include(p);
        }
        Some(bb)
    }

    pub fn include(&mut self, p: &Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, other: &BBox) -> BBox {
        let mut out = *self;
        out.include(&other.min);
        out.include(&other.max);
        out
    }

    pub fn expanded(&self, margin: f64) -> BBox {
        BBox {
            min: Point::new(self.min.x - margin, self.min.y - margin),
            max: Point::new(self.max.x + margin, self.max.y + margin),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// A finite, nonempty set of distinct points kept in lexicographic order.
///
/// Exact duplicates are removed on construction; points that are merely
/// close to each other are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = Point>) -> Result<Self, GeometryError> {
        Self::with_duplicate_count(points).map(|(set, _)| set)
    }

    /// Like [`PointSet::new`], also returning how many exact duplicates were dropped.
    pub fn with_duplicate_count(points: impl IntoIterator<Item = Point>) -> Result<(Self, usize), GeometryError> {
        let mut points: Vec<Point> = points.into_iter().collect();
        if points.is_empty() {
            return Err(GeometryError::EmptySet);
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        // -0.0 and 0.0 are the same point
        for p in &mut points {
            p.x += 0.0;
            p.y += 0.0;
        }
        points.sort_by(Point::lex_cmp);
        let before = points.len();
        points.dedup_by(|a, b| a.x == b.x && a.y == b.y);
        let dropped = before - points.len();
        Ok((Self { points }, dropped))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn get(&self, index: usize) -> Option<&Point> {
        self.points.get(index)
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(&self.points).expect("point set is nonempty")
    }

    /// Euclidean distance from `p` to the nearest point of the set.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.points.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// The largest coordinate magnitude, used to scale absolute tolerances.
    pub fn magnitude(&self) -> f64 {
        self.points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Tolerance policy shared by every predicate.
///
/// `join` welds arc endpoints, `isect` decides when two intersection points
/// (or a near-tangency) coincide, and `dist` is the relative slack of
/// distance assertions. `seed` drives the ray directions of
/// [`point_in_cycle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub join: f64,
    pub isect: f64,
    pub dist: f64,
    pub seed: u64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            join: 1e-12,
            isect: 1e-12,
            dist: 1e-9,
            seed: 0,
        }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<(), GeometryError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.join) || !positive(self.isect) || !positive(self.dist) {
            return Err(GeometryError::InvalidTolerance("all tolerances must be positive"));
        }
        if self.isect > self.join {
            return Err(GeometryError::InvalidTolerance("isect must not exceed join"));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Absolute weld tolerance for geometry of the given magnitude.
    pub(crate) fn weld(&self, magnitude: f64) -> f64 {
        self.join * (1.0 + magnitude)
    }

    /// Slack for `|distance - radius|` style assertions at radius `r`.
    pub fn dist_slack(&self, r: f64) -> f64 {
        self.dist * (1.0 + r)
    }
}

/// Maps any finite angle to `[0, 2π)`.
pub fn canonical_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Counterclockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_delta(from: f64, to: f64) -> f64 {
    canonical_angle(to - from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_sorts_and_dedups() {
        let (set, dropped) = PointSet::with_duplicate_count(vec![
            Point::new(1.0, 0.0),
            Point::new(0.0, 2.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, -1.0),
        ])
        .unwrap();
        assert_eq!(dropped, 1);
        assert_eq!(
            set.points(),
            &[Point::new(0.0, -1.0), Point::new(0.0, 2.0), Point::new(1.0, 0.0)]
        );
    }

    #[test]
    fn near_duplicates_are_kept() {
        let set = PointSet::new(vec![Point::new(0.0, 0.0), Point::new(1e-15, 0.0)]).unwrap();
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn signed_zero_is_one_point() {
        let set = PointSet::new(vec![Point::new(0.0, 0.0), Point::new(-0.0, 0.0)]).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn point_set_rejects_empty_and_non_finite() {
        assert_eq!(PointSet::new(vec![]), Err(GeometryError::EmptySet));
        assert_eq!(
            PointSet::new(vec![Point::new(0.0, 0.0), Point::new(f64::NAN, 1.0)]),
            Err(GeometryError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::default().validate().is_ok());
        let bad = Tolerance {
            isect: 1e-6,
            join: 1e-9,
            ..Tolerance::default()
        };
        assert!(bad.validate().is_err());
        let zero = Tolerance {
            dist: 0.0,
            ..Tolerance::default()
        };
        assert!(zero.validate().is_err());
    }

    #[test]
    fn canonical_angles() {
        assert_eq!(canonical_angle(0.0), 0.0);
        assert!((canonical_angle(-std::f64::consts::FRAC_PI_2) - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert!(canonical_angle(TAU) < 1e-15);
        assert!(canonical_angle(-1e-20) < TAU);
    }
}
