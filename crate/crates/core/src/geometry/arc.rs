use std::f64::consts::{FRAC_PI_2, TAU};

use super::{canonical_angle, ccw_delta, BBox, GeometryError, Point, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }
}

/// Common points of two circles, sorted lexicographically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleIntersection {
    Disjoint,
    Tangent(Point),
    Crossing(Point, Point),
}

impl CircleIntersection {
    pub fn points(&self) -> Vec<Point> {
        match *self {
            CircleIntersection::Disjoint => vec![],
            CircleIntersection::Tangent(p) => vec![p],
            CircleIntersection::Crossing(p, q) => vec![p, q],
        }
    }

    pub fn is_tangent(&self) -> bool {
        matches!(self, CircleIntersection::Tangent(_))
    }
}

/// All common points of two circles.
///
/// A distance within `tol.isect` of `r1 + r2` or `|r1 - r2|` is reported as
/// a tangency with a single point.
pub fn circle_circle_intersections(
    c1: &Circle,
    c2: &Circle,
    tol: &Tolerance,
) -> Result<CircleIntersection, GeometryError> {
    for r in [c1.radius, c2.radius] {
        if !(r.is_finite() && r > 0.0) {
            return Err(GeometryError::InvalidRadius(r));
        }
    }
    let (r1, r2) = (c1.radius, c2.radius);
    let dx = c2.center.x - c1.center.x;
    let dy = c2.center.y - c1.center.y;
    let d = (dx * dx + dy * dy).sqrt();
    if d <= tol.isect {
        if (r1 - r2).abs() <= tol.isect {
            return Err(GeometryError::IdenticalCircles);
        }
        return Ok(CircleIntersection::Disjoint);
    }
    let (ux, uy) = (dx / d, dy / d);
    if (d - (r1 + r2)).abs() <= tol.isect {
        // split the residual gap evenly so the point is symmetric in the two circles
        let along = r1 + 0.5 * (d - r1 - r2);
        return Ok(CircleIntersection::Tangent(Point::new(
            c1.center.x + ux * along,
            c1.center.y + uy * along,
        )));
    }
    if (d - (r1 - r2).abs()).abs() <= tol.isect {
        let s = if r1 >= r2 { r1 } else { -r1 };
        return Ok(CircleIntersection::Tangent(Point::new(
            c1.center.x + ux * s,
            c1.center.y + uy * s,
        )));
    }
    if d > r1 + r2 || d < (r1 - r2).abs() {
        return Ok(CircleIntersection::Disjoint);
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let mx = c1.center.x + a * ux;
    let my = c1.center.y + a * uy;
    let p = Point::new(mx - h * uy, my + h * ux);
    let q = Point::new(mx + h * uy, my - h * ux);
    Ok(if p.lex_cmp(&q).is_le() {
        CircleIntersection::Crossing(p, q)
    } else {
        CircleIntersection::Crossing(q, p)
    })
}

/// A counterclockwise arc of a circle centred at a point of a generating set.
///
/// Angles are canonical in `[0, 2π)`. A full circle has `start_angle ==
/// end_angle` and the `full_circle` flag set. Endpoints are stored as given
/// to the constructor so that arcs built from shared intersection points
/// weld exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    center_index: usize,
    center: Point,
    radius: f64,
    start_angle: f64,
    end_angle: f64,
    full_circle: bool,
    start: Point,
    end: Point,
}

fn check_radius(radius: f64) -> Result<(), GeometryError> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::InvalidRadius(radius))
    }
}

fn angle_of(center: Point, p: Point) -> f64 {
    canonical_angle((p.y - center.y).atan2(p.x - center.x))
}

impl Arc {
    /// Full circle starting (and ending) at angle 0.
    pub fn full(center_index: usize, center: Point, radius: f64) -> Result<Self, GeometryError> {
        check_radius(radius)?;
        let p = Point::new(center.x + radius, center.y);
        Ok(Self {
            center_index,
            center,
            radius,
            start_angle: 0.0,
            end_angle: 0.0,
            full_circle: true,
            start: p,
            end: p,
        })
    }

    /// Full circle that starts and ends at `at`, a point on the circle.
    pub fn full_from(center_index: usize, center: Point, radius: f64, at: Point) -> Result<Self, GeometryError> {
        check_radius(radius)?;
        let angle = angle_of(center, at);
        Ok(Self {
            center_index,
            center,
            radius,
            start_angle: angle,
            end_angle: angle,
            full_circle: true,
            start: at,
            end: at,
        })
    }

    /// Counterclockwise arc from `start` to `end`, both on the circle.
    ///
    /// If the two points have the same canonical angle the arc is a full circle.
    pub fn between(
        center_index: usize,
        center: Point,
        radius: f64,
        start: Point,
        end: Point,
    ) -> Result<Self, GeometryError> {
        check_radius(radius)?;
        let start_angle = angle_of(center, start);
        let end_angle = angle_of(center, end);
        Ok(Self {
            center_index,
            center,
            radius,
            start_angle,
            end_angle,
            full_circle: start_angle == end_angle,
            start,
            end,
        })
    }

    /// Counterclockwise arc between two angles (any finite values).
    pub fn from_angles(
        center_index: usize,
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    ) -> Result<Self, GeometryError> {
        check_radius(radius)?;
        let start_angle = canonical_angle(start_angle);
        let end_angle = canonical_angle(end_angle);
        Ok(Self {
            center_index,
            center,
            radius,
            start_angle,
            end_angle,
            full_circle: start_angle == end_angle,
            start: Point::polar(center, radius, start_angle),
            end: Point::polar(center, radius, end_angle),
        })
    }

    pub fn center_index(&self) -> usize {
        self.center_index
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn circle(&self) -> Circle {
        Circle::new(self.center, self.radius)
    }

    pub fn start_angle(&self) -> f64 {
        self.start_angle
    }

    pub fn end_angle(&self) -> f64 {
        self.end_angle
    }

    pub fn is_full_circle(&self) -> bool {
        self.full_circle
    }

    pub fn start(&self) -> Point {
        self.start
    }

    pub fn end(&self) -> Point {
        self.end
    }

    /// Angular measure, in `(0, 2π]`.
    pub fn sweep(&self) -> f64 {
        if self.full_circle {
            TAU
        } else {
            ccw_delta(self.start_angle, self.end_angle)
        }
    }

    pub fn length(&self) -> f64 {
        self.sweep() * self.radius
    }

    /// Whether the direction `angle` (from the centre) falls on the arc,
    /// allowing `slack` radians beyond either end.
    pub fn contains_angle(&self, angle: f64, slack: f64) -> bool {
        if self.full_circle {
            return true;
        }
        let from_start = ccw_delta(self.start_angle, angle);
        from_start <= self.sweep() + slack || TAU - from_start <= slack
    }

    pub fn point_at_angle(&self, angle: f64) -> Point {
        Point::polar(self.center, self.radius, angle)
    }

    /// Point at fraction `t ∈ [0, 1]` of the sweep; the exact stored
    /// endpoints are returned for `t = 0` and `t = 1`.
    pub fn point_at_fraction(&self, t: f64) -> Point {
        if t == 0.0 {
            return self.start;
        }
        if t == 1.0 {
            return self.end;
        }
        self.point_at_angle(self.start_angle + t * self.sweep())
    }

    pub fn midpoint(&self) -> Point {
        self.point_at_fraction(0.5)
    }

    /// `n` points spread evenly along the arc, endpoints included.
    /// For a full circle the start point is not repeated.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        match n {
            0 => vec![],
            1 => vec![self.midpoint()],
            _ if self.full_circle => (0..n).map(|k| self.point_at_fraction(k as f64 / n as f64)).collect(),
            _ => (0..n)
                .map(|k| self.point_at_fraction(k as f64 / (n - 1) as f64))
                .collect(),
        }
    }

    /// Unit tangent in the direction of travel (counterclockwise) at `angle`.
    pub fn tangent_at(&self, angle: f64) -> Point {
        Point::new(-angle.sin(), angle.cos())
    }

    /// Twice the signed area swept by the arc relative to the origin
    /// (the contribution of this arc to `∮ x dy - y dx`).
    pub(crate) fn green_term(&self) -> f64 {
        let (c, r) = (self.center, self.radius);
        let t0 = self.start_angle;
        let t1 = t0 + self.sweep();
        r * c.x * (t1.sin() - t0.sin()) - r * c.y * (t1.cos() - t0.cos()) + r * r * (t1 - t0)
    }

    pub fn bbox(&self) -> BBox {
        let mut bb = BBox::of_points(&[self.start, self.end]).expect("two points");
        for k in 0..4 {
            let a = k as f64 * FRAC_PI_2;
            if self.contains_angle(a, 0.0) {
                bb.include(&self.point_at_angle(a));
            }
        }
        bb
    }

    /// Translate and rotate by `angle` about the origin, then scale by `scale`.
    pub fn transformed(&self, angle: f64, scale: f64, offset: Point) -> Arc {
        let map = |p: Point| {
            let (s, c) = angle.sin_cos();
            Point::new(
                scale * (c * p.x - s * p.y) + offset.x,
                scale * (s * p.x + c * p.y) + offset.y,
            )
        };
        let start_angle = canonical_angle(self.start_angle + angle);
        let end_angle = if self.full_circle {
            start_angle
        } else {
            canonical_angle(self.end_angle + angle)
        };
        Arc {
            center_index: self.center_index,
            center: map(self.center),
            radius: self.radius * scale,
            start_angle,
            end_angle,
            full_circle: self.full_circle,
            start: map(self.start),
            end: map(self.end),
        }
    }
}

/// Exact Euclidean distance from `p` to the point set of `arc`.
pub fn point_to_arc_distance(p: &Point, arc: &Arc) -> f64 {
    let d = p.distance(&arc.center);
    if d == 0.0 {
        return arc.radius;
    }
    let angle = angle_of(arc.center, *p);
    if arc.contains_angle(angle, 0.0) {
        (d - arc.radius).abs()
    } else {
        p.distance(&arc.start).min(p.distance(&arc.end))
    }
}
