use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::arc::{circle_circle_intersections, point_to_arc_distance, Arc};
use super::{ccw_delta, BBox, GeometryError, Point, Tolerance};

/// Number of ray directions tried before [`point_in_cycle`] gives up.
pub const MAX_RAY_ATTEMPTS: usize = 32;

/// Hits closer than this (in radians) to an arc endpoint make a ray degenerate.
/// Must stay below `Tolerance::dist` so that a point this close to an
/// endpoint is already classified as on the curve.
const ENDPOINT_MARGIN: f64 = 1e-10;
/// Relative discriminant below which a ray is treated as grazing a circle.
const GRAZE_MARGIN: f64 = 1e-12;

/// An arc together with the direction in which a cycle traverses it.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleArc {
    pub arc: Arc,
    pub reversed: bool,
}

impl CycleArc {
    pub fn forward(arc: Arc) -> Self {
        Self { arc, reversed: false }
    }

    pub fn backward(arc: Arc) -> Self {
        Self { arc, reversed: true }
    }

    /// Where the traversal enters this arc.
    pub fn from(&self) -> Point {
        if self.reversed {
            self.arc.end()
        } else {
            self.arc.start()
        }
    }

    /// Where the traversal leaves this arc.
    pub fn to(&self) -> Point {
        if self.reversed {
            self.arc.start()
        } else {
            self.arc.end()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    /// Counterclockwise: the region it encloses lies on its left.
    Outer,
    /// Clockwise.
    Hole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Inside,
    Outside,
    OnCurve,
}

/// A closed chain of arcs.
///
/// Construction checks that consecutive arcs weld; simplicity is a separate
/// question answered by [`cycle_is_simple`]. The chain is rotated so that it
/// starts at its canonical key.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcCycle {
    arcs: Vec<CycleArc>,
    kind: CycleKind,
    canonical_key: Point,
    bbox: BBox,
    signed_area: f64,
}

impl ArcCycle {
    pub fn new(mut arcs: Vec<CycleArc>, tol: &Tolerance) -> Result<Self, GeometryError> {
        check_closed(&arcs, tol)?;
        let canonical_key = if arcs.len() == 1 && arcs[0].arc.is_full_circle() {
            arcs[0].arc.center()
        } else {
            let first = (0..arcs.len())
                .min_by(|&i, &j| arcs[i].from().lex_cmp(&arcs[j].from()))
                .expect("nonempty");
            arcs.rotate_left(first);
            arcs[0].from()
        };
        let bbox = arcs
            .iter()
            .map(|a| a.arc.bbox())
            .reduce(|a, b| a.union(&b))
            .expect("nonempty");
        let signed_area = 0.5
            * arcs
                .iter()
                .map(|a| {
                    let g = a.arc.green_term();
                    if a.reversed {
                        -g
                    } else {
                        g
                    }
                })
                .sum::<f64>();
        let kind = if signed_area > 0.0 {
            CycleKind::Outer
        } else {
            CycleKind::Hole
        };
        Ok(Self {
            arcs,
            kind,
            canonical_key,
            bbox,
            signed_area,
        })
    }

    pub fn arcs(&self) -> &[CycleArc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn kind(&self) -> CycleKind {
        self.kind
    }

    pub fn canonical_key(&self) -> Point {
        self.canonical_key
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    /// Signed enclosed area; positive for counterclockwise cycles.
    pub fn signed_area(&self) -> f64 {
        self.signed_area
    }

    pub fn max_radius(&self) -> f64 {
        self.arcs.iter().map(|a| a.arc.radius()).fold(0.0, f64::max)
    }

    /// Start points of the arcs in traversal order.
    pub fn weld_points(&self) -> Vec<Point> {
        self.arcs.iter().map(CycleArc::from).collect()
    }

    /// `per_arc` samples on every arc, endpoints included.
    pub fn sample(&self, per_arc: usize) -> Vec<Point> {
        self.arcs.iter().flat_map(|a| a.arc.sample(per_arc)).collect()
    }

    /// Exact distance from `p` to the curve.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.arcs
            .iter()
            .map(|a| point_to_arc_distance(p, &a.arc))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn length(&self) -> f64 {
        self.arcs.iter().map(|a| a.arc.length()).sum()
    }

    /// Rotate by `angle` about the origin, scale by `scale`, then translate.
    pub fn transformed(
        &self,
        angle: f64,
        scale: f64,
        offset: Point,
        tol: &Tolerance,
    ) -> Result<ArcCycle, GeometryError> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| CycleArc {
                arc: a.arc.transformed(angle, scale, offset),
                reversed: a.reversed,
            })
            .collect();
        ArcCycle::new(
            arcs,
            &Tolerance {
                join: tol.join * (1.0 + scale),
                ..*tol
            },
        )
    }
}

fn chain_magnitude(arcs: &[CycleArc]) -> f64 {
    arcs.iter()
        .map(|a| {
            let c = a.arc.center();
            c.x.abs().max(c.y.abs()) + a.arc.radius()
        })
        .fold(0.0, f64::max)
}

/// Verify that each arc ends where the next one starts and the last joins the first.
pub fn check_closed(arcs: &[CycleArc], tol: &Tolerance) -> Result<(), GeometryError> {
    if arcs.is_empty() {
        return Err(GeometryError::EmptyChain);
    }
    let weld = tol.weld(chain_magnitude(arcs));
    for (index, arc) in arcs.iter().enumerate() {
        let next = &arcs[(index + 1) % arcs.len()];
        if arc.to().distance(&next.from()) > weld {
            return Err(GeometryError::NotClosed {
                index,
                end: arc.to(),
                next_start: next.from(),
            });
        }
    }
    Ok(())
}

/// A pair of arcs of one chain that meet where they should not.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicityViolation {
    pub first: usize,
    pub second: usize,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimplicityReport {
    pub violations: Vec<SimplicityViolation>,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Decide whether a closed arc chain is a simple closed curve.
///
/// Adjacent arcs may share only their common weld point, non-adjacent arcs
/// nothing at all, and no weld point may be visited twice.
pub fn cycle_is_simple(arcs: &[CycleArc], tol: &Tolerance) -> Result<SimplicityReport, GeometryError> {
    check_closed(arcs, tol)?;
    let n = arcs.len();
    let weld = tol.weld(chain_magnitude(arcs));
    // joint i sits between arc i and arc i + 1
    let joints: Vec<Point> = arcs.iter().map(CycleArc::to).collect();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            if joints[i].distance(&joints[j]) <= weld {
                violations.push(SimplicityViolation {
                    first: (i + 1) % n,
                    second: (j + 1) % n,
                    point: joints[i],
                });
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let mut allowed = Vec::with_capacity(2);
            if (i + 1) % n == j {
                allowed.push(joints[i]);
            }
            if (j + 1) % n == i {
                allowed.push(joints[j]);
            }
            for p in arc_arc_common_points(&arcs[i].arc, &arcs[j].arc, tol, weld) {
                if !allowed.iter().any(|q| q.distance(&p) <= weld) {
                    violations.push(SimplicityViolation {
                        first: i,
                        second: j,
                        point: p,
                    });
                }
            }
        }
    }
    Ok(SimplicityReport { violations })
}

/// Representative common points of two arcs. For cocircular arcs with an
/// overlap of positive length one interior point of the overlap is included.
fn arc_arc_common_points(a: &Arc, b: &Arc, tol: &Tolerance, weld: f64) -> Vec<Point> {
    let slack_a = weld / a.radius();
    let slack_b = weld / b.radius();
    let angle_on = |arc: &Arc, p: &Point| {
        let c = arc.center();
        (p.y - c.y).atan2(p.x - c.x)
    };
    let cocircular = a.center().distance(&b.center()) <= tol.isect && (a.radius() - b.radius()).abs() <= tol.isect;
    if !cocircular {
        return match circle_circle_intersections(&a.circle(), &b.circle(), tol) {
            Ok(hits) => hits
                .points()
                .into_iter()
                .filter(|p| a.contains_angle(angle_on(a, p), slack_a) && b.contains_angle(angle_on(b, p), slack_b))
                .collect(),
            Err(_) => vec![],
        };
    }

    let mut out = Vec::new();
    for p in [a.start(), a.end()] {
        if b.contains_angle(angle_on(b, &p), slack_b) {
            out.push(p);
        }
    }
    for p in [b.start(), b.end()] {
        if a.contains_angle(angle_on(a, &p), slack_a) {
            out.push(p);
        }
    }
    // overlap of [0, wa] with [o, o + wb] taken modulo 2π
    let (wa, wb) = (a.sweep(), b.sweep());
    let o = ccw_delta(a.start_angle(), b.start_angle());
    for shift in [o, o - TAU] {
        let lo = shift.max(0.0);
        let hi = (shift + wb).min(wa);
        if hi - lo > slack_a {
            out.push(a.point_at_angle(a.start_angle() + 0.5 * (lo + hi)));
        }
    }
    out
}

/// Count crossings of the ray `p + t·dir` (`t > 0`) with the arcs.
///
/// Returns `None` when the ray passes too close to an arc endpoint or grazes
/// a circle on an arc, in which case the parity cannot be trusted.
pub fn ray_crossings(p: &Point, arcs: &[CycleArc], dir: Point) -> Option<usize> {
    let mut count = 0;
    for ca in arcs {
        let arc = &ca.arc;
        let (c, r) = (arc.center(), arc.radius());
        let fx = p.x - c.x;
        let fy = p.y - c.y;
        let b = fx * dir.x + fy * dir.y;
        let cc = fx * fx + fy * fy - r * r;
        let disc = b * b - cc;
        let on_arc = |t: f64| -> Option<bool> {
            let hx = fx + t * dir.x;
            let hy = fy + t * dir.y;
            let angle = hy.atan2(hx);
            if arc.contains_angle(angle, ENDPOINT_MARGIN) {
                let from_start = ccw_delta(arc.start_angle(), angle);
                let near_start = from_start <= ENDPOINT_MARGIN || TAU - from_start <= ENDPOINT_MARGIN;
                let near_end = !arc.is_full_circle() && (from_start - arc.sweep()).abs() <= ENDPOINT_MARGIN;
                if near_start || near_end {
                    None
                } else {
                    Some(true)
                }
            } else {
                Some(false)
            }
        };
        if disc < -GRAZE_MARGIN * r * r {
            continue;
        }
        if disc <= GRAZE_MARGIN * r * r {
            let t = -b;
            if t > 0.0 && on_arc(t)? {
                return None;
            }
            continue;
        }
        let s = disc.sqrt();
        for t in [-b - s, -b + s] {
            if t > 0.0 && on_arc(t)? {
                count += 1;
            }
        }
    }
    Some(count)
}

fn random_direction(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let a: i32 = rng.random_range(-1000..=1000);
        let b: i32 = rng.random_range(-1000..=1000);
        if a != 0 || b != 0 {
            let n = ((a * a + b * b) as f64).sqrt();
            return Point::new(a as f64 / n, b as f64 / n);
        }
    }
}

/// Classify `p` against a closed curve: on it (within `tol.dist`), inside
/// the bounded complementary component, or outside.
///
/// Uses crossing parity along rays with seeded random rational slopes,
/// retrying whenever a ray is degenerate.
pub fn point_in_cycle(p: &Point, cycle: &ArcCycle, tol: &Tolerance) -> Result<Side, GeometryError> {
    let slack = tol.dist_slack(cycle.max_radius());
    if !cycle.bbox().expanded(2.0 * slack).contains(p) {
        return Ok(Side::Outside);
    }
    let on_curve = cycle.arcs().iter().any(|a| {
        let slack = tol.dist_slack(a.arc.radius());
        // the distance to the whole circle bounds the distance to the arc from below
        (p.distance(&a.arc.center()) - a.arc.radius()).abs() <= slack && point_to_arc_distance(p, &a.arc) <= slack
    });
    if on_curve {
        return Ok(Side::OnCurve);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed);
    for _ in 0..MAX_RAY_ATTEMPTS {
        let dir = random_direction(&mut rng);
        if let Some(crossings) = ray_crossings(p, cycle.arcs(), dir) {
            return Ok(if crossings % 2 == 1 {
                Side::Inside
            } else {
                Side::Outside
            });
        }
    }
    Err(GeometryError::RobustnessExhausted {
        point: *p,
        attempts: MAX_RAY_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle() -> ArcCycle {
        let arc = Arc::full(0, Point::new(0.0, 0.0), 1.0).unwrap();
        ArcCycle::new(vec![CycleArc::forward(arc)], &Tolerance::default()).unwrap()
    }

    #[test]
    fn classify_against_unit_circle() {
        let c = unit_circle();
        let tol = Tolerance::default();
        assert_eq!(point_in_cycle(&Point::new(0.0, 0.0), &c, &tol), Ok(Side::Inside));
        assert_eq!(point_in_cycle(&Point::new(5.0, 5.0), &c, &tol), Ok(Side::Outside));
        assert_eq!(point_in_cycle(&Point::new(1.0, 0.0), &c, &tol), Ok(Side::OnCurve));
        assert_eq!(point_in_cycle(&Point::new(0.5, 0.5), &c, &tol), Ok(Side::Inside));
        assert_eq!(point_in_cycle(&Point::new(0.9, 0.9), &c, &tol), Ok(Side::Outside));
    }

    #[test]
    fn single_full_circle_is_simple() {
        let c = unit_circle();
        assert!(cycle_is_simple(c.arcs(), &Tolerance::default()).unwrap().is_simple());
        assert_eq!(c.kind(), CycleKind::Outer);
        assert_eq!(c.canonical_key(), Point::new(0.0, 0.0));
        assert!((c.signed_area() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn reversed_circle_is_a_hole() {
        let arc = Arc::full(0, Point::new(0.0, 0.0), 1.0).unwrap();
        let c = ArcCycle::new(vec![CycleArc::backward(arc)], &Tolerance::default()).unwrap();
        assert_eq!(c.kind(), CycleKind::Hole);
    }

    #[test]
    fn open_chain_is_rejected() {
        let arc = Arc::from_angles(0, Point::new(0.0, 0.0), 1.0, 0.0, 1.0).unwrap();
        let err = cycle_is_simple(&[CycleArc::forward(arc)], &Tolerance::default()).unwrap_err();
        assert!(matches!(err, GeometryError::NotClosed { index: 0, .. }));
        assert_eq!(
            cycle_is_simple(&[], &Tolerance::default()),
            Err(GeometryError::EmptyChain)
        );
    }

    #[test]
    fn overlapping_cocircular_arcs_are_not_simple() {
        let c = Point::new(0.0, 0.0);
        let tol = Tolerance::default();
        // goes around one and a half times, welding at angle π
        let a = Arc::from_angles(0, c, 1.0, 0.0, std::f64::consts::PI).unwrap();
        let b = Arc::from_angles(0, c, 1.0, std::f64::consts::PI, 0.0).unwrap();
        let ok = cycle_is_simple(&[CycleArc::forward(a.clone()), CycleArc::forward(b.clone())], &tol).unwrap();
        assert!(ok.is_simple());
        let bad = Arc::from_angles(0, c, 1.0, 0.0, std::f64::consts::PI).unwrap();
        let chain = [
            CycleArc::forward(a),
            CycleArc::forward(b),
            CycleArc::forward(bad),
            CycleArc::forward(Arc::from_angles(0, c, 1.0, std::f64::consts::PI, 0.0).unwrap()),
        ];
        assert!(!cycle_is_simple(&chain, &tol).unwrap().is_simple());
    }

    #[test]
    fn grazing_ray_is_degenerate() {
        let c = unit_circle();
        // horizontal ray from (-5, 1) touches the circle at (0, 1)
        assert_eq!(
            ray_crossings(&Point::new(-5.0, 1.0), c.arcs(), Point::new(1.0, 0.0)),
            None
        );
        assert_eq!(
            ray_crossings(&Point::new(-5.0, 0.0), c.arcs(), Point::new(1.0, 0.0)),
            None
        );
        assert_eq!(
            ray_crossings(&Point::new(-5.0, 0.5), c.arcs(), Point::new(1.0, 0.0)),
            Some(2)
        );
    }
}
