//! Separating curves built from the ε-boundary.
//!
//! The separating curve for `(A, B, ε)` is the boundary of the face of the
//! complement of the closed ε-neighbourhood of `A` that contains `B`. When
//! that face is bounded it is the inside of the curve, otherwise the outside.

use serde::Serialize;
use thiserror::Error;

use crate::chained::{
    chained_components, check_hypotheses, is_chained, set_distance, ChainClause, ChainError, ChainPartition,
    HypothesisReport, SetRole, Violation,
};
use crate::geometry::{point_in_cycle, ArcCycle, GeometryError, PointSet, Side, Tolerance};
use crate::offset::{face_graph, face_of_point, offset_boundary, FaceGraph, OffsetBoundary, OffsetError};

/// Samples per arc used when asserting that a curve lies in an ε-boundary.
pub const SAMPLES_PER_ARC: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparationError {
    #[error("hypothesis violated: {}", list_violations(.0))]
    HypothesisViolation(Box<HypothesisReport>),
    #[error("set is not {threshold}-chained: it has {} chained components", .partition.len())]
    NotChained {
        threshold: f64,
        partition: Box<ChainPartition>,
    },
    #[error("points of B lie in different faces {faces:?}; no curve in the ε-boundary of A separates them from A")]
    BSpansMultipleFaces { faces: Vec<usize> },
    #[error("face {face} is bounded by {cycles} cycles, not by a single simple closed curve")]
    FaceBoundaryNotSimple { face: usize, cycles: usize },
    #[error("curve leaves the ε-boundary: sampled deviation {deviation}")]
    NotInEpsilonBoundary { deviation: f64 },
    #[error("midway distances {achieved_a} and {achieved_b} differ from ρ(A,B)/2 = {target}")]
    MidwayContract {
        achieved_a: f64,
        achieved_b: f64,
        target: f64,
    },
    #[error("ρ(A,B) = 0")]
    ZeroDistance,
    #[error("{0}")]
    Unverified(String),
    #[error(transparent)]
    Offset(#[from] OffsetError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn list_violations(report: &HypothesisReport) -> String {
    report
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl SeparationError {
    /// Whether this is an expected failure of the hypotheses (or of the
    /// geometry they are meant to guarantee) rather than an internal fault.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            SeparationError::HypothesisViolation(_)
                | SeparationError::NotChained { .. }
                | SeparationError::BSpansMultipleFaces { .. }
                | SeparationError::FaceBoundaryNotSimple { .. }
                | SeparationError::ZeroDistance
        ) || matches!(self, SeparationError::Offset(OffsetError::NotInComplement { .. }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationResult {
    pub curve: ArcCycle,
    /// Face of the complement of the closed ε-neighbourhood of A holding B.
    pub face: usize,
    pub face_bounded: bool,
    pub side_of_a: Side,
    pub side_of_b: Side,
    pub epsilon: f64,
    pub dist_curve_a: f64,
    pub dist_curve_b: f64,
    pub hypothesis: HypothesisReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MidwayResult {
    pub separation: SeparationResult,
    pub rho_ab: f64,
    pub achieved_dist_a: f64,
    pub achieved_dist_b: f64,
}

impl MidwayResult {
    pub fn curve(&self) -> &ArcCycle {
        &self.separation.curve
    }
}

/// Per-point classification of two sets against a curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub a_sides: Vec<Side>,
    pub b_sides: Vec<Side>,
    pub dist_curve_a: f64,
    pub dist_curve_b: f64,
    pub failures: Vec<String>,
}

/// Exact distance from a curve to a point set.
pub fn curve_distance(curve: &ArcCycle, set: &PointSet) -> f64 {
    set.iter().map(|p| curve.distance_to(p)).fold(f64::INFINITY, f64::min)
}

/// Largest `|ρ(p, M) − ε|` over `per_arc` samples of every arc.
pub fn boundary_deviation(curve: &ArcCycle, m: &PointSet, epsilon: f64, per_arc: usize) -> f64 {
    curve
        .sample(per_arc)
        .iter()
        .map(|p| (m.distance_to(p) - epsilon).abs())
        .fold(0.0, f64::max)
}

fn assert_in_boundary(curve: &ArcCycle, m: &PointSet, epsilon: f64, tol: &Tolerance) -> Result<(), SeparationError> {
    let deviation = boundary_deviation(curve, m, epsilon, SAMPLES_PER_ARC);
    if deviation > tol.dist_slack(epsilon) {
        return Err(SeparationError::NotInEpsilonBoundary { deviation });
    }
    Ok(())
}

/// The outer boundary cycle of the ε-neighbourhood of a 2ε-chained set.
///
/// Every point of `a` lies inside the returned curve. When the closed
/// neighbourhood has no holes this is its whole boundary.
pub fn outer_curve(a: &PointSet, epsilon: f64, tol: &Tolerance) -> Result<ArcCycle, SeparationError> {
    let partition = chained_components(a, 2.0 * epsilon)?;
    if partition.len() != 1 {
        return Err(SeparationError::NotChained {
            threshold: 2.0 * epsilon,
            partition: Box::new(partition),
        });
    }
    let ob = offset_boundary(a, epsilon, tol)?;
    outer_of(&ob, a, tol)
}

fn outer_of(ob: &OffsetBoundary, a: &PointSet, tol: &Tolerance) -> Result<ArcCycle, SeparationError> {
    let mut outers = ob.outer_cycles();
    let curve = match (outers.next(), outers.next()) {
        (Some((_, c)), None) => c.clone(),
        _ => {
            return Err(SeparationError::Unverified(format!(
                "expected one outer cycle, found {}",
                ob.outer_cycles().count()
            )))
        }
    };
    for p in a {
        if point_in_cycle(p, &curve, tol)? != Side::Inside {
            return Err(SeparationError::Unverified(format!(
                "source point {p} is not inside the outer curve"
            )));
        }
    }
    Ok(curve)
}

/// A simple closed curve in the ε-boundary of `a` separating `a` from `b`.
///
/// With `force` the hypotheses are still reported but not enforced, so the
/// geometric obstruction (if any) surfaces instead.
pub fn separating_curve(
    a: &PointSet,
    b: &PointSet,
    epsilon: f64,
    tol: &Tolerance,
    force: bool,
) -> Result<SeparationResult, SeparationError> {
    let report = check_hypotheses(a, b, epsilon)?;
    if !report.holds() && !force {
        return Err(SeparationError::HypothesisViolation(Box::new(report)));
    }
    let ob = offset_boundary(a, epsilon, tol)?;
    let fg = face_graph(&ob, tol)?;
    separate_with(&ob, &fg, a, b, report, tol)
}

fn separate_with(
    ob: &OffsetBoundary,
    fg: &FaceGraph,
    a: &PointSet,
    b: &PointSet,
    hypothesis: HypothesisReport,
    tol: &Tolerance,
) -> Result<SeparationResult, SeparationError> {
    let faces = b
        .iter()
        .map(|q| face_of_point(q, fg, ob, tol))
        .collect::<Result<Vec<_>, _>>()?;
    if faces.iter().any(|&f| f != faces[0]) {
        return Err(SeparationError::BSpansMultipleFaces { faces });
    }
    let face = &fg.faces[faces[0]];
    let boundary = face.boundary();
    if boundary.len() != 1 {
        return Err(SeparationError::FaceBoundaryNotSimple {
            face: face.id,
            cycles: boundary.len(),
        });
    }
    let curve = ob.cycles()[boundary[0]].clone();
    let side_of_a = point_in_cycle(&a.points()[0], &curve, tol)?;
    let side_of_b = point_in_cycle(&b.points()[0], &curve, tol)?;
    Ok(SeparationResult {
        dist_curve_a: curve_distance(&curve, a),
        dist_curve_b: curve_distance(&curve, b),
        curve,
        face: face.id,
        face_bounded: face.bounded,
        side_of_a,
        side_of_b,
        epsilon: ob.epsilon(),
        hypothesis,
    })
}

/// The separating curve at ε = ρ(A,B)/2, equidistant from both sets.
pub fn midway_curve(a: &PointSet, b: &PointSet, tol: &Tolerance, force: bool) -> Result<MidwayResult, SeparationError> {
    let rho_ab = set_distance(a, b);
    if rho_ab == 0.0 {
        return Err(SeparationError::ZeroDistance);
    }
    let epsilon = rho_ab / 2.0;
    let a_chained = is_chained(a, rho_ab)?;
    let b_chained = is_chained(b, rho_ab)?;
    let mut violations = Vec::new();
    for (set, ok) in [(SetRole::A, a_chained), (SetRole::B, b_chained)] {
        if !ok {
            violations.push(Violation::NotChained {
                set,
                clause: ChainClause::SetDistance,
                threshold: rho_ab,
            });
        }
    }
    if !violations.is_empty() && !force {
        return Err(SeparationError::HypothesisViolation(Box::new(HypothesisReport {
            epsilon,
            rho_ab,
            a_chained,
            b_chained: Some(b_chained),
            violations,
        })));
    }
    let separation = separating_curve(a, b, epsilon, tol, force)?;
    let (achieved_dist_a, achieved_dist_b) = (separation.dist_curve_a, separation.dist_curve_b);
    let slack = tol.dist_slack(rho_ab);
    if (achieved_dist_a - epsilon).abs() > slack || (achieved_dist_b - epsilon).abs() > slack {
        return Err(SeparationError::MidwayContract {
            achieved_a: achieved_dist_a,
            achieved_b: achieved_dist_b,
            target: epsilon,
        });
    }
    Ok(MidwayResult {
        separation,
        rho_ab,
        achieved_dist_a,
        achieved_dist_b,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSeparation {
    /// Block indices into the 2ε-chained partition; the first plays A.
    pub blocks: (usize, usize),
    pub result: Result<SeparationResult, SeparationError>,
}

/// Separate every pair of distinct 2ε-chained components of `m` by a curve
/// lying in the ε-boundary of `m`.
pub fn separate_components(
    m: &PointSet,
    epsilon: f64,
    tol: &Tolerance,
) -> Result<(ChainPartition, Vec<PairSeparation>), SeparationError> {
    let partition = chained_components(m, 2.0 * epsilon)?;
    let blocks = &partition.blocks;
    let mut pairs = Vec::new();
    for i in 0..blocks.len() {
        let prepared = offset_boundary(&blocks[i], epsilon, tol)
            .map_err(SeparationError::from)
            .and_then(|ob| {
                let fg = face_graph(&ob, tol)?;
                Ok((ob, fg))
            });
        for j in i + 1..blocks.len() {
            let result = match &prepared {
                Err(e) => Err(e.clone()),
                Ok((ob, fg)) => separate_pair(ob, fg, &blocks[i], &blocks[j], m, epsilon, tol),
            };
            pairs.push(PairSeparation { blocks: (i, j), result });
        }
    }
    Ok((partition, pairs))
}

fn separate_pair(
    ob: &OffsetBoundary,
    fg: &FaceGraph,
    a: &PointSet,
    b: &PointSet,
    m: &PointSet,
    epsilon: f64,
    tol: &Tolerance,
) -> Result<SeparationResult, SeparationError> {
    let report = check_hypotheses(a, b, epsilon)?;
    if !report.holds() {
        return Err(SeparationError::HypothesisViolation(Box::new(report)));
    }
    let result = separate_with(ob, fg, a, b, report, tol)?;
    assert_in_boundary(&result.curve, m, epsilon, tol)?;
    Ok(result)
}

/// A simple closed curve contained in the ε-boundary of any nonempty `m`:
/// the outer curve of the canonical first 2ε-chained component.
pub fn some_simple_closed_curve(m: &PointSet, epsilon: f64, tol: &Tolerance) -> Result<ArcCycle, SeparationError> {
    let partition = chained_components(m, 2.0 * epsilon)?;
    let first = &partition.blocks[0];
    let curve = outer_curve(first, epsilon, tol)?;
    assert_in_boundary(&curve, m, epsilon, tol)?;
    Ok(curve)
}

/// Classify both sets against `curve` and check that it separates them.
pub fn verify_separation(
    curve: &ArcCycle,
    a: &PointSet,
    b: &PointSet,
    tol: &Tolerance,
) -> Result<VerificationReport, GeometryError> {
    let classify = |set: &PointSet| {
        set.iter()
            .map(|p| point_in_cycle(p, curve, tol))
            .collect::<Result<Vec<_>, _>>()
    };
    let a_sides = classify(a)?;
    let b_sides = classify(b)?;
    let mut failures = Vec::new();
    for (name, sides) in [("A", &a_sides), ("B", &b_sides)] {
        let on = sides.iter().filter(|s| **s == Side::OnCurve).count();
        if on > 0 {
            failures.push(format!("{name}: {on} point(s) on the curve"));
        }
        if sides.contains(&Side::Inside) && sides.contains(&Side::Outside) {
            failures.push(format!("{name} lies on both sides of the curve"));
        }
    }
    if failures.is_empty() && a_sides[0] == b_sides[0] {
        let where_ = if a_sides[0] == Side::Inside {
            "inside"
        } else {
            "outside"
        };
        failures.push(format!("A and B are both {where_} the curve"));
    }
    Ok(VerificationReport {
        passed: failures.is_empty(),
        a_sides,
        b_sides,
        dist_curve_a: curve_distance(curve, a),
        dist_curve_b: curve_distance(curve, b),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Arc, CycleArc, Point};

    fn set(points: &[(f64, f64)]) -> PointSet {
        PointSet::new(points.iter().map(|&p| p.into())).unwrap()
    }

    fn unit_circle() -> ArcCycle {
        let arc = Arc::full(0, Point::new(0.0, 0.0), 1.0).unwrap();
        ArcCycle::new(vec![CycleArc::forward(arc)], &Tolerance::default()).unwrap()
    }

    #[test]
    fn verify_passes_and_fails() {
        let tol = Tolerance::default();
        let c = unit_circle();
        let ok = verify_separation(&c, &set(&[(0.0, 0.0)]), &set(&[(4.0, 0.0)]), &tol).unwrap();
        assert!(ok.passed);
        assert_eq!(ok.dist_curve_a, 1.0);
        assert_eq!(ok.dist_curve_b, 3.0);
        let both = verify_separation(&c, &set(&[(0.0, 0.0)]), &set(&[(0.5, 0.0)]), &tol).unwrap();
        assert!(!both.passed);
        assert_eq!(both.failures, vec!["A and B are both inside the curve"]);
        let on = verify_separation(&c, &set(&[(1.0, 0.0)]), &set(&[(4.0, 0.0)]), &tol).unwrap();
        assert!(!on.passed);
        assert_eq!(on.a_sides, vec![Side::OnCurve]);
    }

    #[test]
    fn singleton_separation() {
        let tol = Tolerance::default();
        let r = separating_curve(&set(&[(0.0, 0.0)]), &set(&[(4.0, 0.0)]), 1.0, &tol, false).unwrap();
        assert_eq!(r.side_of_a, Side::Inside);
        assert_eq!(r.side_of_b, Side::Outside);
        assert!(!r.face_bounded);
        assert_eq!(r.dist_curve_a, 1.0);
        assert_eq!(r.dist_curve_b, 3.0);
    }

    #[test]
    fn outer_curve_rejects_unchained() {
        let tol = Tolerance::default();
        let err = outer_curve(&set(&[(0.0, 0.0), (2.0, 0.0)]), 1.0, &tol).unwrap_err();
        match err {
            SeparationError::NotChained { threshold, partition } => {
                assert_eq!(threshold, 2.0);
                assert_eq!(partition.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn midway_zero_distance() {
        let tol = Tolerance::default();
        let a = set(&[(0.0, 0.0)]);
        assert_eq!(midway_curve(&a, &a, &tol, false), Err(SeparationError::ZeroDistance));
    }

    #[test]
    fn existence_on_unchained_pair() {
        let tol = Tolerance::default();
        let c = some_simple_closed_curve(&set(&[(0.0, 0.0), (2.0, 0.0)]), 1.0, &tol).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.arcs()[0].arc.center(), Point::new(0.0, 0.0));
    }

    #[test]
    fn single_block_has_no_pairs() {
        let tol = Tolerance::default();
        let (partition, pairs) = separate_components(&set(&[(0.0, 0.0)]), 1.0, &tol).unwrap();
        assert_eq!(partition.len(), 1);
        assert!(pairs.is_empty());
    }
}
