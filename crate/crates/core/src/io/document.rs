use serde::Serialize;

use crate::chained::HypothesisReport;
use crate::geometry::{ArcCycle, CycleArc, CycleKind, Point};
use crate::separation::VerificationReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One arc in travel order. Clockwise arcs run from `start_angle` down to
/// `end_angle`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcEntry {
    pub center: [f64; 2],
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub ccw: bool,
    pub full_circle: bool,
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl From<&CycleArc> for ArcEntry {
    fn from(ca: &CycleArc) -> Self {
        let arc = &ca.arc;
        let (start_angle, end_angle) = if ca.reversed {
            (arc.end_angle(), arc.start_angle())
        } else {
            (arc.start_angle(), arc.end_angle())
        };
        let xy = |p: Point| [p.x, p.y];
        ArcEntry {
            center: xy(arc.center()),
            radius: arc.radius(),
            start_angle,
            end_angle,
            ccw: !ca.reversed,
            full_circle: arc.is_full_circle(),
            start: xy(ca.from()),
            end: xy(ca.to()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveEntry {
    pub kind: CycleKind,
    /// What the curve is, e.g. `outer`, `separating`, `midway` or `boundary`.
    pub role: String,
    /// Pair of chained-component indices for pairwise separations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    pub arcs: Vec<ArcEntry>,
}

impl CurveEntry {
    pub fn new(curve: &ArcCycle, role: impl Into<String>) -> Self {
        CurveEntry {
            kind: curve.kind(),
            role: role.into(),
            pair: None,
            arcs: curve.arcs().iter().map(ArcEntry::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(rename = "rho_AB", skip_serializing_if = "Option::is_none")]
    pub rho_ab: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face: Option<FaceInfo>,
    /// Per-item failures that did not abort the command.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub tool_version: String,
    pub seed: u64,
}

/// The face of the complement holding B.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceInfo {
    pub id: usize,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveDocument {
    pub curves: Vec<CurveEntry>,
    pub metadata: Metadata,
}

impl CurveDocument {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        CurveDocument {
            curves: Vec::new(),
            metadata: Metadata {
                command: command.into(),
                epsilon: None,
                rho_ab: None,
                hypothesis: None,
                verification: None,
                face: None,
                notes: Vec::new(),
                tool_version: TOOL_VERSION.to_string(),
                seed,
            },
        }
    }

    pub fn push(&mut self, curve: &ArcCycle, role: &str) -> &mut CurveEntry {
        self.curves.push(CurveEntry::new(curve, role));
        self.curves.last_mut().expect("just pushed")
    }

    /// Pretty JSON with fixed key order and shortest round-trip numbers.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PointSet, Tolerance};
    use crate::offset::offset_boundary;
    use crate::separation::outer_curve;

    #[test]
    fn single_circle_document() {
        let tol = Tolerance::default();
        let a = PointSet::new([Point::new(0.0, 0.0)]).unwrap();
        let curve = outer_curve(&a, 1.0, &tol).unwrap();
        let mut doc = CurveDocument::new("outer", 0);
        doc.push(&curve, "outer");
        let arcs = &doc.curves[0].arcs;
        assert_eq!(arcs.len(), 1);
        assert!(arcs[0].full_circle && arcs[0].ccw);
        assert_eq!(arcs[0].radius, 1.0);
        assert_eq!(arcs[0].center, [0.0, 0.0]);
        let json = doc.to_json();
        assert!(json.contains("\"kind\": \"outer\""));
        assert_eq!(json, doc.to_json());
    }

    #[test]
    fn peanut_welds_serialize_exactly() {
        let tol = Tolerance::default();
        let a = PointSet::new([Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        let ob = offset_boundary(&a, 1.0, &tol).unwrap();
        let mut doc = CurveDocument::new("outer", 0);
        doc.push(&ob.cycles()[0], "outer");
        assert_eq!(doc.curves[0].arcs.len(), 2);
        let json = doc.to_json();
        assert!(json.contains("0.8660254037844386"), "{json}");
        assert!(json.contains("-0.8660254037844386"), "{json}");
        for arc in &doc.curves[0].arcs {
            for angle in [arc.start_angle, arc.end_angle] {
                assert!((0.0..std::f64::consts::TAU).contains(&angle));
            }
        }
    }
}
