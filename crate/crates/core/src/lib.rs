//! Equidistant Jordan curves around finite planar point sets.
//!
//! The boundary of the union of ε-disks around a point set is computed
//! exactly as cycles of circular arcs. From it the crate extracts simple
//! closed curves that separate one set from another at a prescribed
//! distance, and checks them against an independent raster oracle.

pub mod chained;
pub mod geometry;
pub mod io;
pub mod offset;
pub mod oracle;
pub mod separation;

pub use chained::{
    chained_components, check_hypotheses, closest_pair, is_chained, set_distance, ChainError, ChainPartition,
    HypothesisReport, Violation,
};
pub use geometry::{
    cycle_is_simple, point_in_cycle, Arc, ArcCycle, CycleArc, CycleKind, GeometryError, Point, PointSet, Side,
    Tolerance,
};
pub use offset::{face_graph, face_of_point, offset_boundary, Face, FaceGraph, OffsetBoundary, OffsetError};
pub use separation::{
    midway_curve, outer_curve, separate_components, separating_curve, some_simple_closed_curve, verify_separation,
    MidwayResult, SeparationError, SeparationResult, VerificationReport,
};
