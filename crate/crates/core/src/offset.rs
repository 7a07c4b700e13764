//! The ε-boundary of a finite point set as closed circular-arc cycles.
//!
//! Every circle of radius ε around a source point is split at its
//! intersections with the other circles; the pieces that do not run through
//! the interior of another disk form the boundary of the union of disks.
//! Pieces are welded at shared intersection vertices into cycles that keep
//! the union on their left, so outer cycles run counterclockwise and hole
//! cycles clockwise.
//!
//! Vertices where more than one boundary arc enters (tangencies at exactly
//! 2ε) are resolved per chained component: arcs of different 2ε-chained
//! components are never joined, and within one component each incoming arc
//! continues along the complementary region on its right. Both rules keep
//! every emitted cycle simple.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::chained::{chained_components, ChainError};
use crate::geometry::{
    canonical_angle, ccw_delta, circle_circle_intersections, point_in_cycle, Arc, ArcCycle, Circle, CircleIntersection,
    CycleArc, CycleKind, GeometryError, Point, PointSet, Side, Tolerance,
};

/// Directions closer than this (radians) are treated as a tangential tie.
const DIRECTION_TIE: f64 = 1e-9;
/// Representative points tried per cycle when building the face graph.
const NESTING_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OffsetError {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("intersection points on circle {circle} from neighbours {first} and {second} coincide near {point}")]
    ToleranceCollapse {
        circle: usize,
        first: usize,
        second: usize,
        point: Point,
    },
    #[error("boundary arcs cannot be paired at vertex {point}")]
    DegenerateVertex { point: Point },
    #[error("representative points of cycle {cycle} keep landing on another cycle")]
    AmbiguousNesting { cycle: usize },
    #[error("cycle {cycle} has an impossible nesting parent")]
    InconsistentNesting { cycle: usize },
    #[error("point {point} is within ε of the source set (distance {distance})")]
    NotInComplement { point: Point, distance: f64 },
    #[error("point {point} lies on boundary cycle {cycle}")]
    OnBoundary { point: Point, cycle: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// The boundary of the union of closed ε-disks around a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetBoundary {
    epsilon: f64,
    source: PointSet,
    cycles: Vec<ArcCycle>,
    arcs_per_point: Vec<usize>,
    tangencies: usize,
    dropped_fragments: usize,
}

impl OffsetBoundary {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn source(&self) -> &PointSet {
        &self.source
    }

    /// Cycles ordered by canonical key.
    pub fn cycles(&self) -> &[ArcCycle] {
        &self.cycles
    }

    /// Number of boundary arcs on the circle around each source point.
    pub fn arcs_per_point(&self) -> &[usize] {
        &self.arcs_per_point
    }

    /// Number of circle pairs that touch at a single point.
    pub fn tangencies(&self) -> usize {
        self.tangencies
    }

    /// Sub-arcs of zero measure that were discarded.
    pub fn dropped_fragments(&self) -> usize {
        self.dropped_fragments
    }

    pub fn outer_cycles(&self) -> impl Iterator<Item = (usize, &ArcCycle)> {
        self.cycles
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind() == CycleKind::Outer)
    }

    pub fn hole_cycles(&self) -> impl Iterator<Item = (usize, &ArcCycle)> {
        self.cycles
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind() == CycleKind::Hole)
    }
}

struct Event {
    angle: f64,
    vertex: usize,
    neighbor: usize,
}

struct BoundaryArc {
    arc: Arc,
    from: Option<usize>,
    to: Option<usize>,
}

fn check_epsilon(epsilon: f64) -> Result<(), OffsetError> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(OffsetError::InvalidEpsilon(epsilon))
    }
}

/// Build the ε-boundary of `source` as canonical arc cycles.
pub fn offset_boundary(source: &PointSet, epsilon: f64, tol: &Tolerance) -> Result<OffsetBoundary, OffsetError> {
    check_epsilon(epsilon)?;
    tol.validate()?;
    let pts = source.points();
    let n = pts.len();

    // circles within τ_isect of an earlier one contribute nothing
    let mut shadowed = vec![false; n];
    for j in 0..n {
        shadowed[j] = (0..j).any(|i| !shadowed[i] && pts[i].distance(&pts[j]) <= tol.isect);
    }

    let mut vertices: Vec<Point> = Vec::new();
    let mut events: Vec<Vec<Event>> = (0..n).map(|_| Vec::new()).collect();
    let mut tangencies = 0;
    let angle_on = |i: usize, p: &Point| canonical_angle((p.y - pts[i].y).atan2(p.x - pts[i].x));
    for i in 0..n {
        if shadowed[i] {
            continue;
        }
        for j in i + 1..n {
            if shadowed[j] || pts[i].distance(&pts[j]) > 2.0 * epsilon + 2.0 * tol.isect {
                continue;
            }
            let hits = circle_circle_intersections(&Circle::new(pts[i], epsilon), &Circle::new(pts[j], epsilon), tol)?;
            if let CircleIntersection::Tangent(_) = hits {
                tangencies += 1;
            }
            for p in hits.points() {
                let vertex = vertices.len();
                vertices.push(p);
                events[i].push(Event {
                    angle: angle_on(i, &p),
                    vertex,
                    neighbor: j,
                });
                events[j].push(Event {
                    angle: angle_on(j, &p),
                    vertex,
                    neighbor: i,
                });
            }
        }
    }

    let inside_other = |m: &Point, own: usize| {
        let limit = epsilon * (1.0 - tol.dist);
        (0..n).any(|k| k != own && !shadowed[k] && pts[k].distance(m) < limit)
    };

    let mut arcs: Vec<BoundaryArc> = Vec::new();
    let mut dropped_fragments = 0;
    for i in 0..n {
        if shadowed[i] {
            continue;
        }
        let ev = &mut events[i];
        ev.sort_by(|a, b| a.angle.total_cmp(&b.angle).then(a.vertex.cmp(&b.vertex)));
        match ev.len() {
            0 => {
                let arc = Arc::full(i, pts[i], epsilon)?;
                if !inside_other(&arc.midpoint(), i) {
                    arcs.push(BoundaryArc {
                        arc,
                        from: None,
                        to: None,
                    });
                }
            }
            1 => {
                let v = ev[0].vertex;
                let arc = Arc::full_from(i, pts[i], epsilon, vertices[v])?;
                if !inside_other(&arc.midpoint(), i) {
                    arcs.push(BoundaryArc {
                        arc,
                        from: Some(v),
                        to: Some(v),
                    });
                }
            }
            m => {
                for k in 0..m {
                    let (a, b) = (&ev[k], &ev[(k + 1) % m]);
                    let gap = ccw_delta(a.angle, b.angle);
                    if gap * epsilon <= tol.isect {
                        if a.neighbor != b.neighbor {
                            return Err(OffsetError::ToleranceCollapse {
                                circle: i,
                                first: a.neighbor.min(b.neighbor),
                                second: a.neighbor.max(b.neighbor),
                                point: vertices[a.vertex],
                            });
                        }
                        dropped_fragments += 1;
                        continue;
                    }
                    let arc = Arc::between(i, pts[i], epsilon, vertices[a.vertex], vertices[b.vertex])?;
                    if !inside_other(&arc.midpoint(), i) {
                        arcs.push(BoundaryArc {
                            arc,
                            from: Some(a.vertex),
                            to: Some(b.vertex),
                        });
                    }
                }
            }
        }
    }

    let partition = chained_components(source, 2.0 * epsilon)?;
    let next = pair_at_vertices(&arcs, &vertices, &partition.block_of)?;

    let mut visited = vec![false; arcs.len()];
    let mut cycles = Vec::new();
    for start in 0..arcs.len() {
        if visited[start] {
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = start;
        loop {
            if visited[cur] {
                let point = arcs[cur].arc.start();
                return Err(OffsetError::DegenerateVertex { point });
            }
            visited[cur] = true;
            chain.push(CycleArc::forward(arcs[cur].arc.clone()));
            cur = next[cur];
            if cur == start {
                break;
            }
        }
        cycles.push(ArcCycle::new(chain, tol)?);
    }
    cycles.sort_by(|a, b| {
        a.canonical_key()
            .lex_cmp(&b.canonical_key())
            .then(a.kind().cmp(&b.kind()))
            .then(a.len().cmp(&b.len()))
    });

    let mut arcs_per_point = vec![0; n];
    for a in &arcs {
        arcs_per_point[a.arc.center_index()] += 1;
    }

    Ok(OffsetBoundary {
        epsilon,
        source: source.clone(),
        cycles,
        arcs_per_point,
        tangencies,
        dropped_fragments,
    })
}

/// For every arc, the arc that follows it in its cycle.
fn pair_at_vertices(
    arcs: &[BoundaryArc],
    vertices: &[Point],
    component_of: &[usize],
) -> Result<Vec<usize>, OffsetError> {
    let mut next: Vec<usize> = (0..arcs.len()).collect();
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (k, a) in arcs.iter().enumerate() {
        if let (Some(from), Some(to)) = (a.from, a.to) {
            outgoing[from].push(k);
            incoming[to].push(k);
        }
    }
    let direction = |p: Point| p.y.atan2(p.x);
    for v in 0..vertices.len() {
        let (ins, outs) = (&incoming[v], &outgoing[v]);
        if ins.len() != outs.len() {
            return Err(OffsetError::DegenerateVertex { point: vertices[v] });
        }
        if ins.len() == 1 {
            next[ins[0]] = outs[0];
            continue;
        }
        let mut used = vec![false; outs.len()];
        for &e in ins {
            let arc_in = &arcs[e].arc;
            let comp = component_of[arc_in.center_index()];
            let t = arc_in.tangent_at(arc_in.end_angle());
            let back = direction(Point::new(-t.x, -t.y));
            let mut best: Option<(usize, f64)> = None;
            for (k, &f) in outs.iter().enumerate() {
                let arc_out = &arcs[f].arc;
                if component_of[arc_out.center_index()] != comp {
                    continue;
                }
                let mut turn = ccw_delta(back, direction(arc_out.tangent_at(arc_out.start_angle())));
                // an outgoing arc bends left of the reversed incoming one, so a
                // tangential tie places it immediately counterclockwise
                if turn < DIRECTION_TIE || TAU - turn < DIRECTION_TIE {
                    turn = 0.0;
                }
                if best.is_none_or(|(_, b)| turn < b) {
                    best = Some((k, turn));
                }
            }
            match best {
                Some((k, _)) if !used[k] => {
                    used[k] = true;
                    next[e] = outs[k];
                }
                _ => return Err(OffsetError::DegenerateVertex { point: vertices[v] }),
            }
        }
    }
    Ok(next)
}

/// A complementary component of the closed ε-neighbourhood.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: usize,
    pub bounded: bool,
    /// The hole cycle around a bounded face; `None` for the unbounded face.
    pub enclosing: Option<usize>,
    /// Outer cycles of components lying directly inside this face.
    pub inner: Vec<usize>,
}

impl Face {
    /// All cycles bounding this face.
    pub fn boundary(&self) -> Vec<usize> {
        self.enclosing
            .iter()
            .copied()
            .chain(self.inner.iter().copied())
            .collect()
    }
}

/// Nesting forest of the boundary cycles and the faces they bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceGraph {
    /// `faces[0]` is the unbounded face; one bounded face follows per hole cycle.
    pub faces: Vec<Face>,
    /// Immediately enclosing cycle of each cycle.
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    hole_face: Vec<Option<usize>>,
}

impl FaceGraph {
    pub const UNBOUNDED: usize = 0;

    /// Bounded face enclosed by a hole cycle.
    pub fn face_of_hole(&self, cycle: usize) -> Option<usize> {
        self.hole_face.get(cycle).copied().flatten()
    }

    pub fn bounded_faces(&self) -> usize {
        self.faces.iter().filter(|f| f.bounded).count()
    }

    pub fn children(&self, cycle: usize) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&c| self.parent[c] == Some(cycle))
            .collect()
    }
}

const REPRESENTATIVE_FRACTIONS: [f64; NESTING_ATTEMPTS] = [0.5, 0.3, 0.7, 0.1, 0.9, 0.2, 0.8, 0.4];

/// Compute the nesting forest of the cycles of `ob` and its faces.
pub fn face_graph(ob: &OffsetBoundary, tol: &Tolerance) -> Result<FaceGraph, OffsetError> {
    let cycles = ob.cycles();
    let n = cycles.len();
    let mut contains = vec![vec![false; n]; n];
    for x in 0..n {
        let mut settled = false;
        for attempt in 0..NESTING_ATTEMPTS {
            let arcs = cycles[x].arcs();
            let rep = arcs[attempt % arcs.len()]
                .arc
                .point_at_fraction(REPRESENTATIVE_FRACTIONS[attempt]);
            let mut row = vec![false; n];
            let mut ambiguous = false;
            for y in (0..n).filter(|&y| y != x) {
                match point_in_cycle(&rep, &cycles[y], tol)? {
                    Side::Inside => row[y] = true,
                    Side::Outside => {}
                    Side::OnCurve => {
                        ambiguous = true;
                        break;
                    }
                }
            }
            if !ambiguous {
                for (y, inside) in row.into_iter().enumerate() {
                    contains[y][x] = inside;
                }
                settled = true;
                break;
            }
        }
        if !settled {
            return Err(OffsetError::AmbiguousNesting { cycle: x });
        }
    }

    let parent: Vec<Option<usize>> = (0..n)
        .map(|x| {
            (0..n).filter(|&y| contains[y][x]).min_by(|&a, &b| {
                cycles[a]
                    .signed_area()
                    .abs()
                    .total_cmp(&cycles[b].signed_area().abs())
                    .then(a.cmp(&b))
            })
        })
        .collect();
    let mut depth = vec![0; n];
    for (x, d) in depth.iter_mut().enumerate() {
        let mut cur = parent[x];
        while let Some(p) = cur {
            *d += 1;
            if *d > n {
                return Err(OffsetError::InconsistentNesting { cycle: x });
            }
            cur = parent[p];
        }
    }
    for x in 0..n {
        let ok = match (cycles[x].kind(), parent[x]) {
            (CycleKind::Outer, None) => true,
            (CycleKind::Hole, None) => false,
            (kind, Some(p)) => cycles[p].kind() != kind,
        };
        if !ok {
            return Err(OffsetError::InconsistentNesting { cycle: x });
        }
    }

    let mut faces = vec![Face {
        id: FaceGraph::UNBOUNDED,
        bounded: false,
        enclosing: None,
        inner: (0..n).filter(|&x| parent[x].is_none()).collect(),
    }];
    let mut hole_face = vec![None; n];
    for (h, _) in ob.hole_cycles() {
        let id = faces.len();
        hole_face[h] = Some(id);
        faces.push(Face {
            id,
            bounded: true,
            enclosing: Some(h),
            inner: (0..n).filter(|&x| parent[x] == Some(h)).collect(),
        });
    }
    Ok(FaceGraph {
        faces,
        parent,
        depth,
        hole_face,
    })
}

/// The face of the complement of the closed ε-neighbourhood that contains `q`.
pub fn face_of_point(q: &Point, fg: &FaceGraph, ob: &OffsetBoundary, tol: &Tolerance) -> Result<usize, OffsetError> {
    let distance = ob.source().distance_to(q);
    if distance <= ob.epsilon() + tol.dist_slack(ob.epsilon()) {
        return Err(OffsetError::NotInComplement { point: *q, distance });
    }
    let mut innermost: Option<usize> = None;
    for (k, cycle) in ob.cycles().iter().enumerate() {
        match point_in_cycle(q, cycle, tol)? {
            Side::OnCurve => return Err(OffsetError::OnBoundary { point: *q, cycle: k }),
            Side::Inside => {
                if innermost.is_none_or(|c| fg.depth[k] > fg.depth[c]) {
                    innermost = Some(k);
                }
            }
            Side::Outside => {}
        }
    }
    match innermost {
        None => Ok(FaceGraph::UNBOUNDED),
        Some(c) => fg.face_of_hole(c).ok_or(OffsetError::InconsistentNesting { cycle: c }),
    }
}
