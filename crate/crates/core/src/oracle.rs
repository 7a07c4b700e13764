//! Raster approximation of the distance field, used to cross-check the exact
//! arc constructions.
//!
//! Nothing here depends on the offset or separation code. Cell centres sit
//! on the lattice `hZ²`, each holding the brute-force distance to the source
//! set. Components of the far region come from a 4-connected flood fill and
//! the ε-level set from marching squares.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{point_to_arc_distance, ArcCycle, BBox, Point, PointSet};

/// Largest grid, in cells, that the oracle will build.
pub const CELL_BUDGET: usize = 4_000_000;
/// Default number of cells per ε.
pub const CELLS_PER_EPSILON: f64 = 50.0;
/// Samples per arc used by [`compare_curves`].
pub const COMPARE_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid of {cells} cells exceeds the budget of {budget}")]
    CellBudgetExceeded { cells: usize, budget: usize },
    #[error("cell size must be positive and finite, got {0}")]
    InvalidResolution(f64),
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
}

#[derive(Debug, Clone)]
pub struct DistanceGrid {
    source: Vec<Point>,
    epsilon: f64,
    h: f64,
    /// Lattice index of the first cell centre.
    first: (i64, i64),
    width: usize,
    height: usize,
    values: Vec<f64>,
    band: Vec<bool>,
}

fn brute_distance(source: &[Point], p: Point) -> f64 {
    let mut best = f64::INFINITY;
    for q in source {
        let (dx, dy) = (p.x - q.x, p.y - q.y);
        best = best.min(dx * dx + dy * dy);
    }
    best.sqrt()
}

fn lattice_span(lo: f64, hi: f64, h: f64) -> (i64, usize) {
    let first = (lo / h).floor() as i64;
    let last = (hi / h).ceil() as i64;
    (first, (last - first + 1) as usize)
}

fn cell_count(region: &BBox, h: f64) -> usize {
    let (_, w) = lattice_span(region.min.x, region.max.x, h);
    let (_, hgt) = lattice_span(region.min.y, region.max.y, h);
    w.saturating_mul(hgt)
}

/// `ε / 50`, coarsened until the grid over `region` fits the cell budget.
pub fn default_resolution(region: &BBox, epsilon: f64) -> f64 {
    let mut h = epsilon / CELLS_PER_EPSILON;
    while cell_count(&region.expanded(epsilon + 4.0 * h), h) > CELL_BUDGET {
        h *= 1.05;
    }
    h
}

/// Distance grid covering the bounding box of `a`, expanded by `ε + 4h`.
pub fn build_distance_grid(a: &PointSet, epsilon: f64, h: f64) -> Result<DistanceGrid, OracleError> {
    build_distance_grid_over(a, epsilon, h, &a.bbox())
}

/// Distance grid covering `region ∪ bbox(a)`, expanded by `ε + 4h`.
pub fn build_distance_grid_over(
    a: &PointSet,
    epsilon: f64,
    h: f64,
    region: &BBox,
) -> Result<DistanceGrid, OracleError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::InvalidResolution(h));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(OracleError::InvalidEpsilon(epsilon));
    }
    let cover = region.union(&a.bbox()).expanded(epsilon + 4.0 * h);
    let (fx, width) = lattice_span(cover.min.x, cover.max.x, h);
    let (fy, height) = lattice_span(cover.min.y, cover.max.y, h);
    let cells = width.saturating_mul(height);
    if cells > CELL_BUDGET {
        return Err(OracleError::CellBudgetExceeded {
            cells,
            budget: CELL_BUDGET,
        });
    }
    let source = a.points().to_vec();
    let mut values = vec![0.0; cells];
    values.par_chunks_mut(width).enumerate().for_each(|(j, row)| {
        let y = (fy + j as i64) as f64 * h;
        for (i, v) in row.iter_mut().enumerate() {
            *v = brute_distance(&source, Point::new((fx + i as i64) as f64 * h, y));
        }
    });
    let half_diagonal = h * std::f64::consts::SQRT_2 / 2.0;
    let band = values.iter().map(|v| (v - epsilon).abs() <= half_diagonal).collect();
    Ok(DistanceGrid {
        source,
        epsilon,
        h,
        first: (fx, fy),
        width,
        height,
        values,
        band,
    })
}

impl DistanceGrid {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn cell_size(&self) -> f64 {
        self.h
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Centre of the first cell.
    pub fn origin(&self) -> Point {
        self.center(0, 0)
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            (self.first.0 + i as i64) as f64 * self.h,
            (self.first.1 + j as i64) as f64 * self.h,
        )
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.width + i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Whether the cell lies too close to the level set to certify a side.
    pub fn is_uncertain(&self, i: usize, j: usize) -> bool {
        self.band[j * self.width + i]
    }

    /// Cell whose centre is nearest to `p`, if inside the grid.
    pub fn cell_of(&self, p: &Point) -> Option<(usize, usize)> {
        let i = (p.x / self.h).round() as i64 - self.first.0;
        let j = (p.y / self.h).round() as i64 - self.first.1;
        let inside = (0..self.width as i64).contains(&i) && (0..self.height as i64).contains(&j);
        inside.then_some((i as usize, j as usize))
    }

    /// Whether the segment between two cell centres stays strictly farther
    /// than ε from every source point.
    fn segment_is_free(&self, from: usize, to: usize) -> bool {
        let a = self.center(from % self.width, from / self.width);
        let b = self.center(to % self.width, to / self.width);
        self.source
            .iter()
            .all(|q| point_segment_distance(q, &a, &b) > self.epsilon)
    }

    /// Exact distance to the source set, as used for every cell.
    pub fn exact(&self, p: Point) -> f64 {
        brute_distance(&self.source, p)
    }

    /// Plain-text portable grey map; black at distance 0, white at 2ε and beyond.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for j in (0..self.height).rev() {
            let row: Vec<String> = (0..self.width)
                .map(|i| {
                    let shade = (self.value(i, j) / (2.0 * self.epsilon)).min(1.0) * 255.0;
                    format!("{}", shade.round() as u8)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridComponent {
    pub label: usize,
    pub cells: usize,
    pub bounded: bool,
    /// First cell reached, in row-major order.
    pub seed: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct ComponentMap {
    width: usize,
    labels: Vec<Option<usize>>,
    pub components: Vec<GridComponent>,
}

impl ComponentMap {
    pub fn label(&self, i: usize, j: usize) -> Option<usize> {
        self.labels[j * self.width + i]
    }

    pub fn bounded_count(&self) -> usize {
        self.components.iter().filter(|c| c.bounded).count()
    }

    pub fn unbounded_count(&self) -> usize {
        self.components.len() - self.bounded_count()
    }
}

/// 4-connected components of the cells with value above ε.
///
/// Two neighbouring certain cells are always joined: the field is
/// 1-Lipschitz, so the segment between their centres stays above ε. A step
/// into or out of a band cell is taken only when that segment provably
/// misses every closed ε-disk, which keeps a certain cell at the tip of a
/// narrow wedge attached to its face without leaking through pinches. Only
/// certain cells are labelled and counted.
pub fn grid_components(g: &DistanceGrid) -> ComponentMap {
    let (w, h) = (g.width, g.height);
    let free = |k: usize| g.values[k] > g.epsilon;
    let mut region = vec![usize::MAX; g.len()];
    let mut labels = vec![None; g.len()];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    let mut members = Vec::new();
    for start in 0..g.len() {
        if region[start] != usize::MAX || !free(start) || g.band[start] {
            continue;
        }
        let label = components.len();
        let mut bounded = true;
        members.clear();
        region[start] = label;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            if !g.band[k] {
                members.push(k);
            }
            let (i, j) = (k % w, k / w);
            if i == 0 || j == 0 || i + 1 == w || j + 1 == h {
                bounded = false;
            }
            let mut visit = |n: usize| {
                if region[n] == usize::MAX && free(n) && ((!g.band[k] && !g.band[n]) || g.segment_is_free(k, n)) {
                    region[n] = label;
                    queue.push_back(n);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < w {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - w);
            }
            if j + 1 < h {
                visit(k + w);
            }
        }
        for &k in &members {
            labels[k] = Some(label);
        }
        components.push(GridComponent {
            label,
            cells: members.len(),
            bounded,
            seed: (start % w, start / w),
        });
    }
    ComponentMap {
        width: w,
        labels,
        components,
    }
}

/// Closed polyline; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        (0..n).map(move |k| (self.points[k], self.points[(k + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(p, q)| p.distance(&q)).sum()
    }

    pub fn distance_to(&self, p: &Point) -> f64 {
        self.segments()
            .map(|(a, b)| point_segment_distance(p, &a, &b))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&Point::new(a.x + t * dx, a.y + t * dy))
}

/// Marching squares on the corners `value ≤ ε`, with the square formed by
/// four neighbouring cell centres. Saddles are resolved by the exact distance
/// at the square's centre.
pub fn grid_boundary(g: &DistanceGrid) -> Vec<Polyline> {
    let w = g.width;
    let eps = g.epsilon;
    // Edge keys: 2k is the edge from corner k to its right, 2k + 1 to the one above.
    let crossing = |key: usize| -> Point {
        let k = key / 2;
        let (i, j) = (k % w, k / w);
        let (i1, j1) = if key.is_multiple_of(2) { (i + 1, j) } else { (i, j + 1) };
        let (v0, v1) = (g.value(i, j), g.value(i1, j1));
        let t = (eps - v0) / (v1 - v0);
        let (p0, p1) = (g.center(i, j), g.center(i1, j1));
        Point::new(p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y))
    };
    let mut links: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut link = |a: usize, b: usize| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };
    for j in 0..g.height.saturating_sub(1) {
        for i in 0..w.saturating_sub(1) {
            let k = j * w + i;
            // Corners counterclockwise from bottom-left, and the edge after each.
            let inside = [
                g.value(i, j) <= eps,
                g.value(i + 1, j) <= eps,
                g.value(i + 1, j + 1) <= eps,
                g.value(i, j + 1) <= eps,
            ];
            let edges = [2 * k, 2 * (k + 1) + 1, 2 * (k + w), 2 * k + 1];
            let crossed: Vec<usize> = (0..4).filter(|&e| inside[e] != inside[(e + 1) % 4]).collect();
            match crossed.len() {
                0 => {}
                2 => link(edges[crossed[0]], edges[crossed[1]]),
                _ => {
                    let mid = Point::new(
                        (g.first.0 as f64 + i as f64 + 0.5) * g.h,
                        (g.first.1 as f64 + j as f64 + 0.5) * g.h,
                    );
                    let centre_inside = g.exact(mid) <= eps;
                    // Cut off the corners that differ from the centre; corner c
                    // touches edges c - 1 and c.
                    for c in 0..4 {
                        if inside[c] != centre_inside {
                            link(edges[(c + 3) % 4], edges[c]);
                        }
                    }
                }
            }
        }
    }
    let mut keys: Vec<usize> = links.keys().copied().collect();
    keys.sort_unstable();
    let mut done = std::collections::HashSet::new();
    let mut loops = Vec::new();
    for start in keys {
        if !done.insert(start) {
            continue;
        }
        let mut points = vec![crossing(start)];
        let (mut prev, mut cur) = (start, links[&start][0]);
        while cur != start {
            done.insert(cur);
            points.push(crossing(cur));
            let next = links[&cur].iter().copied().find(|&n| n != prev).unwrap_or(prev);
            prev = cur;
            cur = next;
        }
        loops.push(Polyline { points });
    }
    loops
}

/// Symmetric Hausdorff distance between an exact cycle and a polyline.
pub fn compare_curves(curve: &ArcCycle, poly: &Polyline) -> f64 {
    let forward = curve
        .sample(COMPARE_SAMPLES)
        .iter()
        .map(|p| poly.distance_to(p))
        .fold(0.0, f64::max);
    let backward = poly
        .points
        .iter()
        .map(|p| {
            curve
                .arcs()
                .iter()
                .map(|a| point_to_arc_distance(p, &a.arc))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    forward.max(backward)
}

/// The polyline closest to `curve` under [`compare_curves`], with the distance.
pub fn match_polyline(curve: &ArcCycle, polys: &[Polyline]) -> Option<(usize, f64)> {
    let bbox = curve.bbox();
    polys
        .iter()
        .enumerate()
        .map(|(k, p)| {
            // Cheap lower bound from the first vertex before the full comparison.
            let near = curve.distance_to(&p.points[0]);
            let far = bbox.width().max(bbox.height());
            let d = if near > far { near } else { compare_curves(curve, p) };
            (k, d)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
}
