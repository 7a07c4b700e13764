//! Fixtures, seeded instance generators and brute-force oracles shared by
//! the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use equidistant::chained::{check_hypotheses, is_chained, set_distance};
use equidistant::geometry::{ArcCycle, Point, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn set(points: &[(f64, f64)]) -> PointSet {
    PointSet::new(points.iter().map(|&p| p.into())).unwrap()
}

pub fn regular_polygon(k: usize, radius: f64, center: Point) -> PointSet {
    PointSet::new((0..k).map(|i| Point::polar(center, radius, i as f64 * TAU / k as f64))).unwrap()
}

pub fn peanut() -> PointSet {
    set(&[(0.0, 0.0), (1.0, 0.0)])
}

pub fn twelve_gon() -> PointSet {
    regular_polygon(12, 3.0, Point::new(0.0, 0.0))
}

/// Points on the counterclockwise arc of a circle from angle `from` to `to`,
/// consecutive points at most `spacing` apart, with the given exact endpoints.
pub fn discretized_arc(radius: f64, from: f64, to: f64, spacing: f64, first: Point, last: Point) -> Vec<Point> {
    let sweep = (to - from).rem_euclid(TAU);
    let steps = (radius * sweep / spacing).ceil() as usize;
    let mut points = vec![first];
    for k in 1..steps {
        points.push(Point::polar(
            Point::new(0.0, 0.0),
            radius,
            from + sweep * k as f64 / steps as f64,
        ));
    }
    points.push(last);
    points
}

/// Ring of radius 2 around the origin missing the short arc between
/// `(√3, ±1)`, whose end disks touch at `(√3, 0)`; B straddles the pinch.
pub fn pinched_ring_fixture() -> (PointSet, PointSet) {
    let s3 = 3f64.sqrt();
    let (p, q) = (Point::new(s3, 1.0), Point::new(s3, -1.0));
    let a = discretized_arc(2.0, PI / 6.0, -PI / 6.0, 0.05, p, q);
    let b = vec![Point::new(s3 - 0.125, 0.0), Point::new(s3 + 0.125, 0.0)];
    (PointSet::new(a).unwrap(), PointSet::new(b).unwrap())
}

/// B is the long arc of the unit circle through `(-1, 0)`; A is the centre and
/// its mirror image across the chord closing the gap.
pub fn open_arc_fixture() -> (PointSet, PointSet) {
    let s3 = 3f64.sqrt();
    let (p, q) = (Point::new(s3 / 2.0, 0.5), Point::new(s3 / 2.0, -0.5));
    let b = discretized_arc(1.0, PI / 6.0, -PI / 6.0, 0.05, p, q);
    (set(&[(0.0, 0.0), (s3, 0.0)]), PointSet::new(b).unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Circumcentre and circumradius of a triangle, if not degenerate.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-12 {
        return None;
    }
    let (a2, b2, c2) = (a.x * a.x + a.y * a.y, b.x * b.x + b.y * b.y, c.x * c.x + c.y * c.y);
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Point::new(ux, uy);
    Some((center, center.distance(&a)))
}

/// Whether adding `p` keeps every pair distance at least `margin` away from
/// `2ε` and every empty circumcircle radius at least `margin / 2` away from ε.
pub fn admissible(points: &[Point], p: Point, epsilon: f64, margin: f64) -> bool {
    if points
        .iter()
        .any(|q| (q.distance(&p) - 2.0 * epsilon).abs() <= margin || q.distance(&p) < 1e-3)
    {
        return false;
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let Some((center, radius)) = circumcircle(points[i], points[j], p) else {
                continue;
            };
            if (radius - epsilon).abs() > margin / 2.0 {
                continue;
            }
            let empty = points
                .iter()
                .enumerate()
                .all(|(k, q)| k == i || k == j || q.distance(&center) >= radius - 1e-12);
            if empty {
                return false;
            }
        }
    }
    true
}

/// A 2ε-chained random walk of up to `n` points inside `[lo, hi]²`.
pub fn chained_cluster(rng: &mut ChaCha8Rng, n: usize, epsilon: f64, lo: f64, hi: f64, margin: f64) -> Vec<Point> {
    let start = Point::new(rng.random_range(lo..hi), rng.random_range(lo..hi));
    grow_walk(rng, vec![start], n, (0.3, 1.95), epsilon, lo, hi, margin)
}

/// Extends `points` by random steps with lengths in `steps` (units of ε).
#[allow(clippy::too_many_arguments)]
fn grow_walk(
    rng: &mut ChaCha8Rng,
    mut points: Vec<Point>,
    n: usize,
    steps: (f64, f64),
    epsilon: f64,
    lo: f64,
    hi: f64,
    margin: f64,
) -> Vec<Point> {
    let mut attempts = 0;
    while points.len() < n && attempts < 200 * n {
        attempts += 1;
        let from = points[rng.random_range(0..points.len())];
        let r = rng.random_range(steps.0 * epsilon..steps.1 * epsilon);
        let p = Point::polar(from, r, rng.random_range(0.0..TAU));
        if p.x < lo || p.x > hi || p.y < lo || p.y > hi {
            continue;
        }
        if admissible(&points, p, epsilon, margin) {
            points.push(p);
        }
    }
    points
}

/// A closed loop of admissible points around `center`, or `None` if a gap
/// could not be bridged.
fn admissible_ring(rng: &mut ChaCha8Rng, center: Point, radius: f64, epsilon: f64, margin: f64) -> Option<Vec<Point>> {
    let k = ((TAU * radius / (1.5 * epsilon)).ceil() as usize).max(5);
    let phase = rng.random_range(0.0..TAU);
    let mut points: Vec<Point> = Vec::with_capacity(k);
    for i in 0..k {
        let t = phase + i as f64 * TAU / k as f64;
        let placed = (0..50).find_map(|_| {
            let p = Point::polar(
                center,
                radius + rng.random_range(-0.2..0.2) * epsilon,
                t + rng.random_range(-0.1..0.1),
            );
            admissible(&points, p, epsilon, margin).then_some(p)
        })?;
        points.push(placed);
    }
    Some(points)
}
#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub epsilon: f64,
    pub a: PointSet,
}

impl Instance {
    pub fn h(&self) -> f64 {
        self.epsilon / 50.0
    }
}

/// Random 2ε-chained sets in `[0,10]²` with ε in `[0.3, 2]` and up to 50
/// points, filtered away from tangencies the raster oracle cannot resolve.
/// Seeds cycle through dense walks, sparse walks and rings with spurs, the
/// latter two producing bounded faces.
pub fn chained_instance(seed: u64) -> Instance {
    let mut rng = rng(seed);
    loop {
        let epsilon: f64 = rng.random_range(0.3..2.0);
        let margin = 10.0 * epsilon / 50.0;
        let points = match seed % 3 {
            0 => {
                let n = rng.random_range(1..=50);
                chained_cluster(&mut rng, n, epsilon, 0.0, 10.0, margin)
            }
            1 => {
                let n = rng.random_range(10..=50);
                let start = Point::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
                grow_walk(&mut rng, vec![start], n, (1.3, 1.95), epsilon, 0.0, 10.0, margin)
            }
            _ => {
                let radius = rng.random_range(1.2 * epsilon..(2.5 * epsilon).max(1.3 * epsilon).min(4.5));
                let center = Point::new(5.0, 5.0);
                let Some(ring) = admissible_ring(&mut rng, center, radius, epsilon, margin) else {
                    continue;
                };
                let n = (ring.len() + rng.random_range(0..=10)).min(50);
                grow_walk(&mut rng, ring, n, (0.5, 1.95), epsilon, 0.0, 10.0, margin)
            }
        };
        let a = PointSet::new(points).unwrap();
        if is_chained(&a, 2.0 * epsilon).unwrap() {
            return Instance { seed, epsilon, a };
        }
    }
}

/// A small cluster around `center` of radius `spread`.
pub fn small_cluster(rng: &mut ChaCha8Rng, center: Point, spread: f64) -> PointSet {
    let extra = rng.random_range(0..=4);
    let mut points = vec![center];
    for _ in 0..extra {
        points.push(Point::polar(
            center,
            rng.random_range(0.0..spread),
            rng.random_range(0.0..TAU),
        ));
    }
    PointSet::new(points).unwrap()
}

#[derive(Debug, Clone)]
pub struct SeparationInstance {
    pub seed: u64,
    pub epsilon: f64,
    pub a: PointSet,
    pub b: PointSet,
    /// Whether B was placed in the hole of a ring-shaped A.
    pub in_hole: bool,
}

/// A ring of points around `center`, chained at 2ε with a random jitter.
fn ring(rng: &mut ChaCha8Rng, center: Point, radius: f64, epsilon: f64) -> Vec<Point> {
    let spacing = rng.random_range(0.5 * epsilon..1.4 * epsilon);
    let k = ((TAU * radius / spacing).ceil() as usize).max(6);
    let phase = rng.random_range(0.0..TAU);
    (0..k)
        .map(|i| {
            let t = phase + i as f64 * TAU / k as f64;
            let jitter = rng.random_range(-0.1..0.1) * epsilon;
            Point::polar(center, radius + jitter, t)
        })
        .collect()
}

/// Random instances satisfying the separation hypotheses. Odd seeds put B in
/// the hole of a ring, even seeds place B outside a random cluster.
pub fn separation_instance(seed: u64) -> SeparationInstance {
    let mut r = rng(seed);
    loop {
        let epsilon: f64 = r.random_range(0.3..2.0);
        let margin = 10.0 * epsilon / 50.0;
        let in_hole = seed % 2 == 1;
        let (a, b0) = if in_hole {
            let radius = r.random_range(2.0 * epsilon..4.0 * epsilon).min(4.5);
            let center = Point::new(5.0, 5.0);
            let a = ring(&mut r, center, radius, epsilon);
            let b0 = Point::polar(center, r.random_range(0.0..0.3) * radius, r.random_range(0.0..TAU));
            (a, b0)
        } else {
            let n = r.random_range(1..=30);
            let a = chained_cluster(&mut r, n, epsilon, 0.0, 10.0, margin);
            let b0 = Point::new(r.random_range(-3.0..13.0), r.random_range(-3.0..13.0));
            (a, b0)
        };
        let a = PointSet::new(a).unwrap();
        if !is_chained(&a, 2.0 * epsilon).unwrap() {
            continue;
        }
        let d0 = a.distance_to(&b0);
        if d0 < 1.1 * epsilon + margin {
            continue;
        }
        let b = small_cluster(&mut r, b0, (d0 - epsilon) / 4.0);
        let report = check_hypotheses(&a, &b, epsilon).unwrap();
        if report.holds() {
            return SeparationInstance {
                seed,
                epsilon,
                a,
                b,
                in_hole,
            };
        }
    }
}

/// Random instances for the midway curve: A and B both ρ(A,B)-chained.
pub fn midway_instance(seed: u64) -> (PointSet, PointSet) {
    let mut s = seed;
    loop {
        let inst = separation_instance(s);
        s += 1_000_003;
        let rho = set_distance(&inst.a, &inst.b);
        if is_chained(&inst.a, rho).unwrap() && is_chained(&inst.b, rho).unwrap() {
            return (inst.a, inst.b);
        }
    }
}

/// 2 to 5 chained blocks whose pairwise distances are at least `2ε + 10h`.
pub fn multi_cluster_instance(seed: u64) -> (PointSet, f64, usize) {
    let mut r = rng(seed);
    'retry: loop {
        let epsilon: f64 = r.random_range(0.3..1.0);
        let margin = 10.0 * epsilon / 50.0;
        let blocks = r.random_range(2..=5);
        let mut clusters: Vec<Vec<Point>> = Vec::new();
        for _ in 0..blocks {
            let n = r.random_range(1..=8);
            let mut tries = 0;
            loop {
                tries += 1;
                if tries > 100 {
                    continue 'retry;
                }
                let c = chained_cluster(&mut r, n, epsilon, 0.0, 16.0, margin);
                let far = clusters.iter().all(|other| {
                    other
                        .iter()
                        .all(|q| c.iter().all(|p| p.distance(q) >= 2.0 * epsilon + margin))
                });
                if far {
                    clusters.push(c);
                    break;
                }
            }
        }
        let m = PointSet::new(clusters.concat()).unwrap();
        return (m, epsilon, blocks);
    }
}

/// Reachability closure of the strict proximity relation by repeated
/// boolean matrix squaring.
pub fn closure_components(points: &[Point], delta: f64) -> Vec<usize> {
    let n = points.len();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i == j || points[i].distance(&points[j]) < delta)
                .collect()
        })
        .collect();
    let mut steps = 1;
    while steps < n {
        let mut next = reach.clone();
        for i in 0..n {
            for j in 0..n {
                if !next[i][j] {
                    next[i][j] = (0..n).any(|k| reach[i][k] && reach[k][j]);
                }
            }
        }
        reach = next;
        steps *= 2;
    }
    // label each point by the smallest index it reaches
    (0..n).map(|i| (0..n).find(|&j| reach[i][j]).unwrap()).collect()
}

/// Unique scratch directory under the target directory.
pub fn scratch_dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// JSON problem text for named sets.
pub fn problem_json(epsilon: Option<f64>, sets: &[(&str, &PointSet)]) -> String {
    let sets: serde_json::Map<String, serde_json::Value> = sets
        .iter()
        .map(|(name, s)| {
            let coords: Vec<[f64; 2]> = s.iter().map(|p| [p.x, p.y]).collect();
            (name.to_string(), serde_json::json!(coords))
        })
        .collect();
    let mut doc = serde_json::json!({ "sets": sets });
    if let Some(eps) = epsilon {
        doc["epsilon"] = serde_json::json!(eps);
    }
    doc.to_string()
}

/// Minimal structural XML check: balanced, properly nested tags.
pub fn well_formed_xml(text: &str) -> Result<(), String> {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('<') {
        let close = rest[open..].find('>').ok_or("unterminated tag")? + open;
        let tag = &rest[open + 1..close];
        rest = &rest[close + 1..];
        if tag.starts_with('?') || tag.starts_with('!') {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some(top) if top == name.trim() => {}
                other => return Err(format!("closing </{name}> does not match {other:?}")),
            }
        } else if !tag.ends_with('/') {
            let name = tag.split_whitespace().next().ok_or("empty tag")?;
            stack.push(name.to_string());
        }
        if !tag.matches('"').count().is_multiple_of(2) {
            return Err(format!("unbalanced quotes in <{tag}>"));
        }
    }
    if stack.is_empty() {
        Ok(())
    } else {
        Err(format!("unclosed tags {stack:?}"))
    }
}

/// Raster oracle for the sides of a curve: labels of the 4-connected
/// regions of lattice cells in `[lo, hi]` farther than `wall` from `curve`.
pub fn curve_regions(curve: &ArcCycle, lo: Point, hi: Point, h: f64, wall: f64) -> impl Fn(&Point) -> Option<usize> {
    let w = ((hi.x - lo.x) / h).ceil() as usize + 1;
    let ht = ((hi.y - lo.y) / h).ceil() as usize + 1;
    let center = move |i: usize, j: usize| Point::new(lo.x + i as f64 * h, lo.y + j as f64 * h);
    let open: Vec<bool> = (0..w * ht)
        .map(|k| curve.distance_to(&center(k % w, k / w)) > wall)
        .collect();
    let mut label = vec![usize::MAX; w * ht];
    let mut next = 0;
    for s in 0..w * ht {
        if !open[s] || label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(k) = queue.pop_front() {
            let (i, j) = (k % w, k / w);
            let mut near = vec![];
            if i > 0 {
                near.push(k - 1);
            }
            if i + 1 < w {
                near.push(k + 1);
            }
            if j > 0 {
                near.push(k - w);
            }
            if j + 1 < ht {
                near.push(k + w);
            }
            for n in near {
                if open[n] && label[n] == usize::MAX {
                    label[n] = next;
                    queue.push_back(n);
                }
            }
        }
        next += 1;
    }
    move |q: &Point| {
        let i = ((q.x - lo.x) / h).round() as usize;
        let j = ((q.y - lo.y) / h).round() as usize;
        let l = label[j * w + i];
        (l != usize::MAX).then_some(l)
    }
}

/// Write `text` to `dir/name` and return the path as a string.
pub fn write_problem(dir: &std::path::Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// Run the binary; returns the exit code, stdout and stderr.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_equidistant"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
