//! Set distance, δ-chainedness and the hypothesis checks that gate the
//! separation operations.
//!
//! Two points of a set are δ-chained when a finite chain of points of the set
//! joins them with every step strictly shorter than δ. Distances are compared
//! exactly; a step of length exactly δ does not chain.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Point, PointSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("chain threshold must be positive and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Partition of a point set into its δ-chained components.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPartition {
    pub threshold: f64,
    /// Blocks ordered by their lexicographically smallest point.
    pub blocks: Vec<PointSet>,
    /// Block index of each point of the input, in input order.
    pub block_of: Vec<usize>,
}

impl ChainPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Minimum distance between the two sets.
pub fn set_distance(a: &PointSet, b: &PointSet) -> f64 {
    closest_pair(a, b).2
}

/// A pair realizing the set distance, together with that distance.
/// Ties are broken by the first pair in lexicographic scan order.
pub fn closest_pair(a: &PointSet, b: &PointSet) -> (Point, Point, f64) {
    let mut best = (a.points()[0], b.points()[0], f64::INFINITY);
    for p in a {
        for q in b {
            let d = p.distance(q);
            if d < best.2 {
                best = (*p, *q, d);
            }
        }
    }
    best
}

fn check_threshold(delta: f64) -> Result<(), ChainError> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(ChainError::InvalidThreshold(delta))
    }
}

/// δ-chained components of `m`: connected components of the graph joining
/// points at distance strictly below `delta`.
pub fn chained_components(m: &PointSet, delta: f64) -> Result<ChainPartition, ChainError> {
    check_threshold(delta)?;
    let pts = m.points();
    let n = pts.len();
    let mut dsu = DisjointSet::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].distance(&pts[j]) < delta {
                dsu.union(i, j);
            }
        }
    }
    // points are sorted, so first appearance order is the order of smallest members
    let mut block_of_root = vec![usize::MAX; n];
    let mut block_of = Vec::with_capacity(n);
    let mut members: Vec<Vec<Point>> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let root = dsu.find(i);
        if block_of_root[root] == usize::MAX {
            block_of_root[root] = members.len();
            members.push(Vec::new());
        }
        let block = block_of_root[root];
        block_of.push(block);
        members[block].push(*p);
    }
    let blocks = members
        .into_iter()
        .map(|pts| PointSet::new(pts).expect("blocks are nonempty subsets of a valid set"))
        .collect();
    Ok(ChainPartition {
        threshold: delta,
        blocks,
        block_of,
    })
}

pub fn is_chained(a: &PointSet, delta: f64) -> Result<bool, ChainError> {
    Ok(chained_components(a, delta)?.len() == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SetRole {
    A,
    B,
}

impl fmt::Display for SetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRole::A => f.write_str("A"),
            SetRole::B => f.write_str("B"),
        }
    }
}

/// Which chaining threshold a hypothesis asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainClause {
    /// 2ε
    TwiceEpsilon,
    /// 2(ρ(A,B) − ε)
    TwiceGap,
    /// ρ(A,B)
    SetDistance,
}

impl fmt::Display for ChainClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainClause::TwiceEpsilon => f.write_str("2ε"),
            ChainClause::TwiceGap => f.write_str("2(ρ(A,B)−ε)"),
            ChainClause::SetDistance => f.write_str("ρ(A,B)"),
        }
    }
}

/// A failed hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DistanceNotAboveEpsilon {
        rho: f64,
        epsilon: f64,
    },
    ZeroDistance,
    NotChained {
        set: SetRole,
        clause: ChainClause,
        threshold: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DistanceNotAboveEpsilon { rho, epsilon } => {
                write!(f, "ρ(A,B) = {rho} does not exceed ε = {epsilon}")
            }
            Violation::ZeroDistance => f.write_str("ρ(A,B) = 0"),
            Violation::NotChained { set, clause, threshold } => {
                write!(f, "{set} not {clause}-chained (threshold {threshold})")
            }
        }
    }
}

/// Outcome of checking the separation hypotheses for `(A, B, ε)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub epsilon: f64,
    pub rho_ab: f64,
    /// A is 2ε-chained.
    pub a_chained: bool,
    /// B is 2(ρ(A,B) − ε)-chained; `None` when ρ(A,B) ≤ ε and the clause is moot.
    pub b_chained: Option<bool>,
    pub violations: Vec<Violation>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that ρ(A,B) > ε, A is 2ε-chained and B is 2(ρ(A,B) − ε)-chained.
pub fn check_hypotheses(a: &PointSet, b: &PointSet, epsilon: f64) -> Result<HypothesisReport, ChainError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(ChainError::InvalidEpsilon(epsilon));
    }
    let rho_ab = set_distance(a, b);
    let mut violations = Vec::new();
    if rho_ab <= epsilon {
        violations.push(Violation::DistanceNotAboveEpsilon { rho: rho_ab, epsilon });
    }
    let a_threshold = 2.0 * epsilon;
    let a_chained = is_chained(a, a_threshold)?;
    if !a_chained {
        violations.push(Violation::NotChained {
            set: SetRole::A,
            clause: ChainClause::TwiceEpsilon,
            threshold: a_threshold,
        });
    }
    let b_chained = if rho_ab > epsilon {
        let b_threshold = 2.0 * (rho_ab - epsilon);
        let chained = is_chained(b, b_threshold)?;
        if !chained {
            violations.push(Violation::NotChained {
                set: SetRole::B,
                clause: ChainClause::TwiceGap,
                threshold: b_threshold,
            });
        }
        Some(chained)
    } else {
        None
    };
    Ok(HypothesisReport {
        epsilon,
        rho_ab,
        a_chained,
        b_chained,
        violations,
    })
}
