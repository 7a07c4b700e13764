//! Problem input, curve documents and SVG output.

mod document;
mod svg;

pub use document::{ArcEntry, CurveDocument, CurveEntry, FaceInfo, Metadata, TOOL_VERSION};
pub use svg::{emit_svg, SvgLayer};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, Point, PointSet, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

impl ProblemError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ProblemError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isect: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_res: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub force: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    sets: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    options: Options,
}

/// A validated problem: named nonempty point sets, an optional ε and options.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub epsilon: Option<f64>,
    pub sets: BTreeMap<String, PointSet>,
    pub options: Options,
}

/// A parsed problem with the number of exact duplicate points dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub spec: ProblemSpec,
    pub duplicates: usize,
}

fn check_positive(field: &str, value: f64) -> Result<(), ProblemError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ProblemError::invalid(
            field,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

fn point_set(name: &str, points: Vec<Point>) -> Result<(PointSet, usize), ProblemError> {
    PointSet::with_duplicate_count(points).map_err(|e| match e {
        GeometryError::EmptySet => ProblemError::invalid(format!("sets.{name}"), "set is empty"),
        GeometryError::NonFinite { index } => {
            ProblemError::invalid(format!("sets.{name}[{index}]"), "coordinate is not finite")
        }
        other => ProblemError::invalid(format!("sets.{name}"), other.to_string()),
    })
}

/// Parse a problem from its JSON text form.
pub fn parse_problem(text: &str) -> Result<Parsed, ProblemError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| ProblemError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut sets = BTreeMap::new();
    let mut duplicates = 0;
    for (name, coords) in raw.sets {
        let (set, dups) = point_set(&name, coords.into_iter().map(Point::from).collect())?;
        duplicates += dups;
        sets.insert(name, set);
    }
    let spec = ProblemSpec {
        epsilon: raw.epsilon,
        sets,
        options: raw.options,
    };
    spec.validate()?;
    Ok(Parsed { spec, duplicates })
}

/// Parse two-column numeric CSV. A non-numeric first row is taken as a header.
pub fn parse_csv_points(text: &str) -> Result<Vec<Point>, ProblemError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            ProblemError::Parse {
                line,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(k + 1, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(ProblemError::Parse {
                line,
                column: 0,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let parsed: Vec<Result<f64, _>> = record.iter().map(str::parse::<f64>).collect();
        match (&parsed[0], &parsed[1]) {
            (Ok(x), Ok(y)) => points.push(Point::new(*x, *y)),
            _ if k == 0 => continue,
            _ => {
                let column = if parsed[0].is_err() { 1 } else { 2 };
                return Err(ProblemError::Parse {
                    line,
                    column,
                    message: format!("field {column} is not a number"),
                });
            }
        }
    }
    Ok(points)
}

impl ProblemSpec {
    /// Build a problem from per-set point lists, e.g. read from CSV files.
    pub fn from_sets(
        epsilon: Option<f64>,
        sets: impl IntoIterator<Item = (String, Vec<Point>)>,
        options: Options,
    ) -> Result<Parsed, ProblemError> {
        let mut out = BTreeMap::new();
        let mut duplicates = 0;
        for (name, points) in sets {
            let (set, dups) = point_set(&name, points)?;
            duplicates += dups;
            out.insert(name, set);
        }
        let spec = ProblemSpec {
            epsilon,
            sets: out,
            options,
        };
        spec.validate()?;
        Ok(Parsed { spec, duplicates })
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        if let Some(eps) = self.epsilon {
            check_positive("epsilon", eps)?;
        }
        if self.sets.is_empty() {
            return Err(ProblemError::invalid("sets", "no point sets given"));
        }
        if let Some(name) = self.sets.keys().find(|n| n.is_empty()) {
            return Err(ProblemError::invalid(format!("sets.{name}"), "set name is empty"));
        }
        if let Some(h) = self.options.grid_res {
            check_positive("options.grid_res", h)?;
        }
        self.tolerance()?;
        Ok(())
    }

    pub fn set(&self, name: &str) -> Result<&PointSet, ProblemError> {
        self.sets
            .get(name)
            .ok_or_else(|| ProblemError::invalid(format!("sets.{name}"), "no such set"))
    }

    pub fn epsilon(&self) -> Result<f64, ProblemError> {
        self.epsilon.ok_or_else(|| ProblemError::invalid("epsilon", "required"))
    }

    /// Union of all sets.
    pub fn union(&self) -> PointSet {
        PointSet::new(self.sets.values().flat_map(|s| s.iter().copied())).expect("sets are nonempty")
    }

    /// Default tolerances with the problem's overrides and seed applied.
    pub fn tolerance(&self) -> Result<Tolerance, ProblemError> {
        let mut tol = Tolerance::default();
        if let Some(o) = &self.options.tolerance {
            tol.join = o.join.unwrap_or(tol.join);
            tol.isect = o.isect.unwrap_or(tol.isect);
            tol.dist = o.dist.unwrap_or(tol.dist);
        }
        if let Some(seed) = self.options.seed {
            tol.seed = seed;
        }
        tol.validate()
            .map_err(|e| ProblemError::invalid("options.tolerance", e.to_string()))?;
        Ok(tol)
    }

    /// JSON text that parses back to an equal problem.
    pub fn to_json(&self) -> String {
        let raw = RawProblem {
            epsilon: self.epsilon,
            sets: self
                .sets
                .iter()
                .map(|(name, set)| (name.clone(), set.iter().map(|p| [p.x, p.y]).collect()))
                .collect(),
            options: self.options.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("problem serializes")
    }
}
