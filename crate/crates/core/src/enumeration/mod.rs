//! Generalized diagonals: billiard orbit segments that start and end at
//! triangle vertices.
//!
//! Counting convention: a diagonal's discrete length is the number of
//! reflections strictly between its two endpoint vertices; the triangle's
//! own sides (zero reflections) are not diagonals; orbits that run into a
//! vertex stop there.

mod brute;
mod search;
mod table;
mod trace;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{Point, Vertex};

pub use brute::{brute_force_diagonals, BRUTE_FORCE_MAX_DEPTH};
pub use search::enumerate_diagonals;
pub use table::{complexity_table, per_vertex_table, ComplexityTable, CountingConvention};
pub use trace::{trace_ray, TraceOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumerationError {
    #[error("brute-force enumeration limited to depth {limit}, asked for {requested}")]
    BudgetExceeded { requested: usize, limit: usize },
    #[error("n_max must be at least 1")]
    EmptyRange,
    #[error(
        "ray passes within {distance:.3e} of vertex {vertex} at step {step} without a confirmed hit"
    )]
    AmbiguousHit {
        step: usize,
        vertex: Vertex,
        distance: f64,
    },
    #[error("direction {direction} is outside the open sector at vertex {vertex}")]
    OutsideSector { vertex: Vertex, direction: f64 },
    #[error("table is decreasing at n = {0}")]
    NotMonotone(usize),
    #[error("P_0 must be 0 for a measured table")]
    NonzeroBase,
}

/// Tolerances for deciding whether a ray meets a vertex image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Hit tolerance per unit of corridor depth.
    pub hit_tolerance: f64,
    /// Upper edge of the ambiguity band re-tested at extended precision.
    pub safe_tolerance: f64,
    /// Re-test ambiguous candidates with 128-bit arithmetic.
    pub extended: bool,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            hit_tolerance: 1e-12,
            safe_tolerance: 1e-6,
            extended: true,
        }
    }
}

impl PrecisionConfig {
    /// Hit tolerance at a given corridor depth.
    pub fn tau_hit(&self, depth: usize) -> f64 {
        self.hit_tolerance * depth.max(1) as f64
    }
}

/// Sequence of sides crossed, each named by its opposite vertex. Serialized as
/// a string of letters, e.g. `"CBA"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgePath(pub Vec<Vertex>);

impl EdgePath {
    pub fn reversed(&self) -> EdgePath {
        EdgePath(self.0.iter().rev().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for EdgePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for EdgePath {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| Vertex::from_letter(c).ok_or_else(|| format!("bad edge letter {c:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(EdgePath)
    }
}

impl Serialize for EdgePath {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgePath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One generalized diagonal seen from its start vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalRecord {
    pub start_vertex: Vertex,
    pub end_vertex: Vertex,
    /// Absolute direction angle in the standard frame, inside the open sector
    /// of `start_vertex`.
    pub direction: f64,
    pub reflections: usize,
    pub geometric_length: f64,
    /// The hit vertex image in the unfolded plane.
    pub endpoint: Point,
    pub edges: EdgePath,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub precision_warning: bool,
}

/// Orientation-free identity of a diagonal: the lexicographically smaller of
/// its two traversals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalKey {
    pub from: Vertex,
    pub to: Vertex,
    pub edges: EdgePath,
}

impl DiagonalRecord {
    pub fn canonical_key(&self) -> DiagonalKey {
        let fwd = DiagonalKey {
            from: self.start_vertex,
            to: self.end_vertex,
            edges: self.edges.clone(),
        };
        let rev = DiagonalKey {
            from: self.end_vertex,
            to: self.start_vertex,
            edges: self.edges.reversed(),
        };
        fwd.min(rev)
    }

    /// Ordering used for every emitted record set.
    pub fn sort_order(a: &Self, b: &Self) -> Ordering {
        a.start_vertex
            .cmp(&b.start_vertex)
            .then(a.direction.total_cmp(&b.direction))
            .then(a.reflections.cmp(&b.reflections))
            .then_with(|| a.edges.cmp(&b.edges))
    }
}

/// A vertex-hit decision that landed in the ambiguity band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ambiguity {
    pub depth: usize,
    pub edges: EdgePath,
    pub candidate: Vertex,
    pub distance: f64,
    /// Distance recomputed at extended precision, when enabled.
    pub extended_distance: Option<f64>,
}

/// Output of [`enumerate_diagonals`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enumeration {
    pub start_vertex: Vertex,
    pub n_max: usize,
    pub records: Vec<DiagonalRecord>,
    pub ambiguities: Vec<Ambiguity>,
    pub nodes_visited: u64,
}
