use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::Vertex;

use super::{DiagonalRecord, EnumerationError};

/// What a [`ComplexityTable`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "vertex")]
pub enum CountingConvention {
    /// Undirected diagonals between any vertices, each counted once.
    Undirected,
    /// Directed diagonals leaving one vertex (cutting points of its sector).
    PerVertex(Vertex),
    /// Hand-built table, exempt from the `P_0 = 0` rule.
    Synthetic,
}

/// Cumulative counts `P_0, …, P_{n_max}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityTable {
    counts: Vec<u64>,
    convention: CountingConvention,
}

impl ComplexityTable {
    pub fn new(counts: Vec<u64>, convention: CountingConvention) -> Result<Self, EnumerationError> {
        if let Some(n) = counts.windows(2).position(|w| w[1] < w[0]) {
            return Err(EnumerationError::NotMonotone(n + 1));
        }
        if convention != CountingConvention::Synthetic && counts.first().is_some_and(|&c| c != 0) {
            return Err(EnumerationError::NonzeroBase);
        }
        Ok(ComplexityTable { counts, convention })
    }

    /// Synthetic table from explicit values; panics on a decreasing sequence.
    pub fn synthetic(counts: Vec<u64>) -> Self {
        Self::new(counts, CountingConvention::Synthetic)
            .expect("synthetic table must be nondecreasing")
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn convention(&self) -> CountingConvention {
        self.convention
    }

    /// `P_n`, if the table reaches `n`.
    pub fn get(&self, n: usize) -> Option<u64> {
        self.counts.get(n).copied()
    }

    /// Largest `n` covered; `None` for an empty table.
    pub fn n_max(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn prefix(&self, n: usize) -> ComplexityTable {
        ComplexityTable {
            counts: self.counts[..(n + 1).min(self.counts.len())].to_vec(),
            convention: self.convention,
        }
    }

    /// Checks `P_n ≤ k · 3^n`, the count of all side sequences from `k`
    /// starting vertices.
    pub fn within_trivial_bound(&self) -> bool {
        let k = match self.convention {
            CountingConvention::PerVertex(_) => 1.0,
            _ => 3.0,
        };
        self.counts
            .iter()
            .enumerate()
            .all(|(n, &p)| (p as f64) <= k * 3f64.powi(n as i32))
    }
}

/// Undirected global table from per-vertex record sets of the same run.
/// A diagonal found from both of its endpoints is counted once.
pub fn complexity_table<'a, I>(record_sets: I, n_max: usize) -> ComplexityTable
where
    I: IntoIterator<Item = &'a [DiagonalRecord]>,
{
    let mut seen = BTreeSet::new();
    let mut per_length = vec![0u64; n_max + 1];
    for set in record_sets {
        for r in set {
            if r.reflections == 0 || r.reflections > n_max {
                continue;
            }
            if seen.insert(r.canonical_key()) {
                per_length[r.reflections] += 1;
            }
        }
    }
    cumulative(per_length, CountingConvention::Undirected)
}

/// Directed table of the diagonals leaving `vertex`.
pub fn per_vertex_table(
    records: &[DiagonalRecord],
    vertex: Vertex,
    n_max: usize,
) -> ComplexityTable {
    let mut per_length = vec![0u64; n_max + 1];
    for r in records.iter().filter(|r| r.start_vertex == vertex) {
        if r.reflections >= 1 && r.reflections <= n_max {
            per_length[r.reflections] += 1;
        }
    }
    cumulative(per_length, CountingConvention::PerVertex(vertex))
}

fn cumulative(per_length: Vec<u64>, convention: CountingConvention) -> ComplexityTable {
    let counts = per_length
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    ComplexityTable { counts, convention }
}
