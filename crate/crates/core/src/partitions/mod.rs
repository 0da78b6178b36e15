//! Indexed partitions of a vertex sector by cutting points, good-position
//! triples, and the searches built on them.
//!
//! A cutting point's index is the discrete length of its diagonal. The
//! partition at level `n` uses every point of index at most `n`.

mod lemma21;
mod process;
mod search;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{ComplexityTable, CountingConvention, DiagonalRecord};
use crate::geometry::{TriangleShape, Vertex};

pub use lemma21::{
    insertion_outcomes, verify_lemma_2_1, Lemma21Report, StartVariant, VariantReport,
};
pub use process::random_process_sequence;
pub use search::{
    find_close_good_triple, find_ratio_jump, ratio_jump_report, BlockRatio, CloseTriple,
    RatioJumpReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("cutting point {angle} lies outside the open sector ({lo}, {hi})")]
    OutsideSector { angle: f64, lo: f64, hi: f64 },
    #[error("cutting point index {index} is outside 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("table reaches n = {available}, need n = {needed}")]
    TableTooShort { needed: usize, available: usize },
    #[error("table gives P_{n} = {table} but the sequence has {points} points of index <= {n}")]
    TableMismatch { n: usize, table: u64, points: u64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error(
        "hypotheses hold for n = {n}, c = {c} but no good triple has span <= {bound:.6e} \
         (best {best:?}); the close-triple lemma fails on this data"
    )]
    SearchFailed {
        n: usize,
        c: usize,
        bound: f64,
        best: Option<f64>,
    },
    #[error("exhaustive check supports c in 1..={max}, got {c}")]
    TooManySteps { c: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuttingPoint {
    pub angle: f64,
    pub index: usize,
}

/// Two cutting points closer than the tolerance; the lower index is kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuplicateAngle {
    pub kept: CuttingPoint,
    pub dropped: CuttingPoint,
}

/// An interval of the level-`n` partition holding more than one point of
/// index `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyViolation {
    pub n: usize,
    pub interval: (f64, f64),
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSequence {
    vertex: Vertex,
    sector: (f64, f64),
    max_index: usize,
    points: Vec<CuttingPoint>,
    duplicates: Vec<DuplicateAngle>,
    tolerance: f64,
}

impl PartitionSequence {
    /// Points may come in any order; they are sorted by angle. Points closer
    /// than `tolerance` are merged, keeping the lower index.
    pub fn from_points<I>(
        vertex: Vertex,
        sector: (f64, f64),
        max_index: usize,
        points: I,
        tolerance: f64,
    ) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = CuttingPoint>,
    {
        let (lo, hi) = sector;
        let mut pts: Vec<CuttingPoint> = points.into_iter().collect();
        for p in &pts {
            if !(p.angle > lo && p.angle < hi) {
                return Err(PartitionError::OutsideSector {
                    angle: p.angle,
                    lo,
                    hi,
                });
            }
            if p.index == 0 || p.index > max_index {
                return Err(PartitionError::BadIndex {
                    index: p.index,
                    max: max_index,
                });
            }
        }
        pts.sort_by(|a, b| a.angle.total_cmp(&b.angle).then(a.index.cmp(&b.index)));
        let mut kept: Vec<CuttingPoint> = Vec::with_capacity(pts.len());
        let mut duplicates = Vec::new();
        for p in pts {
            match kept.last_mut() {
                Some(last) if p.angle - last.angle < tolerance => {
                    if p.index < last.index {
                        duplicates.push(DuplicateAngle {
                            kept: p,
                            dropped: *last,
                        });
                        *last = p;
                    } else {
                        duplicates.push(DuplicateAngle {
                            kept: *last,
                            dropped: p,
                        });
                    }
                }
                _ => kept.push(p),
            }
        }
        Ok(PartitionSequence {
            vertex,
            sector,
            max_index,
            points: kept,
            duplicates,
            tolerance,
        })
    }

    pub fn vertex(&self) -> Vertex {
        self.vertex
    }

    pub fn sector(&self) -> (f64, f64) {
        self.sector
    }

    pub fn sector_length(&self) -> f64 {
        self.sector.1 - self.sector.0
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// All cutting points, sorted by angle.
    pub fn points(&self) -> &[CuttingPoint] {
        &self.points
    }

    pub fn duplicates(&self) -> &[DuplicateAngle] {
        &self.duplicates
    }

    /// Cutting points of the level-`n` partition.
    pub fn cutting_points(&self, n: usize) -> impl Iterator<Item = &CuttingPoint> + '_ {
        self.points.iter().filter(move |p| p.index <= n)
    }

    pub fn count(&self, n: usize) -> u64 {
        self.cutting_points(n).count() as u64
    }

    /// Per-vertex counts `P_0 ..= P_max_index`.
    pub fn table(&self) -> ComplexityTable {
        let mut per = vec![0u64; self.max_index + 1];
        for p in &self.points {
            per[p.index] += 1;
        }
        let mut acc = 0;
        let counts = per
            .into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        ComplexityTable::new(counts, CountingConvention::PerVertex(self.vertex))
            .expect("cumulative counts")
    }

    /// Intervals of the level-`n` partition, left to right.
    pub fn intervals(&self, n: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut left = self.sector.0;
        for p in self.cutting_points(n) {
            out.push((left, p.angle));
            left = p.angle;
        }
        out.push((left, self.sector.1));
        out
    }

    pub fn max_interval_length(&self, n: usize) -> f64 {
        self.intervals(n)
            .iter()
            .map(|(a, b)| b - a)
            .fold(0.0, f64::max)
    }

    /// Intervals of some level `n` that receive two or more points of index
    /// `n + 1`.
    pub fn property_one_violations(&self) -> Vec<PropertyViolation> {
        let mut out = Vec::new();
        for n in 0..self.max_index {
            let mut left = self.sector.0;
            let mut count = 0;
            for p in &self.points {
                if p.index <= n {
                    if count > 1 {
                        out.push(PropertyViolation {
                            n,
                            interval: (left, p.angle),
                            count,
                        });
                    }
                    left = p.angle;
                    count = 0;
                } else if p.index == n + 1 {
                    count += 1;
                }
            }
            if count > 1 {
                out.push(PropertyViolation {
                    n,
                    interval: (left, self.sector.1),
                    count,
                });
            }
        }
        out
    }
}

/// Cutting points of `vertex` from its enumerated diagonals.
pub fn build_partition_sequence(
    shape: &TriangleShape,
    records: &[DiagonalRecord],
    vertex: Vertex,
    n_max: usize,
    tolerance: f64,
) -> Result<PartitionSequence, PartitionError> {
    let points = records
        .iter()
        .filter(|r| r.start_vertex == vertex && r.reflections <= n_max)
        .map(|r| CuttingPoint {
            angle: r.direction,
            index: r.reflections,
        });
    PartitionSequence::from_points(vertex, shape.sector(vertex), n_max, points, tolerance)
}

/// Three cutting points in good position: `p < q < r`, `x_r` strictly between
/// `x_p` and `x_q`, and no other point of index at most `r` in the open
/// interval they bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodTriple {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub x_p: f64,
    pub x_q: f64,
    pub x_r: f64,
}

impl GoodTriple {
    /// The open interval bounded by `x_p` and `x_q`.
    pub fn witness(&self) -> (f64, f64) {
        (self.x_p.min(self.x_q), self.x_p.max(self.x_q))
    }

    /// Largest pairwise distance of the three points.
    pub fn span(&self) -> f64 {
        (self.x_p - self.x_q).abs()
    }

    /// Re-checks the definition directly against every point of `seq`.
    pub fn verify(&self, seq: &PartitionSequence) -> bool {
        let present = |x: f64, i: usize| seq.points.iter().any(|c| c.angle == x && c.index == i);
        let (lo, hi) = self.witness();
        self.p < self.q
            && self.q < self.r
            && present(self.x_p, self.p)
            && present(self.x_q, self.q)
            && present(self.x_r, self.r)
            && lo < self.x_r
            && self.x_r < hi
            && seq
                .points
                .iter()
                .filter(|c| c.index <= self.r && c.angle > lo && c.angle < hi)
                .all(|c| c.angle == self.x_r && c.index == self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Every good triple with `p, q, r` in `range`.
///
/// For a point of index `r`, the only candidates for `x_p, x_q` are its
/// nearest neighbours among points of index at most `r`, so each point is the
/// middle of at most one triple.
pub fn find_good_triples(seq: &PartitionSequence, range: RangeInclusive<usize>) -> Vec<GoodTriple> {
    let (a, b) = (*range.start(), *range.end());
    let mut by_index: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for p in &seq.points {
        if p.index <= b {
            by_index.entry(p.index).or_default().push(p.angle);
        }
    }
    let mut live: BTreeMap<Key, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (&r, angles) in &by_index {
        for &x in angles {
            live.insert(Key(x), r);
        }
        if r < a {
            continue;
        }
        for &x in angles {
            let left = live.range(..Key(x)).next_back();
            let right = live.range(Key(x)..).nth(1);
            let (Some((&Key(xl), &il)), Some((&Key(xr), &ir))) = (left, right) else {
                continue;
            };
            if il >= r || ir >= r || il == ir || il < a || ir < a {
                continue;
            }
            if x - xl < seq.tolerance || xr - x < seq.tolerance {
                continue;
            }
            let ((p, x_p), (q, x_q)) = if il < ir {
                ((il, xl), (ir, xr))
            } else {
                ((ir, xr), (il, xl))
            };
            out.push(GoodTriple {
                p,
                q,
                r,
                x_p,
                x_q,
                x_r: x,
            });
        }
    }
    out.sort_by(|s, t| {
        (s.r, s.p, s.q)
            .cmp(&(t.r, t.p, t.q))
            .then(s.x_r.total_cmp(&t.x_r))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(points: &[(f64, usize)]) -> PartitionSequence {
        let max = points.iter().map(|p| p.1).max().unwrap_or(1);
        PartitionSequence::from_points(
            Vertex::A,
            (0.0, 1.0),
            max,
            points
                .iter()
                .map(|&(angle, index)| CuttingPoint { angle, index }),
            1e-12,
        )
        .unwrap()
    }

    #[test]
    fn no_points_gives_one_interval_per_level() {
        let s = seq(&[]);
        assert_eq!(s.intervals(0), vec![(0.0, 1.0)]);
        assert_eq!(s.intervals(1), vec![(0.0, 1.0)]);
        assert!(find_good_triples(&s, 1..=5).is_empty());
    }

    #[test]
    fn single_point_appears_at_its_level() {
        let s = seq(&[(0.3, 3)]);
        assert_eq!(s.intervals(2).len(), 1);
        assert_eq!(s.intervals(3), vec![(0.0, 0.3), (0.3, 1.0)]);
        assert_eq!(s.table().counts(), &[0, 0, 0, 1]);
    }

    #[test]
    fn triple_from_definition() {
        let s = seq(&[(0.5, 1), (0.2, 2), (0.35, 3)]);
        let t = find_good_triples(&s, 1..=3);
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].p, t[0].q, t[0].r), (1, 2, 3));
        assert_eq!(t[0].witness(), (0.2, 0.5));
        assert!(t[0].verify(&s));
    }

    #[test]
    fn middle_point_must_be_newest() {
        let s = seq(&[(0.2, 3), (0.45, 1), (0.7, 2)]);
        assert!(find_good_triples(&s, 1..=3).is_empty());
    }

    #[test]
    fn obstruction_by_same_index_point() {
        // two index-3 points between the same neighbours block each other
        let s = seq(&[(0.1, 1), (0.9, 2), (0.4, 3), (0.6, 3)]);
        assert!(find_good_triples(&s, 1..=3).is_empty());
    }

    #[test]
    fn range_excludes_low_neighbours() {
        let s = seq(&[(0.5, 1), (0.2, 2), (0.35, 3)]);
        assert!(find_good_triples(&s, 2..=3).is_empty());
    }

    #[test]
    fn duplicates_keep_lower_index() {
        let s = PartitionSequence::from_points(
            Vertex::B,
            (0.0, 1.0),
            5,
            [
                CuttingPoint {
                    angle: 0.5,
                    index: 4,
                },
                CuttingPoint {
                    angle: 0.5 + 1e-14,
                    index: 2,
                },
            ],
            1e-12,
        )
        .unwrap();
        assert_eq!(s.points().len(), 1);
        assert_eq!(s.points()[0].index, 2);
        assert_eq!(s.duplicates().len(), 1);
    }

    #[test]
    fn rejects_points_outside_sector() {
        let err = PartitionSequence::from_points(
            Vertex::A,
            (0.0, 1.0),
            3,
            [CuttingPoint {
                angle: 1.0,
                index: 1,
            }],
            1e-12,
        );
        assert!(matches!(err, Err(PartitionError::OutsideSector { .. })));
    }

    #[test]
    fn property_one_audit_flags_crowded_interval() {
        let s = seq(&[(0.5, 1), (0.2, 2), (0.3, 2)]);
        let v = s.property_one_violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].n, 1);
        assert_eq!(v[0].count, 2);
        assert!(seq(&[(0.5, 1), (0.2, 2), (0.7, 2)])
            .property_one_violations()
            .is_empty());
    }
}
