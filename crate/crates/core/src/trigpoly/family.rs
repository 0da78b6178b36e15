use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::DiagonalRecord;
use crate::geometry::{kite_path, Combinatorics, KiteVertex, TriangleShape};
use crate::partitions::GoodTriple;

use super::symbolic::signed_area;
use super::{area_polynomial, symbolic_unfold_sequence, SymbolicPoint, TrigPoly, TrigPolyError};

/// Which kite vertices may serve as triangle corners in a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexChoice {
    /// Any of the four kite vertices.
    All,
    /// Only the α- and β-vertices.
    DiagonalEndpoints,
}

impl VertexChoice {
    fn options(self) -> &'static [KiteVertex] {
        match self {
            VertexChoice::All => &KiteVertex::ALL,
            VertexChoice::DiagonalEndpoints => &[KiteVertex::Alpha, KiteVertex::Beta],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyConfig {
    /// Largest kite count of any unfolding used.
    pub kites: usize,
    /// Number of random triples drawn.
    pub count: usize,
    pub seed: u64,
    pub vertex_choice: VertexChoice,
}

/// Area polynomials of `count` random point triples, each point the chosen
/// vertex of the last kite of a random unfolding with at most `kites` kites.
/// Duplicates are merged and the result is sorted.
pub fn family_generate(cfg: &FamilyConfig) -> Vec<TrigPoly> {
    let kites = cfg.kites.max(1);
    let set: BTreeSet<TrigPoly> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let mut point = || {
                let len = rng.random_range(0..kites);
                let comb = Combinatorics::random(len, &mut rng);
                let opts = cfg.vertex_choice.options();
                let v = opts[rng.random_range(0..opts.len())];
                symbolic_unfold_sequence(&comb)
                    .pop()
                    .expect("nonempty")
                    .vertex(v)
                    .clone()
            };
            let (p, q, r) = (point(), point(), point());
            area_polynomial(&p, &q, &r)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    set.into_iter().collect()
}

/// `ln |F| / c`, the growth rate a family of size `size` implies.
pub fn family_size_exponent(size: usize, kites: usize) -> f64 {
    if size == 0 || kites == 0 {
        return 0.0;
    }
    (size as f64).ln() / kites as f64
}

/// Area polynomial of the unfolded endpoints of a good triple's diagonals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleArea {
    pub triple: GoodTriple,
    pub polynomial: TrigPoly,
    /// Largest kite count among the three unfoldings.
    pub kites: usize,
    /// `A(α, β)` at the shape's angles.
    pub value: f64,
    /// Signed area of the numeric endpoints times `sin²(α+β)`.
    pub numeric: f64,
}

pub fn good_triple_area(
    shape: &TriangleShape,
    records: &[DiagonalRecord],
    triple: &GoodTriple,
) -> Result<TripleArea, TrigPolyError> {
    let find = |x: f64, idx: usize| {
        records
            .iter()
            .find(|r| r.direction == x && r.reflections == idx)
            .ok_or_else(|| TrigPolyError::UnknownDiagonal(format!("direction {x} index {idx}")))
    };
    let recs = [
        find(triple.x_p, triple.p)?,
        find(triple.x_q, triple.q)?,
        find(triple.x_r, triple.r)?,
    ];
    let points: Vec<SymbolicPoint> = recs
        .iter()
        .map(|r| {
            let path = kite_path(&r.edges.0);
            let (kite, slot) = path.slot(r.edges.len(), r.end_vertex);
            symbolic_unfold_sequence(&path.combinatorics)[kite]
                .vertex(slot)
                .clone()
        })
        .collect();
    let polynomial = area_polynomial(&points[0], &points[1], &points[2]);
    let (a, b) = (shape.alpha(), shape.beta());
    let s2 = (a + b).sin().powi(2);
    Ok(TripleArea {
        triple: *triple,
        kites: points.iter().map(|p| p.kites).max().unwrap_or(1),
        value: polynomial.eval(a, b),
        numeric: signed_area(recs[0].endpoint, recs[1].endpoint, recs[2].endpoint) * s2,
        polynomial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_is_empty() {
        let cfg = FamilyConfig {
            kites: 3,
            count: 0,
            seed: 1,
            vertex_choice: VertexChoice::All,
        };
        assert!(family_generate(&cfg).is_empty());
    }

    #[test]
    fn deterministic_and_bounded() {
        let cfg = FamilyConfig {
            kites: 4,
            count: 40,
            seed: 9,
            vertex_choice: VertexChoice::All,
        };
        let f = family_generate(&cfg);
        assert_eq!(f, family_generate(&cfg));
        assert!(!f.is_empty() && f.len() <= 40);
        assert!(f.iter().all(|p| p.degree().unwrap_or(0) <= 16));
    }
}
