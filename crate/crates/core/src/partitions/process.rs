use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Vertex;

use super::{CuttingPoint, PartitionSequence};

/// A random partition sequence of `(0, 1)` that obeys the one-point-per-gap
/// rule by construction.
///
/// Levels are added with insertion probability `warm_fill` per gap until at
/// least `base_points` points exist (that level is returned as `n`), then
/// `extra_levels` more levels are added with probability `fill`. New points
/// land uniformly in the middle 80% of their gap.
pub fn random_process_sequence(
    seed: u64,
    base_points: usize,
    warm_fill: f64,
    extra_levels: usize,
    fill: f64,
) -> (PartitionSequence, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<CuttingPoint> = Vec::new();
    let mut level = 0;
    let grow = |points: &mut Vec<CuttingPoint>, level: usize, p: f64, rng: &mut ChaCha8Rng| {
        let mut edges = vec![0.0];
        edges.extend(points.iter().map(|c| c.angle));
        edges.push(1.0);
        for w in edges.windows(2) {
            if rng.random_bool(p) {
                let t = rng.random_range(0.1..0.9);
                points.push(CuttingPoint {
                    angle: w[0] + t * (w[1] - w[0]),
                    index: level,
                });
            }
        }
        points.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    };
    while points.len() < base_points {
        level += 1;
        grow(&mut points, level, warm_fill, &mut rng);
    }
    let n = level;
    for _ in 0..extra_levels {
        level += 1;
        grow(&mut points, level, fill, &mut rng);
    }
    let seq = PartitionSequence::from_points(Vertex::A, (0.0, 1.0), level.max(1), points, 0.0)
        .expect("generated points lie inside (0, 1)");
    (seq, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_sequences_obey_the_gap_rule() {
        for seed in 0..20 {
            let (s, n) = random_process_sequence(seed, 40, 0.6, 4, 0.95);
            assert!(s.count(n) >= 40);
            assert!(s.property_one_violations().is_empty());
            assert_eq!(s.max_index(), n + 4);
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        assert_eq!(
            random_process_sequence(7, 30, 0.5, 3, 0.9),
            random_process_sequence(7, 30, 0.5, 3, 0.9)
        );
    }
}
