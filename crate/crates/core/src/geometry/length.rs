use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{billiard_step, GeometryError, TriangleShape};

/// A traced orbit piece: its number of reflections and Euclidean length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub reflections: usize,
    pub length: f64,
}

/// Empirical comparability constant: the largest of `L/n` and `n/L` over
/// samples with at least `min_reflections` reflections.
pub fn length_comparability(
    samples: &[OrbitSample],
    min_reflections: usize,
) -> Result<f64, GeometryError> {
    samples
        .iter()
        .filter(|s| s.reflections >= min_reflections.max(1) && s.length > 0.0)
        .map(|s| {
            let r = s.length / s.reflections as f64;
            r.max(1.0 / r)
        })
        .reduce(f64::max)
        .ok_or(GeometryError::InsufficientData { min_reflections })
}

/// Traces `count` orbits from uniformly random interior points in uniformly
/// random directions, each for `reflections` bounces. The length runs from
/// the start point to the last bounce.
pub fn sample_orbits(
    shape: &TriangleShape,
    count: usize,
    reflections: usize,
    seed: u64,
) -> Vec<OrbitSample> {
    let v = shape.vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (mut r1, mut r2): (f64, f64) = (rng.random(), rng.random());
        if r1 + r2 > 1.0 {
            (r1, r2) = (1.0 - r1, 1.0 - r2);
        }
        let mut pos = [
            v[0][0] + r1 * (v[1][0] - v[0][0]) + r2 * (v[2][0] - v[0][0]),
            v[0][1] + r1 * (v[1][1] - v[0][1]) + r2 * (v[2][1] - v[0][1]),
        ];
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let mut dir = [theta.cos(), theta.sin()];
        let mut edge = None;
        let mut length = 0.0;
        let mut done = 0;
        while done < reflections {
            let Some(step) = billiard_step(&v, &pos, &dir, edge) else {
                break;
            };
            length += step.length;
            pos = step.point;
            let n = (step.reflected[0].powi(2) + step.reflected[1].powi(2)).sqrt();
            dir = [step.reflected[0] / n, step.reflected[1] / n];
            edge = Some(step.edge);
            done += 1;
        }
        out.push(OrbitSample {
            reflections: done,
            length,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_triangle;

    #[test]
    fn unit_segment_has_ratio_one() {
        let s = [OrbitSample {
            reflections: 1,
            length: 1.0,
        }];
        assert_eq!(length_comparability(&s, 1).unwrap(), 1.0);
    }

    #[test]
    fn empty_is_insufficient() {
        assert_eq!(
            length_comparability(&[], 10),
            Err(GeometryError::InsufficientData {
                min_reflections: 10
            })
        );
        let short = [OrbitSample {
            reflections: 3,
            length: 2.0,
        }];
        assert!(length_comparability(&short, 10).is_err());
    }

    #[test]
    fn equilateral_constant_is_finite() {
        let t = make_triangle(
            std::f64::consts::FRAC_PI_3,
            std::f64::consts::FRAC_PI_3,
            0.1,
        )
        .unwrap();
        let samples = sample_orbits(&t, 100, 50, 1);
        assert!(samples.iter().all(|s| s.reflections == 50));
        let d = length_comparability(&samples, 50).unwrap();
        assert!(d.is_finite() && d >= 1.0, "{d}");
        // deterministic
        assert_eq!(samples, sample_orbits(&t, 100, 50, 1));
    }
}
