//! Physical ray tracing inside the fixed triangle, used to validate records.

use serde::{Deserialize, Serialize};

use crate::geometry::{billiard_step, circular_distance, sub, TriangleShape, Vertex};
use crate::real::{Ext, Real};

use super::EnumerationError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TraceOutcome {
    /// The ray arrived at `vertex` after `step` reflections.
    Hit { vertex: Vertex, step: usize },
    /// No vertex was met through `reflections` reflections.
    Survived { reflections: usize },
}

enum Raw {
    Near {
        vertex: Vertex,
        step: usize,
        distance: f64,
    },
    Clear {
        reflections: usize,
    },
}

/// Follows the billiard orbit leaving `start` in absolute direction
/// `direction`, checking each arrival at the boundary (after `0..=max`
/// reflections) for a vertex within `tol`. Candidate hits are confirmed by an
/// identical trace in 128-bit arithmetic.
pub fn trace_ray(
    shape: &TriangleShape,
    start: Vertex,
    direction: f64,
    max_reflections: usize,
    tol: f64,
) -> Result<TraceOutcome, EnumerationError> {
    let (lo, hi) = shape.sector(start);
    let [x, y] = start.others();
    // sector-boundary directions run along a side into the neighbouring vertex
    let lo_gap = circular_distance(direction, lo);
    let hi_gap = circular_distance(direction, hi);
    let inside = crate::geometry::wrap_angle(direction - lo) < hi - lo;
    if lo_gap < tol || hi_gap < tol {
        let vertices = shape.vertices();
        let o = vertices[start.index()];
        let ang = |v: Vertex| {
            let d = sub(&vertices[v.index()], &o);
            d[1].atan2(d[0])
        };
        let vertex = if circular_distance(ang(x), direction) < circular_distance(ang(y), direction)
        {
            x
        } else {
            y
        };
        return Err(EnumerationError::AmbiguousHit {
            step: 0,
            vertex,
            distance: lo_gap.min(hi_gap),
        });
    }
    if !inside {
        return Err(EnumerationError::OutsideSector {
            vertex: start,
            direction,
        });
    }
    match run::<f64>(shape, start, direction, max_reflections, tol) {
        Raw::Clear { reflections } => Ok(TraceOutcome::Survived { reflections }),
        Raw::Near {
            vertex,
            step,
            distance,
        } => match run::<Ext>(shape, start, direction, step, tol) {
            Raw::Near {
                vertex: v2,
                step: s2,
                ..
            } if v2 == vertex && s2 == step => Ok(TraceOutcome::Hit { vertex, step }),
            _ => Err(EnumerationError::AmbiguousHit {
                step,
                vertex,
                distance,
            }),
        },
    }
}

fn run<R: Real>(shape: &TriangleShape, start: Vertex, direction: f64, max: usize, tol: f64) -> Raw {
    let verts = shape.vertices_in::<R>();
    let mut pos = verts[start.index()].clone();
    let (s, c) = R::from_f64(direction).sin_cos();
    let mut dir = [c, s];
    let mut edge = None;
    let tol_r = R::from_f64(tol);
    for step in 0..=max {
        let Some(hop) = billiard_step(&verts, &pos, &dir, edge) else {
            return Raw::Clear { reflections: step };
        };
        let [u, w] = hop.edge.others();
        for v in [u, w] {
            let d = crate::geometry::norm(&sub(&hop.point, &verts[v.index()]));
            if d < tol_r {
                return Raw::Near {
                    vertex: v,
                    step,
                    distance: d.to_f64(),
                };
            }
        }
        if step == max {
            break;
        }
        let n = crate::geometry::norm(&hop.reflected);
        dir = [
            hop.reflected[0].clone() / n.clone(),
            hop.reflected[1].clone() / n,
        ];
        pos = hop.point;
        edge = Some(hop.edge);
    }
    Raw::Clear { reflections: max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_diagonals, PrecisionConfig};
    use crate::geometry::make_triangle;

    #[test]
    fn along_a_side_is_ambiguous() {
        let t = make_triangle(0.8, 1.1, 0.05).unwrap();
        let err = trace_ray(&t, Vertex::A, 0.0, 5, 1e-9).unwrap_err();
        assert!(matches!(
            err,
            EnumerationError::AmbiguousHit {
                step: 0,
                vertex: Vertex::B,
                ..
            }
        ));
        let err = trace_ray(&t, Vertex::A, 0.8, 5, 1e-9).unwrap_err();
        assert!(matches!(
            err,
            EnumerationError::AmbiguousHit {
                vertex: Vertex::C,
                ..
            }
        ));
    }

    #[test]
    fn outside_sector_rejected() {
        let t = make_triangle(0.8, 1.1, 0.05).unwrap();
        assert!(matches!(
            trace_ray(&t, Vertex::A, 2.0, 5, 1e-9),
            Err(EnumerationError::OutsideSector { .. })
        ));
    }

    #[test]
    fn records_retrace_to_their_endpoint() {
        let t = make_triangle(0.8, 1.1, 0.05).unwrap();
        for v in Vertex::ALL {
            let e = enumerate_diagonals(&t, v, 9, &PrecisionConfig::default()).unwrap();
            assert!(!e.records.is_empty());
            for r in &e.records {
                let out = trace_ray(&t, v, r.direction, r.reflections, 1e-8).unwrap();
                assert_eq!(
                    out,
                    TraceOutcome::Hit {
                        vertex: r.end_vertex,
                        step: r.reflections
                    },
                    "{r:?}"
                );
            }
        }
    }

    #[test]
    fn interval_midpoints_survive() {
        let t = make_triangle(0.8, 1.1, 0.05).unwrap();
        let n = 8;
        for v in Vertex::ALL {
            let e = enumerate_diagonals(&t, v, n, &PrecisionConfig::default()).unwrap();
            let (lo, hi) = t.sector(v);
            let mut cuts: Vec<f64> = vec![lo];
            cuts.extend(e.records.iter().map(|r| r.direction));
            cuts.push(hi);
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let out = trace_ray(&t, v, mid, n, 1e-10).unwrap();
                assert_eq!(out, TraceOutcome::Survived { reflections: n });
            }
        }
    }
}
