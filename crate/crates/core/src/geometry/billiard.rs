use super::{cross, dot, sub, Vertex};
use crate::real::Real;

/// Result of flying a ray across the fixed triangle to the next side.
#[derive(Debug, Clone)]
pub struct BilliardStep<R> {
    pub point: [R; 2],
    /// Side hit, named by its opposite vertex.
    pub edge: Vertex,
    /// Position along the side from its first endpoint (`0`) to its second (`1`).
    pub edge_param: R,
    /// Distance travelled.
    pub length: R,
    /// Direction after the specular reflection.
    pub reflected: [R; 2],
}

/// Advances a billiard ray inside the triangle `verts` from `pos` along unit
/// direction `dir`, ignoring the side the ray currently sits on.
///
/// Returns `None` only for a degenerate ray that meets no side ahead of it.
pub fn billiard_step<R: Real>(
    verts: &[[R; 2]; 3],
    pos: &[R; 2],
    dir: &[R; 2],
    current_edge: Option<Vertex>,
) -> Option<BilliardStep<R>> {
    let zero = R::zero();
    let one = R::from_f64(1.0);
    let mut best: Option<(R, R, Vertex)> = None;
    let mut best_violation: Option<(R, R, R, Vertex)> = None;
    for edge in Vertex::ALL {
        if Some(edge) == current_edge {
            continue;
        }
        let [u, w] = edge.others();
        let (u, w) = (&verts[u.index()], &verts[w.index()]);
        let e = sub(w, u);
        let denom = cross(dir, &e);
        if denom.abs() < R::from_f64(1e-300) {
            continue;
        }
        let to_u = sub(u, pos);
        let t = cross(&to_u, &e) / denom.clone();
        let s = cross(&to_u, dir) / denom;
        // Rays leaving a vertex touch its two sides at t = 0.
        if t <= R::from_f64(1e-14) {
            continue;
        }
        if s >= zero && s <= one {
            if best.as_ref().is_none_or(|(bt, _, _)| t < *bt) {
                best = Some((t, s, edge));
            }
        } else {
            let viol = if s < zero {
                -s.clone()
            } else {
                s.clone() - one.clone()
            };
            if best_violation.as_ref().is_none_or(|(v, _, _, _)| viol < *v) {
                best_violation = Some((viol, t, s, edge));
            }
        }
    }
    // Rounding can push an exit through a corner just outside both sides.
    let (t, s, edge) = match best {
        Some(b) => b,
        None => {
            let (_, t, s, edge) = best_violation?;
            (t, s, edge)
        }
    };
    let point = [
        pos[0].clone() + t.clone() * dir[0].clone(),
        pos[1].clone() + t.clone() * dir[1].clone(),
    ];
    let [u, w] = edge.others();
    let e = sub(&verts[w.index()], &verts[u.index()]);
    let k = R::from_f64(2.0) * dot(dir, &e) / dot(&e, &e);
    let reflected = [
        k.clone() * e[0].clone() - dir[0].clone(),
        k * e[1].clone() - dir[1].clone(),
    ];
    Some(BilliardStep {
        point,
        edge,
        edge_param: s,
        length: t,
        reflected,
    })
}
