//! Unpruned oracle: every sequence of side crossings is unfolded and its final
//! apex tested for visibility through the whole corridor.

use crate::geometry::{cross, reflect_point, sub, wrap_angle, TriangleShape, Vertex};

use super::{DiagonalRecord, EdgePath, EnumerationError, PrecisionConfig};

/// Largest depth the oracle accepts (the tree has `3^n` leaves).
pub const BRUTE_FORCE_MAX_DEPTH: usize = 12;

type Pt = [f64; 2];

pub fn brute_force_diagonals(
    shape: &TriangleShape,
    start_vertex: Vertex,
    n_max: usize,
) -> Result<Vec<DiagonalRecord>, EnumerationError> {
    if n_max > BRUTE_FORCE_MAX_DEPTH {
        return Err(EnumerationError::BudgetExceeded {
            requested: n_max,
            limit: BRUTE_FORCE_MAX_DEPTH,
        });
    }
    let tol = PrecisionConfig::default();
    let tri = shape.vertices();
    let origin = tri[start_vertex.index()];
    let mut out = Vec::new();
    let mut stack: Vec<(Vertex, Pt, Pt)> = Vec::new();
    let mut path = Vec::new();
    walk(
        &tri,
        origin,
        start_vertex,
        n_max,
        &tol,
        &mut stack,
        &mut path,
        &mut out,
    );
    out.sort_by(DiagonalRecord::sort_order);
    Ok(out)
}

/// `stack` holds, for every crossing so far, the crossed side's endpoints.
#[allow(clippy::too_many_arguments)]
fn walk(
    tri: &[Pt; 3],
    origin: Pt,
    start: Vertex,
    n_max: usize,
    tol: &PrecisionConfig,
    stack: &mut Vec<(Vertex, Pt, Pt)>,
    path: &mut Vec<Vertex>,
    out: &mut Vec<DiagonalRecord>,
) {
    if path.len() == n_max {
        return;
    }
    for e in Vertex::ALL {
        let [u, w] = e.others();
        let (pu, pw) = (tri[u.index()], tri[w.index()]);
        let mut next = *tri;
        next[e.index()] = reflect_point(&tri[e.index()], &pu, &pw);
        stack.push((e, pu, pw));
        path.push(e);
        let apex = next[e.index()];
        if visible(origin, apex, stack, tol.tau_hit(path.len())) {
            let v = sub(&apex, &origin);
            out.push(DiagonalRecord {
                start_vertex: start,
                end_vertex: e,
                direction: wrap_angle(v[1].atan2(v[0])),
                reflections: path.len(),
                geometric_length: (v[0] * v[0] + v[1] * v[1]).sqrt(),
                endpoint: apex,
                edges: EdgePath(path.clone()),
                precision_warning: false,
            });
        }
        walk(&next, origin, start, n_max, tol, stack, path, out);
        path.pop();
        stack.pop();
    }
}

/// The open segment `origin → target` crosses the interior of every side on
/// the stack in stack order, staying at least `tau` away from each side's
/// endpoints.
fn visible(origin: Pt, target: Pt, sides: &[(Vertex, Pt, Pt)], tau: f64) -> bool {
    let d = sub(&target, &origin);
    let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
    if len == 0.0 {
        return false;
    }
    let mut last = 0.0;
    for (_, u, w) in sides {
        let su = cross(&d, &sub(u, &origin)) / len;
        let sw = cross(&d, &sub(w, &origin)) / len;
        if su.abs() < tau || sw.abs() < tau || (su > 0.0) == (sw > 0.0) {
            return false;
        }
        let e = sub(w, u);
        let so = cross(&e, &sub(&origin, u));
        let st = cross(&e, &sub(&target, u));
        if so == 0.0 || st == 0.0 || (so > 0.0) == (st > 0.0) {
            return false;
        }
        let t = so / (so - st);
        if t <= last {
            return false;
        }
        last = t;
    }
    true
}
