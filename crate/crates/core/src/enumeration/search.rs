//! Corridor-pruned depth-first search.
//!
//! Each node is a triangle image reached from the start vertex `V` by a fixed
//! sequence of side crossings, together with the open window of directions
//! whose rays cross every one of those sides. The window is bounded by two
//! earlier vertex images. The apex of the current triangle (the vertex not on
//! the side just crossed) either falls inside the window, giving a diagonal
//! and splitting the window in two, or lies outside it, in which case the
//! whole window leaves through a single side.

use crate::geometry::{cross, reflect_point, sub, wrap_angle, TriangleShape, Vertex};
use crate::real::{Ext, Real};

use super::{Ambiguity, DiagonalRecord, EdgePath, Enumeration, EnumerationError, PrecisionConfig};

/// Depth below which sibling subtrees are explored in parallel.
const PARALLEL_DEPTH: usize = 12;

type Pt = [f64; 2];

/// A window boundary: the vertex image `label` of the triangle at `depth`.
#[derive(Debug, Clone, Copy)]
struct Bound {
    pt: Pt,
    depth: usize,
    label: Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Inside,
    Outside,
    On,
}

struct Ctx<'a> {
    shape: &'a TriangleShape,
    start: Vertex,
    origin: Pt,
    n_max: usize,
    precision: PrecisionConfig,
}

#[derive(Default)]
struct Found {
    records: Vec<DiagonalRecord>,
    ambiguities: Vec<Ambiguity>,
    nodes: u64,
}

impl Found {
    fn merge(mut self, other: Found) -> Found {
        self.records.extend(other.records);
        self.ambiguities.extend(other.ambiguities);
        self.nodes += other.nodes;
        self
    }
}

/// All generalized diagonals of discrete length `1..=n_max` leaving
/// `start_vertex`, sorted by direction.
pub fn enumerate_diagonals(
    shape: &TriangleShape,
    start_vertex: Vertex,
    n_max: usize,
    precision: &PrecisionConfig,
) -> Result<Enumeration, EnumerationError> {
    if n_max == 0 {
        return Err(EnumerationError::EmptyRange);
    }
    let tri = shape.vertices();
    let origin = tri[start_vertex.index()];
    let ctx = Ctx {
        shape,
        start: start_vertex,
        origin,
        n_max,
        precision: *precision,
    };
    let [x, y] = start_vertex.others();
    let (lo_label, hi_label) = if orient(&origin, &tri[x.index()], &tri[y.index()]) > 0.0 {
        (x, y)
    } else {
        (y, x)
    };
    let lo = Bound {
        pt: tri[lo_label.index()],
        depth: 0,
        label: lo_label,
    };
    let hi = Bound {
        pt: tri[hi_label.index()],
        depth: 0,
        label: hi_label,
    };
    let first = cross_edge(&tri, start_vertex);
    let mut path = vec![start_vertex];
    let found = visit(&ctx, first, start_vertex, lo, hi, &mut path);
    let mut records = found.records;
    records.sort_by(DiagonalRecord::sort_order);
    Ok(Enumeration {
        start_vertex,
        n_max,
        records,
        ambiguities: found.ambiguities,
        nodes_visited: found.nodes,
    })
}

fn orient(o: &Pt, p: &Pt, q: &Pt) -> f64 {
    cross(&sub(p, o), &sub(q, o))
}

/// Reflects vertex `edge` across the side opposite it.
fn cross_edge(tri: &[Pt; 3], edge: Vertex) -> [Pt; 3] {
    let [u, w] = edge.others();
    let mut next = *tri;
    next[edge.index()] = reflect_point(&tri[edge.index()], &tri[u.index()], &tri[w.index()]);
    next
}

/// Triangle `tri` was entered across the side opposite `apex`; `path` holds
/// the sides crossed so far (its length is the depth).
fn visit(
    ctx: &Ctx,
    tri: [Pt; 3],
    apex: Vertex,
    lo: Bound,
    hi: Bound,
    path: &mut Vec<Vertex>,
) -> Found {
    let depth = path.len();
    let mut found = Found {
        nodes: 1,
        ..Found::default()
    };
    let a = tri[apex.index()];
    let [p, q] = apex.others();
    // Endpoints of the entry side, clockwise one first.
    let (ul, uh) = if orient(&ctx.origin, &tri[p.index()], &tri[q.index()]) > 0.0 {
        (p, q)
    } else {
        (q, p)
    };

    let mut warn = false;
    let lo_side = classify(ctx, &tri, apex, &lo, true, path, &mut found, &mut warn);
    let hi_side = classify(ctx, &tri, apex, &hi, false, path, &mut found, &mut warn);

    let apex_bound = Bound {
        pt: a,
        depth,
        label: apex,
    };
    let recurse = depth < ctx.n_max;
    if lo_side == Side::Inside && hi_side == Side::Inside {
        found.records.push(make_record(ctx, a, apex, path, warn));
        if recurse {
            // (lo, apex) leaves through side {ul, apex}, i.e. opposite uh;
            // (apex, hi) leaves through side {apex, uh}, opposite ul.
            let left_tri = cross_edge(&tri, uh);
            let right_tri = cross_edge(&tri, ul);
            let (l, r) = if depth < PARALLEL_DEPTH {
                let mut lp = path.clone();
                let mut rp = path.clone();
                lp.push(uh);
                rp.push(ul);
                rayon::join(
                    || visit(ctx, left_tri, uh, lo, apex_bound, &mut lp),
                    || visit(ctx, right_tri, ul, apex_bound, hi, &mut rp),
                )
            } else {
                path.push(uh);
                let l = visit(ctx, left_tri, uh, lo, apex_bound, path);
                path.pop();
                path.push(ul);
                let r = visit(ctx, right_tri, ul, apex_bound, hi, path);
                path.pop();
                (l, r)
            };
            found = found.merge(l).merge(r);
        }
    } else if recurse {
        // The apex is not strictly inside: the whole window is on one side.
        let exit = if lo_side != Side::Inside { ul } else { uh };
        path.push(exit);
        let sub = visit(ctx, cross_edge(&tri, exit), exit, lo, hi, path);
        path.pop();
        found = found.merge(sub);
    }
    found
}

/// Position of the apex relative to one window boundary. `lower` selects the
/// clockwise boundary, for which "inside" means counterclockwise of it.
#[allow(clippy::too_many_arguments)]
fn classify(
    ctx: &Ctx,
    tri: &[Pt; 3],
    apex: Vertex,
    bound: &Bound,
    lower: bool,
    path: &[Vertex],
    found: &mut Found,
    warn: &mut bool,
) -> Side {
    let depth = path.len();
    let a = tri[apex.index()];
    let va = sub(&a, &ctx.origin);
    let vb = sub(&bound.pt, &ctx.origin);
    let c = if lower {
        cross(&vb, &va)
    } else {
        cross(&va, &vb)
    };
    let ra = (va[0] * va[0] + va[1] * va[1]).sqrt();
    // distance of the boundary vertex from the ray towards the apex
    let d = c.abs() / ra;
    let tau = ctx.precision.tau_hit(depth);
    if d < tau {
        return Side::On;
    }
    if d >= ctx.precision.safe_tolerance {
        return if c > 0.0 { Side::Inside } else { Side::Outside };
    }
    let mut side = if c > 0.0 { Side::Inside } else { Side::Outside };
    let mut ext_d = None;
    if ctx.precision.extended {
        let (ce, de) = extended_test(ctx, path, apex, bound, lower);
        ext_d = Some(de);
        side = if de < tau {
            Side::On
        } else if ce {
            Side::Inside
        } else {
            Side::Outside
        };
        if de >= tau && de < ctx.precision.safe_tolerance {
            *warn = true;
        }
    } else {
        *warn = true;
    }
    found.ambiguities.push(Ambiguity {
        depth,
        edges: EdgePath(path.to_vec()),
        candidate: apex,
        distance: d,
        extended_distance: ext_d,
    });
    side
}

/// Replays the corridor in 128-bit arithmetic and recomputes the signed test.
/// Returns (positive side?, distance).
fn extended_test(
    ctx: &Ctx,
    path: &[Vertex],
    apex: Vertex,
    bound: &Bound,
    lower: bool,
) -> (bool, f64) {
    let mut tri: [[Ext; 2]; 3] = ctx.shape.vertices_in::<Ext>();
    let origin = tri[ctx.start.index()].clone();
    let mut bound_pt = None;
    if bound.depth == 0 {
        bound_pt = Some(tri[bound.label.index()].clone());
    }
    for (i, &e) in path.iter().enumerate() {
        let [u, w] = e.others();
        let r = reflect_point(&tri[e.index()], &tri[u.index()], &tri[w.index()]);
        tri[e.index()] = r;
        if i + 1 == bound.depth {
            bound_pt = Some(tri[bound.label.index()].clone());
        }
    }
    let b = bound_pt.expect("window bound lies on the corridor");
    let va = sub(&tri[apex.index()], &origin);
    let vb = sub(&b, &origin);
    let c = if lower {
        cross(&vb, &va)
    } else {
        cross(&va, &vb)
    };
    let ra = crate::geometry::norm(&va);
    let d = (c.abs() / ra).to_f64();
    (c > Ext::zero(), d)
}

fn make_record(ctx: &Ctx, a: Pt, apex: Vertex, path: &[Vertex], warn: bool) -> DiagonalRecord {
    let v = sub(&a, &ctx.origin);
    DiagonalRecord {
        start_vertex: ctx.start,
        end_vertex: apex,
        direction: wrap_angle(v[1].atan2(v[0])),
        reflections: path.len(),
        geometric_length: (v[0] * v[0] + v[1] * v[1]).sqrt(),
        endpoint: a,
        edges: EdgePath(path.to_vec()),
        precision_warning: warn,
    }
}
