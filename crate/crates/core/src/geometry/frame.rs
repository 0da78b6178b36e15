use serde::{Deserialize, Serialize};

use super::kite::{KiteVertex, Pivot, RotationLabel};
use super::{cross, reflect_point, sub, Combinatorics, Point, TriangleShape, Vertex};

/// One triangle of an edge-reflection unfolding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleFrame {
    /// Positions indexed by [`Vertex::index`].
    pub vertices: [Point; 3],
    /// `+1` when `A, B, C` run counterclockwise.
    pub parity: i8,
    /// Edge (named by its opposite vertex) crossed to reach the next frame.
    pub next_edge: Option<Vertex>,
}

impl TriangleFrame {
    pub fn standard(shape: &TriangleShape) -> Self {
        TriangleFrame {
            vertices: shape.vertices(),
            parity: 1,
            next_edge: None,
        }
    }

    pub fn vertex(&self, v: Vertex) -> Point {
        self.vertices[v.index()]
    }

    /// Mirror image across the edge opposite `edge`.
    pub fn reflect(&self, edge: Vertex) -> TriangleFrame {
        let [u, w] = edge.others();
        let mut vertices = self.vertices;
        vertices[edge.index()] = reflect_point(
            &self.vertices[edge.index()],
            &self.vertices[u.index()],
            &self.vertices[w.index()],
        );
        TriangleFrame {
            vertices,
            parity: -self.parity,
            next_edge: None,
        }
    }

    /// Orientation recomputed from coordinates.
    pub fn measured_parity(&self) -> i8 {
        let v = &self.vertices;
        if cross(&sub(&v[1], &v[0]), &sub(&v[2], &v[0])) > 0.0 {
            1
        } else {
            -1
        }
    }
}

/// Triangles visited when crossing `edges` in order, starting from the
/// standard frame. The result has `edges.len() + 1` entries.
pub fn triangle_unfolding(shape: &TriangleShape, edges: &[Vertex]) -> Vec<TriangleFrame> {
    let mut out = Vec::with_capacity(edges.len() + 1);
    let mut cur = TriangleFrame::standard(shape);
    for &e in edges {
        cur.next_edge = Some(e);
        let next = cur.reflect(e);
        out.push(cur);
        cur = next;
    }
    out.push(cur);
    out
}

/// The kite unfolding that accompanies a triangle unfolding.
#[derive(Debug, Clone, PartialEq)]
pub struct KitePath {
    pub combinatorics: Combinatorics,
    /// For each triangle frame, the index of the kite containing it.
    pub kite_of_triangle: Vec<usize>,
    /// For each triangle frame, its orientation parity.
    pub parity_of_triangle: Vec<i8>,
}

impl KitePath {
    /// Kite slot occupied by vertex `v` of triangle `i`.
    pub fn slot(&self, triangle: usize, v: Vertex) -> (usize, KiteVertex) {
        let kite = self.kite_of_triangle[triangle];
        let slot = match v {
            Vertex::A => KiteVertex::Alpha,
            Vertex::B => KiteVertex::Beta,
            Vertex::C if self.parity_of_triangle[triangle] > 0 => KiteVertex::Upper,
            Vertex::C => KiteVertex::Lower,
        };
        (kite, slot)
    }
}

/// Converts an edge-crossing sequence into kite moves.
///
/// Crossing `AB` (the kite diagonal) stays inside the same kite. Crossing
/// `CA` rotates about the α-vertex by `+2α` in a counterclockwise triangle and
/// `−2α` in a clockwise one; crossing `BC` rotates about the β-vertex by `∓2β`.
pub fn kite_path(edges: &[Vertex]) -> KitePath {
    let mut moves = Vec::new();
    let mut parity: i8 = 1;
    let mut kite_of_triangle = vec![0];
    let mut parity_of_triangle = vec![1];
    for &e in edges {
        match e {
            Vertex::C => {}
            Vertex::B => moves.push(RotationLabel::new(Pivot::Alpha, parity)),
            Vertex::A => moves.push(RotationLabel::new(Pivot::Beta, -parity)),
        }
        parity = -parity;
        kite_of_triangle.push(moves.len());
        parity_of_triangle.push(parity);
    }
    KitePath {
        // A corridor never re-crosses the edge it came through, so the moves
        // cannot backtrack; unchecked construction would hide a caller bug.
        combinatorics: Combinatorics::new(moves).expect("edge path re-crosses an edge"),
        kite_of_triangle,
        parity_of_triangle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_triangle, unfold_sequence};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_edges(len: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
        let mut edges: Vec<Vertex> = Vec::new();
        while edges.len() < len {
            let e = Vertex::from_index(rng.random_range(0..3));
            if edges.last() == Some(&e) {
                continue;
            }
            edges.push(e);
        }
        edges
    }

    #[test]
    fn parity_flips_and_matches_coordinates() {
        let t = make_triangle(0.7, 1.0, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let frames = triangle_unfolding(&t, &random_edges(25, &mut rng));
        for (i, f) in frames.iter().enumerate() {
            assert_eq!(f.parity, if i % 2 == 0 { 1 } else { -1 });
            assert_eq!(f.parity, f.measured_parity());
        }
    }

    #[test]
    fn each_triangle_is_half_of_its_kite() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (a, b) in [
            (0.7, 1.0),
            (1.0471975511965976, 1.0471975511965976),
            (0.4, 0.5),
            (1.5, 0.3),
        ] {
            let t = make_triangle(a, b, 0.05).unwrap();
            for _ in 0..40 {
                let edges = random_edges(rng.random_range(0..30), &mut rng);
                let tris = triangle_unfolding(&t, &edges);
                let path = kite_path(&edges);
                let kites = unfold_sequence(&t, &path.combinatorics);
                for (i, tri) in tris.iter().enumerate() {
                    for v in Vertex::ALL {
                        let (k, slot) = path.slot(i, v);
                        let p = kites[k].vertex(slot);
                        let q = tri.vertex(v);
                        let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                        assert!(d < 1e-11, "triangle {i} vertex {v} off by {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_crossings_do_not_move_the_kite() {
        let path = kite_path(&[Vertex::A, Vertex::C, Vertex::B, Vertex::C]);
        assert_eq!(path.combinatorics.len(), 2);
        assert_eq!(path.kite_of_triangle, vec![0, 1, 1, 2, 2]);
        assert_eq!(path.combinatorics.to_string(), "B-,A+");
    }
}
