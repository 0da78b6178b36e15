use serde::{Deserialize, Serialize};

use crate::geometry::{Combinatorics, KiteVertex, Pivot, TriangleShape};

use super::TrigPoly;

/// Symbolic coordinates of an unfolded kite vertex.
///
/// Diagonal endpoints are `(x, y)`. Side vertices are
/// `(x, y) + sin β / sin(α+β) · (cos θ, sin θ)` with `θ = mα + lβ` given by
/// `side`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicPoint {
    pub x: TrigPoly,
    pub y: TrigPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<(i32, i32)>,
    /// Kites in the unfolding that produced this point.
    pub kites: usize,
}

impl SymbolicPoint {
    pub fn eval(&self, alpha: f64, beta: f64) -> [f64; 2] {
        let mut p = [self.x.eval(alpha, beta), self.y.eval(alpha, beta)];
        if let Some((m, l)) = self.side {
            let r = beta.sin() / (alpha + beta).sin();
            let t = m as f64 * alpha + l as f64 * beta;
            p[0] += r * t.cos();
            p[1] += r * t.sin();
        }
        p
    }

    /// `sin(α+β)` times the point, which is a plain trigonometric polynomial
    /// pair.
    pub fn cleared(&self) -> [TrigPoly; 2] {
        let s = TrigPoly::sin(1, 1);
        let mut x = &s * &self.x;
        let mut y = &s * &self.y;
        if let Some((m, l)) = self.side {
            let sb = TrigPoly::sin(0, 1);
            x = &x + &(&sb * &TrigPoly::cos(m, l));
            y = &y + &(&sb * &TrigPoly::sin(m, l));
        }
        [x, y]
    }
}

/// All four vertices of one unfolded kite, plus its diagonal angle `mα + lβ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicKite {
    pub alpha_vertex: SymbolicPoint,
    pub beta_vertex: SymbolicPoint,
    pub upper: SymbolicPoint,
    pub lower: SymbolicPoint,
    pub kite_angle: (i32, i32),
}

impl SymbolicKite {
    pub fn vertex(&self, v: KiteVertex) -> &SymbolicPoint {
        match v {
            KiteVertex::Alpha => &self.alpha_vertex,
            KiteVertex::Beta => &self.beta_vertex,
            KiteVertex::Upper => &self.upper,
            KiteVertex::Lower => &self.lower,
        }
    }

    fn build(
        alpha: (TrigPoly, TrigPoly),
        beta: (TrigPoly, TrigPoly),
        (m, l): (i32, i32),
        kites: usize,
    ) -> Self {
        let plain = |(x, y): (TrigPoly, TrigPoly)| SymbolicPoint {
            x,
            y,
            side: None,
            kites,
        };
        let side = |f: (i32, i32)| SymbolicPoint {
            x: alpha.0.clone(),
            y: alpha.1.clone(),
            side: Some(f),
            kites,
        };
        SymbolicKite {
            upper: side((m + 1, l)),
            lower: side((m - 1, l)),
            alpha_vertex: plain(alpha),
            beta_vertex: plain(beta),
            kite_angle: (m, l),
        }
    }
}

/// Symbolic kites of the whole unfolding, starting from the standard one.
pub fn symbolic_unfold_sequence(comb: &Combinatorics) -> Vec<SymbolicKite> {
    let mut alpha = (TrigPoly::zero(), TrigPoly::zero());
    let mut beta = (TrigPoly::cos(0, 0), TrigPoly::zero());
    let mut phi = (0, 0);
    let mut out = vec![SymbolicKite::build(alpha.clone(), beta.clone(), phi, 1)];
    for (i, mv) in comb.moves().iter().enumerate() {
        let (dm, dl) = mv.frequency_step();
        phi = (phi.0 + dm, phi.1 + dl);
        let dir = (TrigPoly::cos(phi.0, phi.1), TrigPoly::sin(phi.0, phi.1));
        match mv.pivot {
            Pivot::Alpha => beta = (&alpha.0 + &dir.0, &alpha.1 + &dir.1),
            Pivot::Beta => alpha = (&beta.0 - &dir.0, &beta.1 - &dir.1),
        }
        out.push(SymbolicKite::build(alpha.clone(), beta.clone(), phi, i + 2));
    }
    out
}

/// The last kite of the unfolding.
pub fn symbolic_unfold(comb: &Combinatorics) -> SymbolicKite {
    symbolic_unfold_sequence(comb)
        .pop()
        .expect("at least the standard kite")
}

/// One vertex of the last kite.
pub fn symbolic_point(comb: &Combinatorics, v: KiteVertex) -> SymbolicPoint {
    symbolic_unfold(comb).vertex(v).clone()
}

/// `A` with signed area of `PQR` equal to `A(α, β) / sin²(α+β)`.
pub fn area_polynomial(p: &SymbolicPoint, q: &SymbolicPoint, r: &SymbolicPoint) -> TrigPoly {
    let [px, py] = p.cleared();
    let [qx, qy] = q.cleared();
    let [rx, ry] = r.cleared();
    let (ux, uy) = (&qx - &px, &qy - &py);
    let (vx, vy) = (&rx - &px, &ry - &py);
    let cross = &(&ux * &vy) - &(&uy * &vx);
    cross.scale(&num_rational::BigRational::new(1.into(), 2.into()))
}

/// Numeric signed area, for cross-checks.
pub(crate) fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

/// Largest coordinate difference between the symbolic and numeric unfoldings
/// of `comb`, over every vertex of every kite.
pub fn symbolic_numeric_gap(shape: &TriangleShape, comb: &Combinatorics) -> f64 {
    let frames = crate::geometry::unfold_sequence(shape, comb);
    let sym = symbolic_unfold_sequence(comb);
    let (a, b) = (shape.alpha(), shape.beta());
    let mut worst: f64 = 0.0;
    for (f, s) in frames.iter().zip(&sym) {
        for v in KiteVertex::ALL {
            let x = f.vertex(v);
            let y = s.vertex(v).eval(a, b);
            worst = worst.max((x[0] - y[0]).abs()).max((x[1] - y[1]).abs());
        }
    }
    worst
}
