use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{wrap_angle, GeometryError, Point, TriangleShape};

/// Which kite vertex a rotation is taken about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pivot {
    Alpha,
    Beta,
}

/// One kite unfolding move: rotation by `±2α` about the α-vertex or by `±2β`
/// about the β-vertex. Serialized as `"A+"`, `"A-"`, `"B+"`, `"B-"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationLabel {
    pub pivot: Pivot,
    pub sign: i8,
}

impl RotationLabel {
    pub const ALL: [RotationLabel; 4] = [
        RotationLabel::new(Pivot::Alpha, 1),
        RotationLabel::new(Pivot::Alpha, -1),
        RotationLabel::new(Pivot::Beta, 1),
        RotationLabel::new(Pivot::Beta, -1),
    ];

    pub const fn new(pivot: Pivot, sign: i8) -> Self {
        RotationLabel { pivot, sign }
    }

    /// Signed rotation angle for this shape.
    pub fn amount(&self, shape: &TriangleShape) -> f64 {
        let base = match self.pivot {
            Pivot::Alpha => shape.alpha(),
            Pivot::Beta => shape.beta(),
        };
        2.0 * base * self.sign as f64
    }

    /// The move that undoes this one.
    pub fn inverse(&self) -> Self {
        RotationLabel::new(self.pivot, -self.sign)
    }

    /// Frequency increment `(Δm, Δl)` of the kite angle `mα + lβ`.
    pub fn frequency_step(&self) -> (i32, i32) {
        let s = 2 * self.sign as i32;
        match self.pivot {
            Pivot::Alpha => (s, 0),
            Pivot::Beta => (0, s),
        }
    }
}

impl fmt::Display for RotationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.pivot {
            Pivot::Alpha => 'A',
            Pivot::Beta => 'B',
        };
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{p}{s}")
    }
}

impl FromStr for RotationLabel {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::InvalidCombinatorics(format!("bad move {s:?}"));
        let mut it = s.trim().chars();
        let pivot = match it.next() {
            Some('A') | Some('a') => Pivot::Alpha,
            Some('B') | Some('b') => Pivot::Beta,
            _ => return Err(bad()),
        };
        let sign = match it.next() {
            Some('+') => 1,
            Some('-') => -1,
            _ => return Err(bad()),
        };
        if it.next().is_some() {
            return Err(bad());
        }
        Ok(RotationLabel::new(pivot, sign))
    }
}

impl Serialize for RotationLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RotationLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A sequence of kite moves.
///
/// A move immediately followed by its inverse would send the orbit back
/// through the side it just crossed, which no straight line does, so such
/// sequences are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<RotationLabel>", into = "Vec<RotationLabel>")]
pub struct Combinatorics(Vec<RotationLabel>);

impl Combinatorics {
    pub fn new(moves: Vec<RotationLabel>) -> Result<Self, GeometryError> {
        if let Some(i) = moves.windows(2).position(|w| w[1] == w[0].inverse()) {
            return Err(GeometryError::InvalidCombinatorics(format!(
                "move {} at position {} undoes its predecessor",
                moves[i + 1],
                i + 1
            )));
        }
        Ok(Combinatorics(moves))
    }

    pub fn empty() -> Self {
        Combinatorics(Vec::new())
    }

    pub fn moves(&self) -> &[RotationLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of kites in the unfolding, counting the standard one.
    pub fn kite_count(&self) -> usize {
        self.0.len() + 1
    }

    /// Uniformly random sequence of `len` moves with no immediate backtrack.
    pub fn random<G: rand::Rng + ?Sized>(len: usize, rng: &mut G) -> Self {
        let mut moves: Vec<RotationLabel> = Vec::with_capacity(len);
        while moves.len() < len {
            let m = RotationLabel::ALL[rng.random_range(0..4)];
            if moves.last().is_some_and(|p| *p == m.inverse()) {
                continue;
            }
            moves.push(m);
        }
        Combinatorics(moves)
    }

    /// Every valid sequence of exactly `len` moves, in lexicographic order.
    pub fn all_of_length(len: usize) -> Vec<Combinatorics> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * 3);
            for seq in &out {
                for m in RotationLabel::ALL {
                    let seq: &Vec<RotationLabel> = seq;
                    if seq.last().is_some_and(|p| *p == m.inverse()) {
                        continue;
                    }
                    let mut s = seq.clone();
                    s.push(m);
                    next.push(s);
                }
            }
            out = next;
        }
        out.into_iter().map(Combinatorics).collect()
    }
}

impl TryFrom<Vec<RotationLabel>> for Combinatorics {
    type Error = GeometryError;
    fn try_from(v: Vec<RotationLabel>) -> Result<Self, Self::Error> {
        Combinatorics::new(v)
    }
}

impl From<Combinatorics> for Vec<RotationLabel> {
    fn from(c: Combinatorics) -> Self {
        c.0
    }
}

impl FromStr for Combinatorics {
    type Err = GeometryError;
    /// Comma- or space-separated moves, e.g. `"A+,B-,A-"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let moves = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Combinatorics::new(moves)
    }
}

impl fmt::Display for Combinatorics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Slot of a kite vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KiteVertex {
    Alpha,
    Beta,
    /// Side vertex to the left of the diagonal (positive y in standard position).
    Upper,
    /// Side vertex to the right of the diagonal.
    Lower,
}

impl KiteVertex {
    pub const ALL: [KiteVertex; 4] = [
        KiteVertex::Alpha,
        KiteVertex::Beta,
        KiteVertex::Upper,
        KiteVertex::Lower,
    ];
}

impl FromStr for KiteVertex {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha" | "a" => Ok(KiteVertex::Alpha),
            "beta" | "b" => Ok(KiteVertex::Beta),
            "upper" | "u" => Ok(KiteVertex::Upper),
            "lower" | "l" => Ok(KiteVertex::Lower),
            _ => Err(GeometryError::InvalidCombinatorics(format!(
                "unknown kite vertex {s:?}"
            ))),
        }
    }
}

/// A placed copy of the kite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KiteFrame {
    pub alpha_vertex: Point,
    pub beta_vertex: Point,
    /// `[upper, lower]`
    pub side_vertices: [Point; 2],
    /// Counterclockwise angle of the diagonal, in `[0, 2π)`.
    pub kite_angle: f64,
}

impl KiteFrame {
    pub fn vertex(&self, v: KiteVertex) -> Point {
        match v {
            KiteVertex::Alpha => self.alpha_vertex,
            KiteVertex::Beta => self.beta_vertex,
            KiteVertex::Upper => self.side_vertices[0],
            KiteVertex::Lower => self.side_vertices[1],
        }
    }

    pub fn points(&self) -> [Point; 4] {
        KiteVertex::ALL.map(|v| self.vertex(v))
    }

    /// Rebuilds the kite from its α-vertex and diagonal angle.
    fn from_alpha(shape: &TriangleShape, alpha_vertex: Point, kite_angle: f64) -> Self {
        let rho = shape.side_length_from(super::Vertex::A);
        let a = shape.alpha();
        let at = |phi: f64, r: f64| {
            [
                alpha_vertex[0] + r * phi.cos(),
                alpha_vertex[1] + r * phi.sin(),
            ]
        };
        KiteFrame {
            alpha_vertex,
            beta_vertex: at(kite_angle, 1.0),
            side_vertices: [at(kite_angle + a, rho), at(kite_angle - a, rho)],
            kite_angle: wrap_angle(kite_angle),
        }
    }
}

/// The kite with α-vertex at the origin and β-vertex at `(1, 0)`.
pub fn standard_kite(shape: &TriangleShape) -> KiteFrame {
    KiteFrame::from_alpha(shape, [0.0, 0.0], 0.0)
}

/// Rotates `frame` about the pivot named by `mv`.
///
/// The pivot stays fixed, the kite angle advances by the signed rotation
/// amount, and the opposite diagonal endpoint is re-placed one unit along the
/// new diagonal direction.
pub fn unfold_step(frame: &KiteFrame, mv: RotationLabel, shape: &TriangleShape) -> KiteFrame {
    let phi = frame.kite_angle + mv.amount(shape);
    match mv.pivot {
        Pivot::Alpha => KiteFrame::from_alpha(shape, frame.alpha_vertex, phi),
        Pivot::Beta => {
            let b = frame.beta_vertex;
            let alpha_vertex = [b[0] - phi.cos(), b[1] - phi.sin()];
            let mut k = KiteFrame::from_alpha(shape, alpha_vertex, phi);
            // keep the pivot bit-identical
            k.beta_vertex = b;
            k
        }
    }
}

/// All kites of the unfolding, starting from the standard one.
pub fn unfold_sequence(shape: &TriangleShape, comb: &Combinatorics) -> Vec<KiteFrame> {
    let mut frames = Vec::with_capacity(comb.len() + 1);
    frames.push(standard_kite(shape));
    for mv in comb.moves() {
        let next = unfold_step(frames.last().expect("nonempty"), *mv, shape);
        frames.push(next);
    }
    frames
}

#[cfg(test)]
fn total_rotation(shape: &TriangleShape, comb: &Combinatorics) -> f64 {
    comb.moves()
        .iter()
        .map(|m| m.amount(shape))
        .sum::<f64>()
        .rem_euclid(std::f64::consts::TAU)
}
