//! Triangles, kites and their unfoldings.
//!
//! The triangle is placed with its α-vertex `A` at the origin, its β-vertex
//! `B` at `(1, 0)` and the third vertex `C` in the upper half plane. The side
//! `AB` has length 1 and doubles as the kite diagonal.

mod billiard;
mod frame;
mod kite;
mod length;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;

pub use billiard::{billiard_step, BilliardStep};
pub use frame::{kite_path, triangle_unfolding, KitePath, TriangleFrame};
pub use kite::{
    standard_kite, unfold_sequence, unfold_step, Combinatorics, KiteFrame, KiteVertex, Pivot,
    RotationLabel,
};
pub use length::{length_comparability, sample_orbits, OrbitSample};

/// A point in the plane, serialized as `[x, y]`.
pub type Point = [f64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("triangle not admissible: {0}")]
    Admissibility(String),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("invalid combinatorics: {0}")]
    InvalidCombinatorics(String),
    #[error("insufficient data: no orbit with at least {min_reflections} reflections")]
    InsufficientData { min_reflections: usize },
    #[error("cannot parse angle {0:?}")]
    AngleSyntax(String),
}

/// Triangle vertex label. `A` carries angle α, `B` carries β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    A,
    B,
    C,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::A, Vertex::B, Vertex::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Vertex {
        Self::ALL[i]
    }

    /// The two vertices other than `self`, in label order.
    pub fn others(self) -> [Vertex; 2] {
        match self {
            Vertex::A => [Vertex::B, Vertex::C],
            Vertex::B => [Vertex::A, Vertex::C],
            Vertex::C => [Vertex::A, Vertex::B],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Vertex::A => 'A',
            Vertex::B => 'B',
            Vertex::C => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Vertex> {
        match c {
            'A' | 'a' => Some(Vertex::A),
            'B' | 'b' => Some(Vertex::B),
            'C' | 'c' => Some(Vertex::C),
            _ => None,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Vertex {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next().and_then(Vertex::from_letter), chars.next()) {
            (Some(v), None) => Ok(v),
            _ => Err(GeometryError::AngleSyntax(format!("vertex {s:?}"))),
        }
    }
}

/// An angle given either in radians or as an exact rational multiple of π.
///
/// Keeping the rational form lets the extended-precision path evaluate the
/// true trigonometric values of rational triangles instead of those of the
/// nearest double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Radians(f64),
    PiFraction { num: i64, den: i64 },
}

impl AngleSpec {
    pub fn radians(self) -> f64 {
        self.to_real::<f64>()
    }

    pub fn to_real<R: Real>(self) -> R {
        match self {
            AngleSpec::Radians(x) => R::from_f64(x),
            AngleSpec::PiFraction { num, den } => R::pi_fraction(num, den),
        }
    }

    pub fn pi_fraction(num: i64, den: i64) -> AngleSpec {
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        AngleSpec::PiFraction {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    /// Stable textual form used for hashing and display.
    pub fn canonical(&self) -> String {
        match *self {
            AngleSpec::Radians(x) => format!("{x:?}"),
            AngleSpec::PiFraction { num, den } => format!("{num}/{den}pi"),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for AngleSpec {
    type Err = GeometryError;

    /// Accepts plain radians (`0.9`) or rational multiples of π written
    /// `1/3pi`, `pi/3`, `2pi/5`, `pi`, `3/4*pi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GeometryError::AngleSyntax(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        if !lower.contains("pi") {
            return t.parse::<f64>().map(AngleSpec::Radians).map_err(|_| err());
        }
        let parse_int = |x: &str, default: i64| -> Result<i64, GeometryError> {
            if x.is_empty() {
                Ok(default)
            } else {
                x.parse::<i64>().map_err(|_| err())
            }
        };
        let cleaned = lower.replace('*', "");
        let (num, den) = if let Some(head) = cleaned.strip_suffix("pi") {
            // "p/qpi", "ppi", "pi"
            match head.split_once('/') {
                Some((p, q)) => (parse_int(p, 1)?, parse_int(q, 1)?),
                None => (parse_int(head, 1)?, 1),
            }
        } else {
            // "pi/q", "ppi/q"
            let (head, q) = cleaned.split_once('/').ok_or_else(err)?;
            let p = head.strip_suffix("pi").ok_or_else(err)?;
            (parse_int(p, 1)?, parse_int(q, 1)?)
        };
        if den == 0 {
            return Err(err());
        }
        Ok(AngleSpec::pi_fraction(num, den))
    }
}

/// An admissible billiard triangle with angles α at `A`, β at `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleShape {
    alpha: AngleSpec,
    beta: AngleSpec,
    delta: f64,
}

/// Validates the δ-margin and builds a shape from radian values.
pub fn make_triangle(alpha: f64, beta: f64, delta: f64) -> Result<TriangleShape, GeometryError> {
    TriangleShape::new(AngleSpec::Radians(alpha), AngleSpec::Radians(beta), delta)
}

impl TriangleShape {
    pub fn new(alpha: AngleSpec, beta: AngleSpec, delta: f64) -> Result<Self, GeometryError> {
        let (a, b) = (alpha.radians(), beta.radians());
        if !a.is_finite() {
            return Err(GeometryError::NonFinite("alpha"));
        }
        if !b.is_finite() {
            return Err(GeometryError::NonFinite("beta"));
        }
        if !delta.is_finite() {
            return Err(GeometryError::NonFinite("delta"));
        }
        if delta <= 0.0 {
            return Err(GeometryError::Admissibility(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if a <= delta {
            return Err(GeometryError::Admissibility(format!(
                "alpha = {a} must exceed delta = {delta}"
            )));
        }
        if b <= delta {
            return Err(GeometryError::Admissibility(format!(
                "beta = {b} must exceed delta = {delta}"
            )));
        }
        if a + b >= PI - delta {
            return Err(GeometryError::Admissibility(format!(
                "alpha + beta = {} must be below pi - delta = {}",
                a + b,
                PI - delta
            )));
        }
        Ok(TriangleShape { alpha, beta, delta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.radians()
    }

    pub fn beta(&self) -> f64 {
        self.beta.radians()
    }

    pub fn gamma(&self) -> f64 {
        PI - self.alpha() - self.beta()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha_spec(&self) -> AngleSpec {
        self.alpha
    }

    pub fn beta_spec(&self) -> AngleSpec {
        self.beta
    }

    /// Angle at the given vertex.
    pub fn angle_at(&self, v: Vertex) -> f64 {
        match v {
            Vertex::A => self.alpha(),
            Vertex::B => self.beta(),
            Vertex::C => self.gamma(),
        }
    }

    /// Length of the sides `AC` (for `Vertex::A`) or `BC` (for `Vertex::B`):
    /// `sin β / sin(α+β)` and `sin α / sin(α+β)` respectively.
    pub fn side_length_from(&self, v: Vertex) -> f64 {
        let s = (self.alpha() + self.beta()).sin();
        match v {
            Vertex::A => self.beta().sin() / s,
            Vertex::B => self.alpha().sin() / s,
            Vertex::C => 1.0,
        }
    }

    /// Vertex positions in standard position, indexed by [`Vertex::index`].
    pub fn vertices(&self) -> [Point; 3] {
        self.vertices_in::<f64>()
    }

    /// Vertex positions evaluated in an arbitrary scalar type.
    pub fn vertices_in<R: Real>(&self) -> [[R; 2]; 3] {
        let a: R = self.alpha.to_real();
        let b: R = self.beta.to_real();
        let (sa, ca) = a.sin_cos();
        let (sb, _) = b.sin_cos();
        let (sab, _) = (a + b).sin_cos();
        let rho = sb / sab;
        [
            [R::zero(), R::zero()],
            [R::from_f64(1.0), R::zero()],
            [rho.clone() * ca, rho * sa],
        ]
    }

    /// Open angular sector of directions leaving `v` into the triangle, as
    /// absolute angles `(lo, hi)` with `0 <= lo < hi <= 2π`.
    pub fn sector(&self, v: Vertex) -> (f64, f64) {
        let (a, b) = (self.alpha(), self.beta());
        match v {
            Vertex::A => (0.0, a),
            Vertex::B => (PI - b, PI),
            Vertex::C => (PI + a, 2.0 * PI - b),
        }
    }

    /// Content-stable identifier of the shape.
    pub fn canonical(&self) -> String {
        format!(
            "alpha={};beta={};delta={:?}",
            self.alpha.canonical(),
            self.beta.canonical(),
            self.delta
        )
    }
}

#[inline]
pub(crate) fn sub<R: Real>(p: &[R; 2], q: &[R; 2]) -> [R; 2] {
    [p[0].clone() - q[0].clone(), p[1].clone() - q[1].clone()]
}

#[inline]
pub(crate) fn cross<R: Real>(u: &[R; 2], v: &[R; 2]) -> R {
    u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone()
}

#[inline]
pub(crate) fn dot<R: Real>(u: &[R; 2], v: &[R; 2]) -> R {
    u[0].clone() * v[0].clone() + u[1].clone() * v[1].clone()
}

#[inline]
pub(crate) fn norm<R: Real>(u: &[R; 2]) -> R {
    dot(u, u).sqrt()
}

/// Mirror image of `p` in the line through `a` and `b`.
pub fn reflect_point<R: Real>(p: &[R; 2], a: &[R; 2], b: &[R; 2]) -> [R; 2] {
    let d = sub(b, a);
    let w = sub(p, a);
    let t = dot(&w, &d) / dot(&d, &d);
    let foot = [
        a[0].clone() + t.clone() * d[0].clone(),
        a[1].clone() + t * d[1].clone(),
    ];
    let two = R::from_f64(2.0);
    [
        two.clone() * foot[0].clone() - p[0].clone(),
        two * foot[1].clone() - p[1].clone(),
    ]
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn circular_distance(x: f64, y: f64) -> f64 {
    let d = wrap_angle(x - y);
    d.min(2.0 * PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_is_admissible() {
        let t = make_triangle(PI / 3.0, PI / 3.0, 0.1).unwrap();
        assert!((t.gamma() - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_below_delta_is_rejected() {
        assert!(matches!(
            make_triangle(0.05, PI / 3.0, 0.1),
            Err(GeometryError::Admissibility(_))
        ));
    }

    #[test]
    fn angle_sum_violation_is_rejected() {
        assert!(matches!(
            make_triangle(1.5, 1.7, 0.01),
            Err(GeometryError::Admissibility(_))
        ));
    }

    #[test]
    fn non_finite_and_nonpositive_delta_rejected() {
        assert!(make_triangle(f64::NAN, 1.0, 0.1).is_err());
        assert!(make_triangle(1.0, 1.0, 0.0).is_err());
        assert!(make_triangle(1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn parses_angle_syntax() {
        let third = AngleSpec::PiFraction { num: 1, den: 3 };
        for s in ["1/3pi", "pi/3", "1/3 pi", "1/3*pi", "2/6pi"] {
            assert_eq!(s.parse::<AngleSpec>().unwrap(), third, "{s}");
        }
        assert_eq!(
            "2pi/5".parse::<AngleSpec>().unwrap(),
            AngleSpec::PiFraction { num: 2, den: 5 }
        );
        assert_eq!(
            "pi".parse::<AngleSpec>().unwrap(),
            AngleSpec::PiFraction { num: 1, den: 1 }
        );
        assert_eq!("0.9".parse::<AngleSpec>().unwrap(), AngleSpec::Radians(0.9));
        assert!("pie".parse::<AngleSpec>().is_err());
        assert!("1/0pi".parse::<AngleSpec>().is_err());
    }

    #[test]
    fn third_vertex_is_ray_intersection() {
        let t = make_triangle(0.7, 1.1, 0.05).unwrap();
        let c = t.vertices()[2];
        // On the ray from A at angle alpha and the ray from B at angle pi - beta.
        let ang_a = c[1].atan2(c[0]);
        let ang_b = c[1].atan2(c[0] - 1.0);
        assert!((ang_a - 0.7).abs() < 1e-14);
        assert!((ang_b - (PI - 1.1)).abs() < 1e-14);
        let ac = (c[0] * c[0] + c[1] * c[1]).sqrt();
        assert!((ac - t.side_length_from(Vertex::A)).abs() < 1e-14);
    }

    #[test]
    fn sectors_have_the_vertex_angle() {
        let t = make_triangle(0.7, 1.1, 0.05).unwrap();
        for v in Vertex::ALL {
            let (lo, hi) = t.sector(v);
            assert!((hi - lo - t.angle_at(v)).abs() < 1e-14);
        }
    }

    #[test]
    fn reflection_is_involutive() {
        let p = [0.3, -1.2];
        let (a, b) = ([0.1, 0.2], [2.0, -0.7]);
        let q = reflect_point(&reflect_point(&p, &a, &b), &a, &b);
        assert!((q[0] - p[0]).abs() < 1e-14 && (q[1] - p[1]).abs() < 1e-14);
    }
}
