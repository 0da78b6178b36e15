//! Trigonometric polynomials in two angles with exact rational coefficients,
//! symbolic kite unfoldings, and triangle area polynomials.

mod family;
mod symbolic;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;

pub use family::{
    family_generate, family_size_exponent, good_triple_area, FamilyConfig, TripleArea, VertexChoice,
};
pub use symbolic::{
    area_polynomial, symbolic_numeric_gap, symbolic_point, symbolic_unfold,
    symbolic_unfold_sequence, SymbolicKite, SymbolicPoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrigPolyError {
    #[error("bad coefficient {0:?}")]
    Coefficient(String),
    #[error("good triple does not match any enumerated diagonal: {0}")]
    UnknownDiagonal(String),
}

/// `Σ c_{m,l} cos(mα + lβ) + s_{m,l} sin(mα + lβ)`.
///
/// Each frequency is stored once, with `(m, l)` lexicographically nonnegative;
/// `sin(0)` terms and zero coefficient pairs are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TrigPoly {
    terms: BTreeMap<(i32, i32), (BigRational, BigRational)>,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = TrigPoly::zero();
        p.add_term((0, 0), c, BigRational::zero());
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// `cos(mα + lβ)`
    pub fn cos(m: i32, l: i32) -> Self {
        let mut p = TrigPoly::zero();
        p.add_term((m, l), BigRational::one(), BigRational::zero());
        p
    }

    /// `sin(mα + lβ)`
    pub fn sin(m: i32, l: i32) -> Self {
        let mut p = TrigPoly::zero();
        p.add_term((m, l), BigRational::zero(), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms as `((m, l), cos coefficient, sin coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), &BigRational, &BigRational)> + '_ {
        self.terms.iter().map(|(k, (c, s))| (*k, c, s))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `max |m| + |l|` over stored terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|(m, l)| m.unsigned_abs() + l.unsigned_abs())
            .max()
    }

    /// Adds `c cos(mα+lβ) + s sin(mα+lβ)`, folding negative frequencies.
    pub fn add_term(&mut self, key: (i32, i32), c: BigRational, s: BigRational) {
        let (key, s) = if key < (0, 0) {
            ((-key.0, -key.1), -s)
        } else {
            (key, s)
        };
        let s = if key == (0, 0) {
            BigRational::zero()
        } else {
            s
        };
        if c.is_zero() && s.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(key)
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        entry.0 += c;
        entry.1 += s;
        if entry.0.is_zero() && entry.1.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, k: &BigRational) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (key, (c, s)) in &self.terms {
            out.add_term(*key, c * k, s * k);
        }
        out
    }

    pub fn eval(&self, alpha: f64, beta: f64) -> f64 {
        self.terms
            .iter()
            .map(|((m, l), (c, s))| {
                let t = *m as f64 * alpha + *l as f64 * beta;
                let (sn, cs) = t.sin_cos();
                c.to_f64().unwrap_or(f64::NAN) * cs + s.to_f64().unwrap_or(f64::NAN) * sn
            })
            .sum()
    }

    /// Evaluation in any [`Real`]; coefficients pass through `f64`.
    pub fn eval_in<R: Real>(&self, alpha: &R, beta: &R) -> R {
        let mut acc = R::zero();
        for ((m, l), (c, s)) in &self.terms {
            let t = R::from_f64(*m as f64) * alpha.clone() + R::from_f64(*l as f64) * beta.clone();
            let (sn, cs) = t.sin_cos();
            acc = acc
                + R::from_f64(c.to_f64().unwrap_or(f64::NAN)) * cs
                + R::from_f64(s.to_f64().unwrap_or(f64::NAN)) * sn;
        }
        acc
    }

    /// Smallest `k` with `2^k` times every coefficient an integer, or `None`
    /// if some denominator has an odd factor.
    pub fn dyadic_exponent(&self) -> Option<u32> {
        let mut k = 0;
        for (c, s) in self.terms.values() {
            for x in [c, s] {
                let d = x.denom();
                let tz = d.trailing_zeros().unwrap_or(0);
                if (d >> tz) != BigInt::one() {
                    return None;
                }
                k = k.max(tz as u32);
            }
        }
        Some(k)
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_coefficient(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|(c, s)| [c, s])
            .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (key, (c, s)) in &rhs.terms {
            out.add_term(*key, c.clone(), s.clone());
        }
        out
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(&-BigRational::one())
    }
}

/// Product-to-sum expansion, term by term.
impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        let half = rational(1, 2);
        let mut out = TrigPoly::zero();
        for (&(m1, l1), (ca, sa)) in &self.terms {
            for (&(m2, l2), (cb, sb)) in &rhs.terms {
                let sum = (m1 + m2, l1 + l2);
                let diff = (m1 - m2, l1 - l2);
                // cos a cos b = ½[cos(a−b) + cos(a+b)]
                // sin a sin b = ½[cos(a−b) − cos(a+b)]
                let cc = ca * cb * &half;
                let ss = sa * sb * &half;
                out.add_term(diff, &cc + &ss, BigRational::zero());
                out.add_term(sum, &cc - &ss, BigRational::zero());
                // sin a cos b = ½[sin(a+b) + sin(a−b)]
                // cos a sin b = ½[sin(a+b) − sin(a−b)]
                let sc = sa * cb * &half;
                let cs = ca * sb * &half;
                out.add_term(sum, BigRational::zero(), &sc + &cs);
                out.add_term(diff, BigRational::zero(), &sc - &cs);
            }
        }
        out
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let angle = |m: i32, l: i32| -> String {
            let part = |k: i32, v: &str| match k {
                0 => String::new(),
                1 => v.to_string(),
                -1 => format!("-{v}"),
                _ => format!("{k}{v}"),
            };
            match (part(m, "α"), part(l, "β")) {
                (a, b) if b.is_empty() => a,
                (a, b) if a.is_empty() => b,
                (a, b) if b.starts_with('-') => format!("{a}{b}"),
                (a, b) => format!("{a}+{b}"),
            }
        };
        let mut first = true;
        for (&(m, l), (c, s)) in &self.terms {
            for (coef, func) in [(c, "cos"), (s, "sin")] {
                if coef.is_zero() {
                    continue;
                }
                let sign = if coef.is_negative() { "-" } else { "+" };
                if first {
                    if coef.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                first = false;
                let mag = coef.abs();
                let body = if (m, l) == (0, 0) {
                    String::new()
                } else {
                    format!("{func}({})", angle(m, l))
                };
                match (mag.is_one(), body.is_empty()) {
                    (true, false) => write!(f, "{body}")?,
                    (_, true) => write!(f, "{mag}")?,
                    (false, false) => write!(f, "{mag}·{body}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    m: i32,
    l: i32,
    cos: String,
    sin: String,
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(&(m, l), (c, sn))| TermRepr {
                m,
                l,
                cos: ratio_string(c),
                sin: ratio_string(sn),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut p = TrigPoly::zero();
        for t in terms {
            let c = parse_ratio(&t.cos).map_err(serde::de::Error::custom)?;
            let s = parse_ratio(&t.sin).map_err(serde::de::Error::custom)?;
            p.add_term((t.m, t.l), c, s);
        }
        Ok(p)
    }
}

fn ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn parse_ratio(s: &str) -> Result<BigRational, TrigPolyError> {
    let bad = || TrigPolyError::Coefficient(s.to_string());
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
