//! Scalar abstraction shared by the double-precision fast path and the
//! extended-precision re-check path.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode};

/// Mantissa bits used by [`Ext`].
pub const EXT_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Ordered field operations plus the handful of transcendental functions the
/// unfolding code needs.
pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    /// `num/den · π`, computed at the working precision of the type.
    fn pi_fraction(num: i64, den: i64) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    #[inline]
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn pi_fraction(num: i64, den: i64) -> Self {
        std::f64::consts::PI * num as f64 / den as f64
    }
    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// A 128-bit-mantissa binary float.
#[derive(Clone)]
pub struct Ext(BigFloat);

impl Ext {
    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({})", self.0)
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        Ext(self.0.add(&rhs.0, EXT_PRECISION, RM))
    }
}

impl Sub for Ext {
    type Output = Ext;
    fn sub(self, rhs: Ext) -> Ext {
        Ext(self.0.sub(&rhs.0, EXT_PRECISION, RM))
    }
}

impl Mul for Ext {
    type Output = Ext;
    fn mul(self, rhs: Ext) -> Ext {
        Ext(self.0.mul(&rhs.0, EXT_PRECISION, RM))
    }
}

impl Div for Ext {
    type Output = Ext;
    fn div(self, rhs: Ext) -> Ext {
        Ext(self.0.div(&rhs.0, EXT_PRECISION, RM))
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext(self.0.neg())
    }
}

impl Real for Ext {
    fn from_f64(x: f64) -> Self {
        Ext(BigFloat::from_f64(x, EXT_PRECISION))
    }

    fn to_f64(&self) -> f64 {
        // astro-float has no direct narrowing; go through the decimal form,
        // which is exact enough for reporting.
        format!("{}", self.0).parse().unwrap_or(f64::NAN)
    }

    fn sqrt(&self) -> Self {
        Ext(self.0.sqrt(EXT_PRECISION, RM))
    }

    fn sin_cos(&self) -> (Self, Self) {
        CONSTS.with(|c| {
            let mut cc = c.borrow_mut();
            let s = self.0.sin(EXT_PRECISION, RM, &mut cc);
            let co = self.0.cos(EXT_PRECISION, RM, &mut cc);
            (Ext(s), Ext(co))
        })
    }

    fn pi_fraction(num: i64, den: i64) -> Self {
        let pi = CONSTS.with(|c| c.borrow_mut().pi(EXT_PRECISION, RM));
        let n = BigFloat::from_i64(num, EXT_PRECISION);
        let d = BigFloat::from_i64(den, EXT_PRECISION);
        Ext(pi.mul(&n, EXT_PRECISION, RM).div(&d, EXT_PRECISION, RM))
    }

    fn abs(&self) -> Self {
        Ext(self.0.abs())
    }
}
