//! Reals that stay exact while every input is rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Relative slack used when either side of a comparison is a float.
pub const FLOAT_SLACK: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn int(v: i64) -> Real {
        Real::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn count(v: usize) -> Real {
        Real::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Real {
        Real::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Float(f) => *f,
        }
    }

    /// Exact comparison when both sides are rational; otherwise compares
    /// floats treating values within `FLOAT_SLACK` (relative) as equal.
    pub fn compare(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let slack = FLOAT_SLACK * a.abs().max(b.abs()).max(1.0);
                if (a - b).abs() <= slack {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn ge(&self, other: &Real) -> bool {
        self.compare(other) != Ordering::Less
    }

    pub fn le(&self, other: &Real) -> bool {
        self.compare(other) != Ordering::Greater
    }

    pub fn gt(&self, other: &Real) -> bool {
        self.compare(other) == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_negative(),
            Real::Float(f) => *f < 0.0,
        }
    }

    pub fn square(&self) -> Real {
        self * self
    }

    /// Smallest integer `>= self`, saturating at `u64::MAX`; negatives give 0.
    pub fn ceil_u64(&self) -> u64 {
        match self {
            Real::Exact(r) => {
                if r.is_negative() {
                    0
                } else {
                    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
                }
            }
            Real::Float(f) => {
                if *f <= 0.0 {
                    0
                } else if *f >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    f.ceil() as u64
                }
            }
        }
    }

    fn binary(
        &self,
        other: &Real,
        exact: fn(&BigRational, &BigRational) -> BigRational,
        float: fn(f64, f64) -> f64,
    ) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(exact(a, b)),
            _ => Real::Float(float(self.to_f64(), other.to_f64())),
        }
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::Float(v)
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl<'a> Div<&'a Real> for &'a Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        match (self, rhs) {
            (Real::Exact(a), Real::Exact(b)) if !b.is_zero() => Real::Exact(a / b),
            _ => Real::Float(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{r}"),
            Real::Float(v) => write!(f, "{v:?}"),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            _ => write!(f, "{}", self.to_f64()),
        }
    }
}
