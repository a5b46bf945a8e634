//! Exact signed integer accumulation with an `i128` fast path.
//!
//! Sums start in machine integers and spill into a `BigInt` the first time an
//! operation would overflow, so callers never have to size their accumulator.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign};

#[derive(Clone, Debug)]
pub enum ExactInt {
    Small(i128),
    Big(BigInt),
}

impl Default for ExactInt {
    fn default() -> Self {
        ExactInt::Small(0)
    }
}

impl ExactInt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_i128(v: i128) -> Self {
        ExactInt::Small(v)
    }

    /// `base^exp` for a non-negative base, promoting on overflow.
    pub fn pow_u64(base: u64, exp: u32) -> Self {
        match (base as i128).checked_pow(exp) {
            Some(v) => ExactInt::Small(v),
            None => ExactInt::Big(BigInt::from(base).pow(exp)),
        }
    }

    pub fn add_i128(&mut self, v: i128) {
        match self {
            ExactInt::Small(a) => match a.checked_add(v) {
                Some(s) => *a = s,
                None => *self = ExactInt::Big(BigInt::from(*a) + BigInt::from(v)),
            },
            ExactInt::Big(b) => *b += BigInt::from(v),
        }
    }

    pub fn add_exact(&mut self, other: &ExactInt) {
        match other {
            ExactInt::Small(v) => self.add_i128(*v),
            ExactInt::Big(v) => {
                let mut big = self.to_bigint();
                big += v;
                *self = ExactInt::Big(big);
            }
        }
    }

    /// Multiply by a signed machine integer.
    pub fn mul_i128(&self, m: i128) -> ExactInt {
        match self {
            ExactInt::Small(a) => match a.checked_mul(m) {
                Some(p) => ExactInt::Small(p),
                None => ExactInt::Big(BigInt::from(*a) * BigInt::from(m)),
            },
            ExactInt::Big(b) => ExactInt::Big(b * BigInt::from(m)),
        }
    }

    pub fn mul_exact(&self, other: &ExactInt) -> ExactInt {
        match (self, other) {
            (ExactInt::Small(a), ExactInt::Small(b)) => match a.checked_mul(*b) {
                Some(p) => ExactInt::Small(p),
                None => ExactInt::Big(BigInt::from(*a) * BigInt::from(*b)),
            },
            _ => ExactInt::Big(self.to_bigint() * other.to_bigint()),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            ExactInt::Small(v) => BigInt::from(*v),
            ExactInt::Big(b) => b.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactInt::Small(v) => *v as f64,
            ExactInt::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactInt::Small(v) => *v == 0,
            ExactInt::Big(b) => b.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExactInt::Small(v) => *v < 0,
            ExactInt::Big(b) => b.sign() == num_bigint::Sign::Minus,
        }
    }
}

impl PartialEq for ExactInt {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactInt::Small(a), ExactInt::Small(b)) => a == b,
            _ => self.to_bigint() == other.to_bigint(),
        }
    }
}

impl Eq for ExactInt {}

impl PartialOrd for ExactInt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactInt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (ExactInt::Small(a), ExactInt::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl From<i128> for ExactInt {
    fn from(v: i128) -> Self {
        ExactInt::Small(v)
    }
}

impl From<i64> for ExactInt {
    fn from(v: i64) -> Self {
        ExactInt::Small(v as i128)
    }
}

impl From<u64> for ExactInt {
    fn from(v: u64) -> Self {
        ExactInt::Small(v as i128)
    }
}

impl From<BigInt> for ExactInt {
    fn from(v: BigInt) -> Self {
        match v.to_i128() {
            Some(s) => ExactInt::Small(s),
            None => ExactInt::Big(v),
        }
    }
}

impl AddAssign<&ExactInt> for ExactInt {
    fn add_assign(&mut self, rhs: &ExactInt) {
        self.add_exact(rhs);
    }
}

impl Add for ExactInt {
    type Output = ExactInt;
    fn add(mut self, rhs: ExactInt) -> ExactInt {
        self.add_exact(&rhs);
        self
    }
}

impl std::iter::Sum for ExactInt {
    fn sum<I: Iterator<Item = ExactInt>>(iter: I) -> Self {
        iter.fold(ExactInt::zero(), |a, b| a + b)
    }
}

impl fmt::Display for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactInt::Small(v) => write!(f, "{v}"),
            ExactInt::Big(b) => write!(f, "{b}"),
        }
    }
}
