use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field element.
///
/// Unlike `num_traits::Zero`/`One`, constants are produced from an existing
/// element (`zero_like`, `one_like`), because elements of `F_q(t)` carry their
/// constant field at runtime. Division by zero panics; use [`checked_inv`]
/// when the divisor is not known to be nonzero.
///
/// [`checked_inv`]: FieldElement::checked_inv
pub trait FieldElement:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.one_like() / self.clone())
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `self^e` for a signed exponent; `None` when `self = 0` and `e < 0`.
    fn pow_i64(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow_u64(e as u64))
        } else {
            self.checked_inv().map(|inv| inv.pow_u64(e.unsigned_abs()))
        }
    }
}

impl FieldElement for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// Sign of a rational: -1, 0 or 1.
pub fn rational_sign(x: &BigRational) -> i8 {
    if Zero::is_zero(x) {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
