//! Exact scalar types the linear algebra is generic over.
//!
//! Everything here is integral: fixed-width integers are used with checked
//! arithmetic (overflow surfaces as [`Error::Overflow`](crate::Error::Overflow))
//! and [`BigInt`] never overflows. Rational results are built as
//! `Ratio<BigInt>` on top of an integer elimination.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait ExactInt:
    Clone
    + Debug
    + Display
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// Least non-negative residue modulo `p`.
    fn residue(&self, p: u64) -> u64;

    fn to_bigint(&self) -> BigInt;

    /// Converts back from a big integer, failing when it does not fit.
    fn from_bigint(x: &BigInt) -> Result<Self>;

    /// Division known to be exact (fraction-free elimination steps).
    fn exact_div(&self, d: &Self) -> Self;
}

macro_rules! impl_exact_int_primitive {
    ($($t:ty),*) => {$(
        impl ExactInt for $t {
            fn residue(&self, p: u64) -> u64 {
                (*self as i128).rem_euclid(p as i128) as u64
            }

            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            fn from_bigint(x: &BigInt) -> Result<Self> {
                <$t>::try_from(x).map_err(|_| Error::Overflow)
            }

            fn exact_div(&self, d: &Self) -> Self {
                debug_assert_eq!(self % d, 0, "inexact division {} / {}", self, d);
                self / d
            }
        }
    )*};
}

impl_exact_int_primitive!(i32, i64, i128);

impl ExactInt for BigInt {
    fn residue(&self, p: u64) -> u64 {
        self.mod_floor(&BigInt::from(p))
            .to_u64()
            .expect("residue fits in u64")
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(x: &BigInt) -> Result<Self> {
        Ok(x.clone())
    }

    fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division {self} / {d}");
        q
    }
}

/// `a * b - c * d`, checked.
#[inline]
pub(crate) fn checked_cross<T: ExactInt>(a: &T, b: &T, c: &T, d: &T) -> Result<T> {
    let ab = a.checked_mul(b).ok_or(Error::Overflow)?;
    let cd = c.checked_mul(d).ok_or(Error::Overflow)?;
    ab.checked_sub(&cd).ok_or(Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_non_negative() {
        assert_eq!((-7i64).residue(5), 3);
        assert_eq!(BigInt::from(-7).residue(5), 3);
        assert_eq!((12i128).residue(5), 2);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX;
        assert!(matches!(
            checked_cross(&big, &2, &0, &0),
            Err(Error::Overflow)
        ));
        assert!(i32::from_bigint(&BigInt::from(1u64 << 40)).is_err());
    }
}
