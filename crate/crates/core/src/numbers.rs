//! Arbitrary-precision factorials and binomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Factorial of a possibly negative argument; callers only reach negative
/// arguments in terms that are multiplied by zero, so this panics.
pub(crate) fn factorial_i(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative argument {n}");
    factorial(n as u64)
}

/// `C(x, y)`, zero whenever `x < 0`, `y < 0` or `y > x`.
pub fn binomial(x: i64, y: i64) -> BigInt {
    if x < 0 || y < 0 || y > x {
        return BigInt::zero();
    }
    let y = y.min(x - y);
    let mut acc = BigInt::one();
    for i in 0..y {
        acc = acc * (x - i) / (i + 1);
    }
    acc
}

pub fn pow(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

pub(crate) fn sign(even: bool) -> BigInt {
    if even {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Converts a rational that must be integral.
pub(crate) fn expect_integer(q: &BigRational, what: &str) -> BigInt {
    assert!(q.is_integer(), "{what} evaluated to non-integer {q}");
    q.to_integer()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3_628_800));
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
    }
}
