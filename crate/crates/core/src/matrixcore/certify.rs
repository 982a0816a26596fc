//! Certification of a claimed spectrum of an integer matrix.
//!
//! The claim is a list of eigenvalues with multiplicities summing to the
//! dimension. It is accepted iff
//!
//! 1. `∏(M - λI) · M = 0` over the distinct claimed values (checked exactly),
//! 2. `rank(M - λI) = dim - m(λ)` for every distinct claimed `λ`.
//!
//! For symmetric `M`, (1) makes `M` diagonalizable with every eigenvalue among
//! the claimed values and zero, so the nullities of `M - λI` over those values
//! add up to `dim`. A rank modulo a prime is a lower bound for the rank over
//! `Q`, so `rank_p(M - λI) = dim - m(λ)` for every value (zero included, with
//! multiplicity zero when unclaimed) forces every nullity to equal its claim.
//! When no prime reaches the expected rank, or `M` is not symmetric, ranks
//! fall back to exact Bareiss elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::dense::ExactMatrix;
use super::elim::{bareiss_rank, rank_mod_p};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

const PRIMES: [u64; 3] = [(1 << 61) - 1, 1_000_000_007, 998_244_353];

pub fn eigen_certify<T: ExactInt>(m: &ExactMatrix<T>, claimed: &[(BigInt, u64)]) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            m.rows(),
            m.cols()
        )));
    }
    let dim = m.rows() as u64;
    let total: u64 = claimed.iter().map(|(_, mult)| mult).sum();
    if total != dim {
        return Err(Error::DimensionMismatch(format!(
            "multiplicities sum to {total}, dimension is {dim}"
        )));
    }
    let mut merged: BTreeMap<BigInt, u64> = BTreeMap::new();
    for (value, mult) in claimed {
        *merged.entry(value.clone()).or_default() += mult;
    }
    let nonzero: Vec<BigInt> = merged.keys().filter(|v| !v.is_zero()).cloned().collect();
    if !annihilates(m, &nonzero)? {
        log::debug!("claimed values do not annihilate the matrix");
        return Ok(false);
    }
    let symmetric = m.is_symmetric();
    if symmetric {
        merged.entry(BigInt::zero()).or_default();
    }
    let big = m.to_bigint();
    for (value, mult) in &merged {
        let expected = (dim - mult) as usize;
        let shifted = big.shifted(value)?;
        let rank = if symmetric {
            modular_rank_hit(&shifted, expected)
        } else {
            None
        };
        let rank = match rank {
            Some(r) => r,
            None => bareiss_rank(&shifted)?,
        };
        if rank != expected {
            log::debug!("rank of M - {value}I is {rank}, expected {expected}");
            return Ok(false);
        }
    }
    Ok(true)
}

/// The modular rank, if some prime certifies a rank of at least `expected`.
fn modular_rank_hit(m: &ExactMatrix<BigInt>, expected: usize) -> Option<usize> {
    for p in PRIMES {
        let r = rank_mod_p(m, p);
        if r >= expected {
            return Some(r);
        }
    }
    None
}

fn annihilates<T: ExactInt>(m: &ExactMatrix<T>, values: &[BigInt]) -> Result<bool> {
    match m.convert::<i128>().and_then(|w| annihilates_in(&w, values)) {
        Err(Error::Overflow) => annihilates_in(&m.to_bigint(), values),
        other => other,
    }
}

fn annihilates_in<U: ExactInt>(m: &ExactMatrix<U>, values: &[BigInt]) -> Result<bool> {
    let mut product = m.clone();
    for value in values {
        let shift = U::from_bigint(value)?;
        product = m.shifted(&shift)?.checked_mul(&product)?;
    }
    Ok(product.is_zero())
}
