//! Fraction-free elimination over the integers, plus elimination modulo a
//! prime for fast rank lower bounds.
//!
//! Every intermediate entry of a Bareiss step is a minor of the input, so
//! the division by the previous pivot is exact and no rationals appear until
//! a nullspace basis is read off the reduced form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dense::{ExactMatrix, ExactVector};
use crate::error::{Error, Result};
use super::check_matrix_cap;
use crate::scalar::{checked_cross, ExactInt};
use crate::Caps;

/// Fraction-free reduced row form: pivot row `r` has its pivot in column
/// `pivots[r]` and zeros in every other pivot column.
pub(crate) struct Reduced<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

fn eliminate<T: ExactInt>(m: &ExactMatrix<T>, reduce_above: bool) -> Result<Reduced<T>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<T>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("row r exists");
        let pivot = pivot_row[c].clone();
        let above: &mut [Vec<T>] = if reduce_above { head } else { &mut [] };
        for row in below.iter_mut().chain(above.iter_mut()) {
            let factor = row[c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                if factor.is_zero() {
                    if row[j].is_zero() {
                        continue;
                    }
                    let scaled = pivot.checked_mul(&row[j]).ok_or(Error::Overflow)?;
                    row[j] = scaled.exact_div(&prev);
                } else {
                    let v = checked_cross(&pivot, &row[j], &factor, &pivot_row[j])?;
                    row[j] = v.exact_div(&prev);
                }
            }
            row[c] = T::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Ok(Reduced { rows: a, pivots })
}

/// Rank by Bareiss elimination in the scalar type itself; fixed-width types
/// may fail with [`Error::Overflow`].
pub fn bareiss_rank<T: ExactInt>(m: &ExactMatrix<T>) -> Result<usize> {
    Ok(eliminate(m, false)?.pivots.len())
}

/// Exact rank over the rationals, computed in arbitrary precision.
pub fn exact_rank<T: ExactInt>(m: &ExactMatrix<T>, caps: &Caps) -> Result<usize> {
    check_matrix_cap(m.rows().max(m.cols()), caps)?;
    bareiss_rank(&m.to_bigint())
}

pub(crate) fn reduce<T: ExactInt>(m: &ExactMatrix<T>) -> Result<Reduced<BigInt>> {
    eliminate(&m.to_bigint(), true)
}

/// Basis of the right nullspace over the rationals, one vector per non-pivot
/// column, with a 1 in that column.
pub fn exact_nullspace<T: ExactInt>(
    m: &ExactMatrix<T>,
    caps: &Caps,
) -> Result<Vec<ExactVector<BigRational>>> {
    check_matrix_cap(m.rows().max(m.cols()), caps)?;
    let reduced = reduce(m)?;
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &c in &reduced.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(cols - reduced.pivots.len());
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in reduced.rows.iter().zip(&reduced.pivots) {
            if !row[free].is_zero() {
                v[pc] = -BigRational::new(row[free].clone(), row[pc].clone());
            }
        }
        basis.push(ExactVector::new(v));
    }
    Ok(basis)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Rank over `GF(p)`; `p` must be prime. Never exceeds the rank over `Q`.
pub fn rank_mod_p<T: ExactInt>(m: &ExactMatrix<T>, p: u64) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| m.row(i).iter().map(|x| x.residue(p)).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        let pivot_row: Vec<u64> = a[r].iter().map(|&x| mul_mod(x, inv, p)).collect();
        for row in a.iter_mut().skip(r + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, pivot_row[j], p);
                row[j] = if row[j] >= sub { row[j] - sub } else { row[j] + p - sub };
            }
        }
        r += 1;
    }
    r
}
