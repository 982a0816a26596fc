use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Dense row-major matrix over an exact scalar.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for ExactMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl<T: Clone + Zero> ExactMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(ExactMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn data(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> ExactMatrix<U> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: ExactInt> ExactMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Result<T> {
        (0..self.rows.min(self.cols)).try_fold(T::zero(), |acc, i| {
            acc.checked_add(self.get(i, i)).ok_or(Error::Overflow)
        })
    }

    pub fn to_bigint(&self) -> ExactMatrix<BigInt> {
        self.map(ExactInt::to_bigint)
    }

    pub fn convert<U: ExactInt>(&self) -> Result<ExactMatrix<U>> {
        let data = self
            .data
            .iter()
            .map(|x| U::from_bigint(&x.to_bigint()))
            .collect::<Result<Vec<U>>>()?;
        Ok(ExactMatrix::from_raw(self.rows, self.cols, data))
    }

    /// `self - lambda * I`.
    pub fn shifted(&self, lambda: &T) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("shift of non-square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i).checked_sub(lambda).ok_or(Error::Overflow)?;
            out.set(i, i, v);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (l, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (slot, b) in acc.iter_mut().zip(other.row(l)) {
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.checked_mul(b).ok_or(Error::Overflow)?;
                    *slot = slot.checked_add(&prod).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ExactVector<T>) -> Result<ExactVector<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        (0..self.rows)
            .map(|i| checked_dot(self.row(i), v.entries()))
            .collect::<Result<Vec<T>>>()
            .map(ExactVector::new)
    }
}

pub(crate) fn checked_dot<T: ExactInt>(a: &[T], b: &[T]) -> Result<T> {
    a.iter().zip(b).try_fold(T::zero(), |acc, (x, y)| {
        let prod = x.checked_mul(y).ok_or(Error::Overflow)?;
        acc.checked_add(&prod).ok_or(Error::Overflow)
    })
}

/// Dense vector, indexed by wreaths in canonical order when it comes from a
/// wreath matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactVector<T> {
    entries: Vec<T>,
}

impl<T> ExactVector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        ExactVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &T {
        &self.entries[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> ExactVector<U> {
        ExactVector {
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }
}

impl<T: Clone + Zero> ExactVector<T> {
    pub fn zeros(len: usize) -> Self {
        ExactVector {
            entries: vec![T::zero(); len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Inner product over a scalar that does not overflow (big integers,
    /// rationals).
    pub fn dot(&self, other: &Self) -> T
    where
        for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
    {
        assert_eq!(self.len(), other.len(), "dot of vectors of different length");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |acc, (a, b)| acc + a * b)
    }
}

impl<T: Clone + Zero + One> ExactVector<T> {
    pub fn ones(len: usize) -> Self {
        ExactVector {
            entries: vec![T::one(); len],
        }
    }
}
