//! Exact dense linear algebra and the wreath matrix `M(n, k)`.

mod certify;
mod dense;
mod elim;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use certify::eigen_certify;
pub use dense::{ExactMatrix, ExactVector};
pub use elim::{bareiss_rank, exact_nullspace, exact_rank, rank_mod_p};

use crate::combinat::{all_subsets, KSubset, Wreath, WreathParams};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;
use crate::Caps;

pub(crate) fn check_matrix_cap(dim: usize, caps: &Caps) -> Result<()> {
    if dim > caps.matrix_rows {
        return Err(Error::CapExceeded {
            what: "matrix dimension",
            value: dim as u64,
            cap: caps.matrix_rows as u64,
        });
    }
    Ok(())
}

/// `M[i][j]` = number of blocks shared by wreaths `i` and `j`.
pub fn build_wreath_matrix<T: ExactInt>(wreaths: &[Wreath], caps: &Caps) -> Result<ExactMatrix<T>> {
    let n = wreaths.len();
    check_matrix_cap(n, caps)?;
    let rows: Vec<Vec<T>> = wreaths
        .par_iter()
        .map(|a| {
            wreaths
                .iter()
                .map(|b| T::from_usize(a.common_blocks(b)).expect("block count fits"))
                .collect()
        })
        .collect();
    Ok(ExactMatrix::from_raw(n, n, rows.into_iter().flatten().collect()))
}

/// The 0/1 vector `w_T` marking the wreaths that contain `t`.
pub fn build_incidence<T: ExactInt>(
    params: &WreathParams,
    t: &KSubset,
    wreaths: &[Wreath],
) -> Result<ExactVector<T>> {
    t.check_size(params.k())?;
    Ok(ExactVector::new(
        wreaths
            .iter()
            .map(|w| if w.contains(t) { T::one() } else { T::zero() })
            .collect(),
    ))
}

/// For every `k`-subset, the indices of the wreaths containing it.
pub(crate) fn incidence_lists(params: &WreathParams, wreaths: &[Wreath]) -> Vec<(KSubset, Vec<usize>)> {
    let mut by_block: HashMap<KSubset, Vec<usize>> = HashMap::new();
    for (i, w) in wreaths.iter().enumerate() {
        for b in w.blocks() {
            by_block.entry(*b).or_default().push(i);
        }
    }
    all_subsets(params.n(), params.k())
        .into_iter()
        .map(|t| {
            let list = by_block.remove(&t).unwrap_or_default();
            (t, list)
        })
        .collect()
}

pub fn quadratic_form<T: ExactInt>(m: &ExactMatrix<T>, v: &[BigInt]) -> BigInt {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| {
            let row: BigInt = m
                .row(i)
                .iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, x)| a.to_bigint() * x)
                .sum();
            row * &v[i]
        })
        .sum()
}

/// `vᵀMv` evaluated as `Σ_T ⟨w_T, v⟩²`, never touching `M`.
pub fn rank_one_quadratic_form(params: &WreathParams, wreaths: &[Wreath], v: &[BigInt]) -> BigInt {
    assert_eq!(wreaths.len(), v.len());
    incidence_lists(params, wreaths)
        .iter()
        .map(|(_, list)| {
            let s: BigInt = list.iter().map(|&i| &v[i]).sum();
            &s * &s
        })
        .sum()
}

const PSD_SAMPLES: usize = 100;
const PSD_SEED: u64 = 0x5eed_2e47;

/// Checks `M = Σ_T w_T w_Tᵀ` entrywise, then checks on random integer
/// vectors that `vᵀMv` equals the non-negative sum of squares `Σ_T ⟨w_T,v⟩²`.
pub fn verify_rank_one_decomposition<T: ExactInt>(
    params: &WreathParams,
    m: &ExactMatrix<T>,
    wreaths: &[Wreath],
    caps: &Caps,
) -> Result<bool> {
    let n = wreaths.len();
    check_matrix_cap(n, caps)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for {n} wreaths",
            m.rows(),
            m.cols()
        )));
    }
    let mut sum = vec![0u32; n * n];
    for (_, list) in incidence_lists(params, wreaths) {
        for &a in &list {
            for &b in &list {
                sum[a * n + b] += 1;
            }
        }
    }
    let entries_match = sum
        .iter()
        .zip(m.data())
        .all(|(s, x)| T::from_u32(*s).as_ref() == Some(x));
    if !entries_match {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PSD_SEED);
    for _ in 0..PSD_SAMPLES {
        let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-10i64..=10))).collect();
        let direct = quadratic_form(m, &v);
        if direct.is_negative() || direct != rank_one_quadratic_form(params, wreaths, &v) {
            return Ok(false);
        }
    }
    Ok(true)
}
