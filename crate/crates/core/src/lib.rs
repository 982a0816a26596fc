//! Exact arithmetic for `(n, k)`-wreaths and their wreath matrix.
//!
//! * [`combinat`]: wreaths, permutations, enumeration and the `S_n` action.
//! * [`matrixcore`]: dense exact linear algebra and the wreath matrix.
//! * [`spectral`]: eigenvalues, `b`-coefficients and eigenvalue polynomials.
//! * [`kernel`]: explicit kernel vectors and the orthogonality test.
//! * [`decomp`]: exact-cover search for decompositions and their certificates.
//!
//! No floating point is used anywhere; all counts, eigenvalues and vectors are
//! arbitrary-precision integers or rationals.

pub mod combinat;
pub mod decomp;
mod error;
pub mod json;
pub mod kernel;
pub mod matrixcore;
pub mod numbers;
pub mod scalar;
pub mod spectral;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use combinat::{KSubset, Perm, Wreath, WreathParams};
pub use error::{Error, Result};
pub use matrixcore::{ExactMatrix, ExactVector};
pub use scalar::ExactInt;

/// Wreath matrices: entries are at most `n / g`.
pub type WreathMatrix = ExactMatrix<i64>;
pub type IntMatrix = ExactMatrix<BigInt>;
pub type WideMatrix = ExactMatrix<i128>;
pub type IntVector = ExactVector<BigInt>;
pub type RatVector = ExactVector<BigRational>;
pub type Rational = BigRational;

/// Size limits for the expensive operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Largest `n` for which wreaths are enumerated.
    pub enumeration_n: u32,
    /// Largest dense matrix dimension.
    pub matrix_rows: usize,
    /// Largest number of group elements summed in a kernel vector.
    pub terms: u64,
    /// Largest explicit subgroup accepted by the character construction.
    pub subgroup: usize,
    /// Largest wreath matrix the spectrum is certified against.
    pub certify_rows: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration_n: 12,
            matrix_rows: 20_000,
            terms: 40_320,
            subgroup: 5_040,
            certify_rows: 1_000,
        }
    }
}
