use thiserror::Error;

use crate::combinat::KSubset;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("subset has {got} elements, expected {expected}")]
    BadSubsetSize { expected: u32, got: u32 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("no closed eigenvalue formula for n = {n}, k = {k} (1 < gcd < k, k does not divide n)")]
    UnsupportedRegime { n: u32, k: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("constructed vector is not in the kernel: {0}")]
    KernelCheckFailed(String),
    #[error("character restricted to the stabiliser of {witness} is trivial")]
    HypothesisFailed { witness: KSubset },
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("not a decomposition: {0}")]
    NotADecomposition(String),
    #[error("vector is not in the kernel of the wreath matrix")]
    NotInKernel,
    #[error("extraction failed: subset {witness} is not covered exactly once by positive wreaths")]
    ExtractionFailed { witness: KSubset },
    #[error("arithmetic overflow in fixed-width scalar")]
    Overflow,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid checkpoint: {0}")]
    InvalidCheckpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
