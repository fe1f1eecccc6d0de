//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum SchmidtError {
    /// An argument lies outside the mathematical domain of the operation
    /// (negative `erfcx` argument, non-positive `η`, entropy order `p ≤ 1`, …).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid construction parameters for grids or kernels.
    #[error("construction error: {0}")]
    Construction(String),

    /// A numerical step failed: factorization breakdown, NaN from a sampled
    /// function, a purity outside `(0, 1]`, or a broken normalization.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, SchmidtError>;
