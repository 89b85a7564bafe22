//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("operator is not Hermitian (max |A - A\u{2020}| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error(
        "norm drift at t = {t:.6}: {deviation:.3e} beyond the {limit:.0e} tolerance; \
         the fixed step dt = {dt} is too coarse for this Hamiltonian, reduce it"
    )]
    NormDrift {
        t: f64,
        deviation: f64,
        limit: f64,
        dt: f64,
    },

    #[error("non-finite amplitudes at t = {t:.6}; integration aborted")]
    NonFinite { t: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
