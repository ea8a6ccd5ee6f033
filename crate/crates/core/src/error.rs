//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("cutoff mismatch: state built on n_max={state}, operator on n_max={operator}")]
    CutoffMismatch { state: usize, operator: usize },

    #[error("Fock occupation n={n} exceeds the truncation cutoff n_max={n_max}")]
    FockExceedsCutoff { n: usize, n_max: usize },

    #[error(
        "truncated tail mass {tail:.3e} exceeds tolerance {tolerance:.3e} at n_max={n_max}; \
         raise the cutoff or relax the tolerance"
    )]
    TailMassAboveTolerance {
        tail: f64,
        tolerance: f64,
        n_max: usize,
    },

    #[error("cutoff n_max={n_max} too large for a dense two-mode matrix (limit {limit})")]
    CutoffTooLargeForDense { n_max: usize, limit: usize },

    #[error("analytic maximum check failed for {family}: closed form {closed_form}, search found {searched}")]
    MaximumMismatch {
        family: String,
        closed_form: f64,
        searched: f64,
    },

    #[error("Monte-Carlo run produced no usable trials in setup {setup}")]
    NoUsableTrials { setup: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
