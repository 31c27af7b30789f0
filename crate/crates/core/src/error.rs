//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Total Hilbert-space dimension would exceed the addressable guard.
    #[error("dimension guard: {dim} exceeds limit {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    /// A coherent-state cutoff leaves more than the tolerated tail mass.
    #[error(
        "cutoff {cutoff} too small for |alpha| = {alpha_abs}: \
         retained probability {retained} < 1 - {tail_tol}"
    )]
    Truncation {
        cutoff: usize,
        alpha_abs: f64,
        retained: f64,
        tail_tol: f64,
    },

    /// Raising a mode would push population past its top Fock level.
    #[error("cutoff overflow on mode {mode}: top-level population {population} > {tol}")]
    CutoffOverflow {
        mode: usize,
        population: f64,
        tol: f64,
    },

    /// Two states or operators live in different mode spaces.
    #[error("mode space mismatch: {left:?} vs {right:?}")]
    SpaceMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("mode index {mode} out of range for {mode_count} modes")]
    ModeIndex { mode: usize, mode_count: usize },

    #[error("state norm^2 = {norm_sqr} deviates from 1 beyond {tol}")]
    Unnormalized { norm_sqr: f64, tol: f64 },

    #[error("partial trace requires a non-empty set of kept modes")]
    EmptyKeepSet,

    /// Fit input does not constrain the model (too few points or span
    /// below half a period).
    #[error("degenerate fringe data: {reason}")]
    DegenerateFringe { reason: String },

    /// Sampling config violates the Nyquist guard on the pulse train.
    #[error("nyquist guard: {reason}")]
    NyquistGuard { reason: String },

    /// Catch-all for parameter guards (gain range, step counts, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
