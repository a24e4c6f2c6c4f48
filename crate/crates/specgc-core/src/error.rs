//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too coarse: requested coefficient {max_coeff} needs more than {grid_size} grid points")]
    GridTooCoarse { grid_size: usize, max_coeff: usize },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unstable model: companion spectral radius ~ {spectral_radius:.6} >= 1")]
    UnstableModel { spectral_radius: f64 },

    #[error("spectrum is not factorizable: log-det grid mean {log_det_mean:.6e} fails the Paley-Wiener check")]
    NotFactorizable { log_det_mean: f64 },

    #[error("factorization did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("insufficient coefficients: factor stores {available}, lag {requested} requested")]
    InsufficientCoefficients { available: usize, requested: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid channel group: {0}")]
    InvalidGroup(String),

    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { pivot: f64, index: usize },

    #[error("singular matrix in linear solve (pivot {pivot:.3e} at index {index})")]
    SingularMatrix { pivot: f64, index: usize },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap with a short description of where the failure happened.
    pub fn with_context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, unwrapping any context layers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
