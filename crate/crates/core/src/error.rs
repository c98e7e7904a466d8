use thiserror::Error;

/// Errors produced by the toric MLE library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Structurally invalid input (too few vertices, empty matrix, bad strings).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A value outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Vector lengths that do not line up with the model.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Birch's theorem needs every count to be positive.
    #[error("data vector has a zero entry at index {index}; Birch's theorem requires strictly positive counts")]
    ZeroCount { index: usize },

    #[error("unknown model '{0}'")]
    UnknownModel(String),

    #[error("unsupported model '{model}': {reason}")]
    Unsupported { model: String, reason: String },

    /// Newton iteration failed to certify a solution.
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    /// No closed-form root candidate passed the moment and variety certificates.
    #[error("closed form for {model}: no candidate passed the certificates ({candidates} tried)")]
    Inconsistent {
        model: String,
        candidates: usize,
        roots: Vec<Vec<f64>>,
        residuals: Vec<(f64, f64)>,
    },

    /// Too many non-generic data draws while counting critical points.
    #[error("genericity failure: {discarded} draws discarded")]
    Genericity { discarded: usize },

    /// Invariant violation inside the library (indicates a bug or corrupted input).
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
