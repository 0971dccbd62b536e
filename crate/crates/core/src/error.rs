//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("{context}: matrix is {rows}x{cols}, expected square")]
    NotSquare {
        rows: usize,
        cols: usize,
        context: String,
    },

    #[error("matrix is not symplectic for the given form (residual {residual:.3e} > tol {tol:.3e})")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("block decomposition needs size >= 3 (n >= 2), got {size}x{size}")]
    NoUBlock { size: usize },

    #[error("eigenvalue computation failed: {0}")]
    EigenFailure(String),

    #[error("classification is ambiguous within tolerance: {detail} (margin {margin:.3e})")]
    AmbiguousClassification { detail: String, margin: f64 },

    #[error("operation requires kind {expected}, element classified as {got}")]
    WrongKind { expected: String, got: String },

    #[error("degenerate cross-ratio configuration: pairing {pairing} vanishes")]
    DegenerateCrossRatio { pairing: &'static str },

    #[error("point is not interior (region {region}, form length {form_length:.3e})")]
    NonInterior { region: String, form_length: f64 },

    #[error("matrix is not in the expected normal form: {detail} (residual {residual:.3e})")]
    NotNormalForm { detail: String, residual: f64 },

    #[error("matrix is not diagonalizable within tolerance (residual {residual:.3e})")]
    NonDiagonalizable { residual: f64 },

    #[error("numeric overflow in iteration at step {step} (norm {norm:.3e})")]
    Overflow { step: usize, norm: f64 },

    #[error("determinant must be 1, got residual {residual:.3e}")]
    NotUnitDeterminant { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
