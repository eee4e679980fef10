use thiserror::Error;

/// Errors raised by operator construction and the estimation routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("operator dimension must be at least 1")]
    EmptyOperator,

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("eigensolver failed to converge")]
    ConvergenceFailure,

    #[error("spectral function undefined at eigenvalue {eigenvalue:e}")]
    DomainError { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("expected a real result, imaginary part is {imaginary:e}")]
    NonRealResult { imaginary: f64 },

    #[error("state has weight {weight:e} outside the support of the reference state")]
    SupportViolation { weight: f64 },

    #[error("exponent magnitude {exponent:e} exceeds the overflow guard")]
    Overflow { exponent: f64 },

    #[error("constraints are linearly dependent (Gram condition number {condition:e})")]
    DependentConstraints { condition: f64 },

    #[error("infeasible: {reason}")]
    Infeasible { reason: String },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },

    #[error("base state is singular (min eigenvalue {min_eigenvalue:e})")]
    SingularBase { min_eigenvalue: f64 },

    #[error("operator is not traceless (trace {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("invalid integration step {step}")]
    StepInvalid { step: f64 },

    #[error("state lost positivity at lambda = {lambda} (min eigenvalue {min_eigenvalue:e})")]
    PositivityLoss { lambda: f64, min_eigenvalue: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn infeasible(reason: impl Into<String>) -> Self {
        Error::Infeasible {
            reason: reason.into(),
        }
    }
}
