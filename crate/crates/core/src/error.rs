use thiserror::Error;

/// Errors raised while constructing or analysing bipartite states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local dimension {0} is below the minimum of 2")]
    DimensionTooSmall(usize),

    #[error("local dimension {d} exceeds the configured cap of {cap}")]
    DimensionAboveCap { d: usize, cap: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("amplitudes are not normalized: |norm^2 - 1| = {0:e}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian: residual {0:e}")]
    NotHermitian(f64),

    #[error("trace is not 1: |tr - 1| = {0:e}")]
    TraceNotOne(f64),

    #[error("trace must be positive, found {0:e}")]
    NonPositiveTrace(f64),

    #[error("matrix is not positive semidefinite: minimum eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("local operator is singular")]
    SingularOperator,

    #[error("fidelity {f} outside the admissible range [{lo}, {hi}]")]
    FidelityOutOfRange { f: f64, lo: f64, hi: f64 },

    #[error("Schmidt number {k} outside [1, {max}]")]
    SchmidtNumberOutOfRange { k: usize, max: usize },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("invalid qubit count {0}: expected an even number in [4, 12]")]
    InvalidQubitCount(usize),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
