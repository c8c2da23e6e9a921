use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke a documented precondition (e.g. a non-hermitian matrix
    /// passed to the hermitian solver).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("eigensolver failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("invalid spin or basis: {0}")]
    InvalidBasis(String),

    /// Parameter set fails the quasi-hermiticity or positivity conditions.
    /// Each entry names one violated condition.
    #[error("invalid model parameters: {}", .violated.join("; "))]
    InvalidParameters { violated: Vec<String> },

    #[error("parameter outside the domain of {operation}: {reason}")]
    Domain {
        operation: &'static str,
        reason: String,
    },

    #[error("metric exponent {exponent:.3} exceeds the representable range (limit {limit})")]
    MetricOverflow { exponent: f64, limit: f64 },

    #[error("zero state vector")]
    ZeroVector,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, actual: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn domain(operation: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            operation,
            reason: reason.into(),
        }
    }

    /// Stable machine-readable kind, used in CLI error JSON and FFI status mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ContractViolation(_) => "contract_violation",
            Error::NoConvergence { .. } => "no_convergence",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::InvalidBasis(_) => "invalid_basis",
            Error::InvalidParameters { .. } => "invalid_parameters",
            Error::Domain { .. } => "domain",
            Error::MetricOverflow { .. } => "metric_overflow",
            Error::ZeroVector => "zero_vector",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
