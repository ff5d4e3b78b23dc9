use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension {dim} exceeds the supported maximum of {max}")]
    DimensionLimit { dim: usize, max: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("input is not a lattice polytope")]
    NotLattice,

    #[error("containment violated: {0}")]
    NotContained(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("lifting stayed non-generic after {attempts} attempts")]
    NonGenericLifting { attempts: usize },

    #[error("singular matrix")]
    Singular,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("polynomial {0} is the zero polynomial")]
    ZeroRow(usize),

    #[error("support point {0} has no non-zero coefficient")]
    ZeroColumn(usize),

    #[error("{equations} equations in {variables} variables")]
    EquationCount { equations: usize, variables: usize },

    #[error("malformed input: {0}")]
    Format(String),

    /// Two routes that must agree produced different answers.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    /// True for errors that signal an internal disagreement rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::CrossCheck(_))
    }
}
