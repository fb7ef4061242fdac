use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pivot fell at or below the singularity threshold during factorization.
    #[error("singular matrix: pivot {pivot:e} in column {column} at or below threshold {threshold:e}")]
    SingularMatrix {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The point lies outside the real domain of the residual map, or the
    /// evaluation produced a non-finite value.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("trace holds {found} usable step norms, at least 3 are required")]
    InsufficientTrace { found: usize },

    #[error("degenerate trace: {0}")]
    DegenerateTrace(String),

    #[error("rejection sampling exhausted after {rejections} rejected draws")]
    SamplingExhausted { rejections: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
