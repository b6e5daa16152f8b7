use thiserror::Error;

/// Errors raised by the spectral engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("map is not an automorphism of the closed unit disk: {0}")]
    NotDiskAutomorphism(String),

    #[error("the identity map has no isolated fixed points; use the identity path")]
    IdentityMap,

    #[error(
        "rotation multiplier is within tolerance of a root of unity of order {order} > m_max = {m_max}; \
         declare it rational (m = {order}) or irrational"
    )]
    AmbiguousRationality { order: u32, m_max: u32 },

    #[error("zero polynomial weight is not allowed")]
    ZeroWeight,

    #[error("root finder did not converge after {iterations} iterations (last corrections: {trace:?})")]
    RootNonConvergence { iterations: usize, trace: Vec<f64> },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// Process exit code: 1 internal, 2 unsupported configuration, 3 schema
    /// or input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unsupported(_) | Error::Hypothesis(_) | Error::AmbiguousRationality { .. } | Error::IdentityMap => 2,
            Error::Schema(_) | Error::Invalid(_) | Error::ZeroWeight | Error::NotDiskAutomorphism(_) | Error::Degenerate(_) => 3,
            Error::RootNonConvergence { .. } => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
