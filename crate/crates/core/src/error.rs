use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("conditioning event has probability zero")]
    UndefinedConditional,
    #[error("total probability is zero; posteriors are undefined")]
    UndefinedPosterior,
    #[error("needle geometry: spacing {spacing} must exceed needle length {length}")]
    Geometry { length: f64, spacing: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("problem too large: {0}")]
    Size(String),
    #[error("chain is not ergodic; no unique stationary distribution")]
    NotErgodic,
    #[error("normal equations are singular (rank deficient system)")]
    Singular,
    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize },
    #[error("grid error: {0}")]
    Grid(String),
    #[error("map error: {0}")]
    Map(String),
    #[error("correlation undefined: a coordinate is constant")]
    UndefinedCorrelation,
    #[error("degenerate bivariate law: |r| must be below 1, got {0}")]
    DegenerateLaw(f64),
    #[error("internal solver failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
