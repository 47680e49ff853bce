//! Crate-wide error type.

use thiserror::Error;

/// Errors shared across the geometry, GPT, quotienting, embedding and
/// application layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unnormalized body: vertex {index} has <unit, v> = {value}")]
    UnnormalizedBody { index: usize, value: String },

    #[error("cone is not pointed (contains a line)")]
    NotPointed,

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("unbounded body: {0}")]
    UnboundedBody(String),

    #[error("center lies outside the body")]
    CenterOutsideBody,

    #[error("shrink factor {0} lies outside [0, 1]")]
    InvalidShrink(String),

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("unknown catalog name `{0}`")]
    UnknownName(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("inconsistent table: {0}")]
    InconsistentTable(String),

    #[error("no unit functional exists in the effect span: {0}")]
    RankDeficientNormalization(String),

    #[error("model does not reproduce the quotiented statistics: {0}")]
    ModelMismatch(String),

    #[error("representation map is not well defined: {0}")]
    NotWellDefined(String),

    #[error("state/effect spans are incompatible: {0}")]
    SpanMismatch(String),

    #[error("pairs do not sum to the identity on the state span")]
    NotIdentityDecomposition,

    #[error("quasiprobability representation is not positive")]
    NotPositive,

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("normalization violated beyond the declared uncertainty: {0}")]
    NormalizationViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
