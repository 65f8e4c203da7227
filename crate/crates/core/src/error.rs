use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex index {index} out of range for graph on {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("graphs must have at least one vertex")]
    EmptyGraph,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search budget exceeded (best lower bound {lower}, upper bound {upper})")]
    BudgetExceeded { lower: usize, upper: usize },

    #[error("enumeration cap of {cap} exceeded ({found} found so far)")]
    CapExceeded { cap: usize, found: usize },

    #[error("size guard exceeded: {what} = {size} > {limit}")]
    Guard { what: &'static str, size: u128, limit: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("conditioning event has probability zero")]
    EmptyConditioning,

    #[error("independence ratio {0} outside the open interval (1/4, 1/2)")]
    RatioOutOfRange(String),

    #[error("retry cap of {cap} exceeded after accepting {accepted} tuples")]
    RetryCapExceeded { cap: usize, accepted: usize },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),
}
