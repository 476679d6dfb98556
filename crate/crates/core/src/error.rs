use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input data (tables, matrices, scenario fields).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A map that does not respect the relations of its source.
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    /// A map that does not commute with the group action.
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    /// A sequence that was required to be exact is not.
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    /// A request outside the supported range.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An enumeration exceeding its budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
