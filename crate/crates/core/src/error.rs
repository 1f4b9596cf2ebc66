use thiserror::Error;

/// Errors raised by measure construction, transforms and density computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A measure description failed validation; the message names the field.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    /// A scalar argument lies outside the domain of the operation.
    #[error("argument out of range: {0}")]
    Domain(String),
    /// A grid is malformed or incompatible with the requested operation.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    /// A numerical routine could not produce a value.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A witness search ran but its preconditions are not met.
    #[error("no witness: {0}")]
    NoWitness(String),
    /// Malformed text input (measure specs, CSV).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
