use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance too large: {what} is {size}, cap is {cap}")]
    InstanceTooLarge { what: &'static str, size: usize, cap: usize },

    #[error("infeasible at every tested eps up to {bracket}")]
    Infeasible { bracket: f64 },

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("formula cannot be routed: {0}")]
    Unroutable(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
