use thiserror::Error;

use crate::values::Value;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degree bound exceeded: degree {degree} > bound {bound} ({context})")]
    DegreeBoundExceeded {
        degree: usize,
        bound: usize,
        context: &'static str,
    },
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("precision exhausted: value is >= {bound}")]
    PrecisionExhausted { bound: Value },
    #[error("refiner exhausted: {0}")]
    RefinerExhausted(String),
    #[error("(TE1) wild ramification: e = {e} is divisible by char = {characteristic}")]
    Wild { e: u64, characteristic: u64 },
    #[error("(TE2) inseparable residue extension: {0}")]
    Inseparable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("nonzero valuation: {0}")]
    NonzeroValuation(Value),
    #[error("no root exists: {0}")]
    NoRoot(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("max steps reached: {0}")]
    MaxSteps(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
