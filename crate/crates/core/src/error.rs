use thiserror::Error;

/// Errors raised by the arithmetic kernel and the theorem engines.
///
/// `Invariant` is reserved for internal consistency checks that can only
/// fail on an implementation bug; everything else is an input problem.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("coefficient not in field: {0}")]
    NotInField(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is constant")]
    Constant,
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("certificate mismatch: {0}")]
    Mismatch(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
