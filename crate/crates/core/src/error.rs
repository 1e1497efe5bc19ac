use thiserror::Error;

/// Errors raised by the algebra kernel and the verification harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable tables cannot be merged: {0}")]
    IncompatibleVariables(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("both polynomials are constant in `{0}`")]
    BothConstantInV(String),
    #[error("polynomial is constant in `{0}`")]
    ConstantInV(String),
    #[error("variable `{0}` is not part of the projection order")]
    VariableNotInOrder(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("Macaulay minor vanishes after {0} coordinate changes")]
    DegenerateMinor(usize),
    #[error("input is not homogeneous of the declared degree: {0}")]
    InhomogeneousInput(String),
    #[error("variable `{0}` already occurs in the polynomial")]
    VariableCollision(String),
    #[error("specialized value is not a rational square")]
    NotASquare,
    #[error("computation exceeds the feasibility limits: {0}")]
    InfeasibleSize(String),
    #[error("cache entry differs from recomputation for key {0}")]
    CacheMismatch(String),
    #[error("cache i/o: {0}")]
    Io(String),
    #[error("invalid specialization plan: {0}")]
    InvalidPlan(String),
    #[error("{0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
