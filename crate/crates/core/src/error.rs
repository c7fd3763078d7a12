use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvfError {
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element outside the valuation ring")]
    OutOfRing,
    #[error("unsatisfiable constraint: {0}")]
    Unsatisfiable(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("zero coordinate vector")]
    ZeroVector,
    #[error("tuple is not in E_n (defect {0})")]
    NotInE(String),
    #[error("point is not in D_n")]
    NotInDn,
    #[error("no bounded row: defect equals 1")]
    NoBoundedRow,
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("field is not ordered")]
    UnorderedField,
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("root not found: {0}")]
    RootNotFound(String),
    #[error("ramification exceeds bound {0}")]
    RamificationExceeded(u32),
    #[error("malformed family: {0}")]
    MalformedFamily(String),
    #[error("identity check failed: {0}")]
    IdentityFailure(String),
    #[error("coefficient outside the valuation ring: {0}")]
    CoefficientOutsideRing(String),
    #[error("parse error at {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, MvfError>;
