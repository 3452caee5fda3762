use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range [2, 2^61 - 1]")]
    OutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("polynomial is not multilinear in x{}", .0 + 1)]
    NotMultilinearInVar(usize),
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("the two variables must differ (both are x{})", .0 + 1)]
    SameVariable(usize),
    #[error("variable x{} does not occur in the polynomial", .0 + 1)]
    VariableNotPresent(usize),
    #[error("index set overlaps the distinguished pair")]
    IndexOverlap,
    #[error("sample set is empty")]
    EmptySampleSet,
    #[error("interpolation grid is missing a sample")]
    IncompleteGrid,
    #[error("interpolation axis has a repeated node")]
    DuplicateNode,
    #[error("cut does not separate the polynomial additively")]
    NotSeparableAlongCut,
    #[error("polynomial is not decomposable along the requested pair")]
    NotDecomposable,
    #[error("polynomial has {found} live variables, at most {limit} allowed")]
    TooManyVariables { found: usize, limit: usize },
    #[error("polynomial needs at least {needed} live variables, found {found}")]
    TooFewVariables { needed: usize, found: usize },
    #[error("arity {0} is too small for this operation")]
    ArityTooSmall(usize),
    #[error("field of size {p} is too small: {reason}")]
    FieldTooSmall { p: u64, reason: String },
    #[error("degree bound must be at least 1")]
    DegreeTooSmall,
    #[error("read-once violation: variable x{} labels more than one leaf", .0 + 1)]
    DuplicateLeaf(usize),
    #[error("leaf coefficient on x{} must be nonzero", .0 + 1)]
    ZeroLeafCoefficient(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailure(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
