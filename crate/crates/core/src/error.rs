use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a supported prime")]
    NonPrimeModulus(u32),
    #[error("binary extension degree {0} is not supported (expected 1..=16)")]
    UnsupportedDegree(u32),
    #[error("value {value} is not an element of a field of order {order}")]
    ValueOutOfRange { value: u64, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("field of order {order} is too small: {what}")]
    FieldTooSmall { order: u32, what: String },
    #[error("operation requires the Fermat field GF(65537)")]
    WrongField,
    #[error("transform size {0} is not a power of two dividing 65536")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("evaluation points are not distinct")]
    DuplicatePoints,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),
    #[error("invalid code parameters: {0}")]
    ParamsInvalid(String),
    #[error("position {0} appears more than once")]
    DuplicatePosition(usize),
    #[error("need {needed} symbols or fragments, got {got}")]
    InsufficientSymbols { needed: usize, got: usize },
    #[error("erasure decoder disagrees with the linear-system decoder")]
    DecodeMismatch,
    #[error("message must hold {expected} symbols, got {got}")]
    WrongMessageLength { expected: usize, got: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("helper node {0} is missing")]
    MissingHelper(usize),
    #[error("expected {expected} helpers, got {got}")]
    WrongHelperCount { expected: usize, got: usize },
    #[error("helper node {0} listed twice")]
    DuplicateHelper(usize),
    #[error("expected {expected} fragments, got {got}")]
    WrongFragmentCount { expected: usize, got: usize },
    #[error("payload does not match download plan: {0}")]
    PlanPayloadMismatch(String),
    #[error("no fragment ordering satisfies the {0} scheme")]
    OrderingInfeasible(&'static str),
    #[error("scheme {scheme} cannot be used with the {backend} backend")]
    SchemeBackendMismatch {
        scheme: &'static str,
        backend: &'static str,
    },
    #[error("stage {stage} system for column {column} is singular")]
    SingularStageMatrix { stage: usize, column: usize },
}

impl Error {
    /// Stable variant name, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPrimeModulus(_) => "NonPrimeModulus",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::FieldTooSmall { .. } => "FieldTooSmall",
            Error::WrongField => "WrongField",
            Error::NotPowerOfTwo(_) => "NotPowerOfTwo",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::DuplicatePoints => "DuplicatePoints",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DuplicateIndex(_) => "DuplicateIndex",
            Error::ParamsInvalid(_) => "ParamsInvalid",
            Error::DuplicatePosition(_) => "DuplicatePosition",
            Error::InsufficientSymbols { .. } => "InsufficientSymbols",
            Error::DecodeMismatch => "DecodeMismatch",
            Error::WrongMessageLength { .. } => "WrongMessageLength",
            Error::NotSkewSymmetric => "NotSkewSymmetric",
            Error::NotSymmetric => "NotSymmetric",
            Error::MissingHelper(_) => "MissingHelper",
            Error::WrongHelperCount { .. } => "WrongHelperCount",
            Error::DuplicateHelper(_) => "DuplicateHelper",
            Error::WrongFragmentCount { .. } => "WrongFragmentCount",
            Error::PlanPayloadMismatch(_) => "PlanPayloadMismatch",
            Error::OrderingInfeasible(_) => "OrderingInfeasible",
            Error::SchemeBackendMismatch { .. } => "SchemeBackendMismatch",
            Error::SingularStageMatrix { .. } => "SingularStageMatrix",
        }
    }
}

/// Rejects repeated entries in an index list, reporting the first repeat.
pub(crate) fn ensure_distinct(indices: &[usize], limit: usize) -> Result<()> {
    let mut seen = vec![false; limit];
    for &i in indices {
        if i >= limit {
            return Err(Error::IndexOutOfRange { index: i, limit });
        }
        if seen[i] {
            return Err(Error::DuplicateIndex(i));
        }
        seen[i] = true;
    }
    Ok(())
}
