use thiserror::Error;

/// Errors raised by schema validation, the oracles and the estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("schema has no attributes")]
    EmptySchema,

    #[error("attribute `{name}` has cardinality {k}; at least 2 values are required")]
    CardinalityTooSmall { name: String, k: usize },

    #[error("duplicate attribute name `{0}`")]
    DuplicateName(String),

    #[error("schema has {names} names but {cardinalities} cardinalities")]
    SchemaShape { names: usize, cardinalities: usize },

    #[error("privacy budget must be positive and finite, got {0}")]
    InvalidBudget(f64),

    #[error("value {value} out of range for attribute {attribute} (cardinality {k})")]
    ValueOutOfRange { attribute: usize, value: u32, k: usize },

    #[error("record has {got} values but the schema has {expected} attributes")]
    RecordLength { expected: usize, got: usize },

    #[error("report does not match the schema: {0}")]
    ReportShape(String),

    #[error("degenerate mechanism parameters: p == q ({0})")]
    DegenerateParams(f64),

    #[error("frequency {0} outside [0, 1]")]
    InvalidFrequency(f64),

    #[error("attribute count must be at least 1")]
    InvalidAttributeCount,

    #[error("state space of {entries} entries exceeds the limit of {limit}")]
    StateSpaceTooLarge { entries: u128, limit: u128 },

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("unknown solution `{0}`")]
    UnknownSolution(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
