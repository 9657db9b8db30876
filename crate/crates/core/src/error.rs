use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a finite space needs at least one point")]
    EmptySpace,

    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),

    #[error("{context}: spaces differ: {left} vs {right}")]
    SpaceMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid kernel row `{row}`: {reason}")]
    InvalidKernelRow { row: String, reason: String },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point `{0}` carries no mass under the conditioning law")]
    MaskedPoint(String),

    #[error("enumeration budget exceeded: {required} checks needed, budget allows {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("subset enumeration supports at most {max} points per side, got {got}")]
    SubsetEnumerationTooLarge { max: usize, got: usize },

    #[error("scenario table rejected: {0}")]
    InvalidTable(String),

    #[error("degenerate joint distribution: {0}")]
    DegenerateJoint(String),

    #[error("generator gave up after {attempts} attempts: {reason}")]
    GeneratorExhausted { attempts: u64, reason: String },

    /// An instance passed the independence test yet its conditional
    /// expectations disagree. This cannot happen for correct arithmetic,
    /// so observing it means the library itself is defective.
    #[error(
        "internal inconsistency: independent instance with unequal conditional \
         expectations (attempt {attempt}); table:\n{table}"
    )]
    FalsifiedImplication { attempt: u64, table: String },
}

pub type Result<T> = std::result::Result<T, Error>;
