use thiserror::Error;

/// Error type shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset partition `{0}` is empty")]
    EmptyPartition(&'static str),

    #[error("`{partition}` point {index} has a non-finite coordinate")]
    NonFiniteCoordinate {
        partition: &'static str,
        index: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("subset is empty")]
    EmptySubset,

    #[error("index {index} out of range for a ground set of {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("index {0} appears more than once in the subset")]
    DuplicateMember(usize),

    #[error("candidate {0} is already a member of the subset")]
    AlreadyMember(usize),

    #[error("target set is empty (every targeted instance is already in the subset)")]
    EmptyTargetSet,

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least two samples, got {0}")]
    TooFewSamples(usize),

    #[error("partition `{partition}` has {len} elements, fewer than the budget {budget}")]
    InsufficientPartition {
        partition: &'static str,
        len: usize,
        budget: usize,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("budget {budget} exceeds the ground set size {len}")]
    BudgetTooLarge { budget: usize, len: usize },

    #[error("C({len}, {budget}) exceeds the enumeration cap of {max}")]
    InstanceTooLarge { len: usize, budget: usize, max: u64 },

    #[error("similarity value {value} at ({row}, {col}) lies outside [0, 1]")]
    SimilarityOutOfRange { row: usize, col: usize, value: f64 },

    #[error("similarity matrix is not symmetric at ({row}, {col})")]
    AsymmetricSimilarity { row: usize, col: usize },

    #[error("similarity matrix diagonal entry {0} is not exactly 1")]
    NonUnitDiagonal(usize),

    #[error("similarity matrix has {len} values, expected {expected} for the declared partition sizes")]
    MatrixSizeMismatch { len: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
