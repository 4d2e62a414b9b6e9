use thiserror::Error;

/// Errors raised by the selection toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("at least {required} objectives are required, got {found}")]
    TooFewObjectives { required: usize, found: usize },

    #[error("invalid range: lo ({lo}) must be below hi ({hi})")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid subset size k = {k} for a set of {n} points")]
    InvalidK { k: usize, n: usize },

    #[error("iteration budget must be at least 1")]
    ZeroIterations,

    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate index {0} in subset")]
    DuplicateIndex(usize),

    #[error("index {0} is not a member of the solution subset")]
    NotInSubset(usize),

    #[error("a contribution needs at least two solutions, subset has {0}")]
    SingletonSubset(usize),

    #[error("label {label} out of range for {k} clusters")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("{medoids} medoids do not match an assignment with {clusters} clusters")]
    ClusterCountMismatch { medoids: usize, clusters: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("missing cluster summary data: {0}")]
    MissingSummary(&'static str),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("unknown front kind `{0}`")]
    UnknownFront(String),

    #[error("unsupported front: {0}")]
    UnsupportedFront(String),

    #[error("requested size {size} exceeds pool size {pool}")]
    PoolTooSmall { size: usize, pool: usize },

    #[error("missing result cell: {0}")]
    MissingCell(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
