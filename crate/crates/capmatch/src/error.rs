use thiserror::Error;

/// Everything that can go wrong across fleet ingestion, request validation
/// and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A fleet file line that could not be read as `id,capacity_pct[,class_label]`.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate node id {id}")]
    DuplicateId { id: u32 },

    #[error("node {id}: capacity {capacity}% is outside 1..=100")]
    CapacityOutOfRange { id: u32, capacity: i64 },

    #[error("node id must be positive")]
    ZeroNodeId,

    #[error("node {id}: class label must be positive")]
    ZeroClassLabel { id: u32 },

    #[error("fleet contains no nodes")]
    EmptyFleet,

    #[error("unknown node id {id}")]
    UnknownNode { id: u32 },

    #[error("combination contains node {id} more than once")]
    DuplicateNode { id: u32 },

    #[error("a combination must contain at least one node")]
    EmptyCombination,

    #[error("child ratios must each be at least 1%")]
    RatioBelowOne,

    #[error("child ratios must sum to 100%, got {sum}%")]
    RatioSum { sum: u32 },

    #[error("a request must cover at least 2 child processes, got {n}")]
    TooFewChildren { n: usize },

    #[error("tolerance must be in (0, 100], got {value}")]
    ToleranceOutOfRange { value: f64 },

    #[error("combination holds {actual} nodes but the request asks for {expected}")]
    WrongCombinationSize { actual: usize, expected: usize },

    #[error("requested {requested} nodes but only {available} are available")]
    Infeasible { requested: usize, available: usize },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
