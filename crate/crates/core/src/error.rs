use thiserror::Error;

/// Errors raised across the simulator, protocol runners and certification checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("too many qubits: {requested} requested, cap is {cap}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("invalid measurement pattern: {0}")]
    Pattern(String),

    #[error("forced outcome {outcome} on vertex {vertex} has zero probability")]
    ZeroProbability { vertex: usize, outcome: u8 },

    #[error("frame length {got} does not match {expected}")]
    FrameLength { expected: usize, got: usize },

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("invalid attack: {0}")]
    Attack(String),

    #[error("decomposition model violated: {0}")]
    Decomposition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
