use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not have full column rank ({rank} < {cols})")]
    FullColumnRankRequired { rank: usize, cols: usize },
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bitstring length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("diagram has {vertices} vertices, oracle cap is {cap}")]
    TooLargeForOracle { vertices: usize, cap: usize },
    #[error("vertex {0} does not carry a proper Clifford phase")]
    NotProperClifford(usize),
    #[error("vertices {0} and {1} are not an adjacent Pauli pair")]
    NotPauli(usize, usize),
    #[error("invalid vertex {0}")]
    InvalidVertex(usize),
    #[error("diagram is not closed")]
    NotClosed,
    #[error("diagram is not reduced: stray Clifford spider {0}")]
    NotReduced(usize),
    #[error("decomposition needs at least two vertices")]
    TooSmall,
    #[error("invalid gflow: {0}")]
    InvalidGFlow(String),
    #[error("no extended gflow exists for this open graph")]
    GFlowUnavailable,
    #[error("decomposition does not match the diagram: {0}")]
    DecompositionMismatch(String),
    #[error("node {node} needs 2^{rank} amplitudes, budget is 2^{budget}")]
    BudgetExceeded {
        node: usize,
        rank: usize,
        budget: usize,
    },
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
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
