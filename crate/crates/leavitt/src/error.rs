use thiserror::Error;

/// Errors across the crate. Parse errors carry 1-based line numbers;
/// expression errors carry 1-based factor positions.
#[derive(Error, Debug)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid id `{0}`: ids match [A-Za-z][A-Za-z0-9_]*")]
    InvalidId(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("factor {position}: `{factor}` does not compose with the prefix before it")]
    NotComposable { position: usize, factor: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("paths have different ranges")]
    RangeMismatch,
    #[error("element does not belong to this graph")]
    CrossGraph,
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("`{0}` is not a valid base vertex (must be the sink or lie on the cycle)")]
    BadBase(String),
    #[error("step mismatch: {0} vs {1}")]
    StepMismatch(usize, usize),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("degree {0} is not a multiple of step {1}")]
    DegreeStep(i64, usize),
    #[error("grading violated: product has grade {found}, factors sum to {expected}")]
    Grading { found: i64, expected: i64 },
    #[error("invalid move: {0}")]
    BadMove(String),
    #[error("invalid witness: {0}")]
    BadWitness(String),
    #[error("invalid certificate: {0}")]
    BadCertificate(String),
    #[error("graph has a cycle; this operation needs an acyclic graph")]
    CyclicInput,
    #[error("size {size} exceeds limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
