use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot allocate {requested} qubits (supported range is 1..={max})")]
    Capacity { requested: usize, max: usize },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit state")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("basis index {index} out of range for a state of dimension {dim}")]
    BasisIndex { index: usize, dim: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("invalid sign vector: {0}")]
    InvalidSignVector(String),

    #[error("length {0} is not a power of two (>= 2)")]
    NotPowerOfTwo(usize),

    #[error("sign vector must have a +1 first entry; canonicalize it first")]
    NonCanonical,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("unrecognized column layout: {0}")]
    Layout(String),

    #[error("empty input")]
    EmptyInput,

    #[error("need {wanted} access points but only {available} were observed")]
    InsufficientAps { wanted: usize, available: usize },

    #[error("train fraction {0} must lie strictly between 0 and 1")]
    InvalidSplit(f64),

    #[error("fingerprint database is empty")]
    EmptyDb,

    #[error("test set is empty")]
    EmptyTestSet,

    #[error("floor set is empty")]
    EmptyFloorSet,

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("cannot serialize: {0}")]
    Format(String),

    #[error("config: {0}")]
    Config(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("invalid mode `{0}` (expected `exact` or `shots:<k>`)")]
    InvalidMode(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
