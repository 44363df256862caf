use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate acts on repeated qubit {0}")]
    RepeatedQubit(usize),

    #[error("qubit count mismatch: expected {expected}, got {actual}")]
    QubitMismatch { expected: usize, actual: usize },

    #[error("unsupported register size {0} (1..={max} qubits)", max = crate::simcore::MAX_QUBITS)]
    UnsupportedQubits(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("counts are empty")]
    EmptyCounts,

    #[error("invalid noise parameter {name} = {value} (must lie in [0, 1])")]
    InvalidNoise { name: &'static str, value: f64 },

    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),

    #[error("observable family is empty")]
    EmptyFamily,

    #[error("degenerate observable family: {0}")]
    DegenerateFamily(String),

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-positive detection margin γ = {gamma:.6} (δ/C = {ratio:.6} ≤ ε_A = {epsilon})")]
    NonPositiveMargin { gamma: f64, ratio: f64, epsilon: f64 },

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("drift target {target} unreachable: {reason}")]
    UnreachableDrift { target: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
