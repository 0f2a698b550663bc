use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("gates act on the same qubit {0} twice")]
    RepeatedQubit(usize),
    #[error("unsupported gate for this operation: {0}")]
    UnsupportedGate(&'static str),
    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
