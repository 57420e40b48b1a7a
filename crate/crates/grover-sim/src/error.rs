//! Error taxonomy shared across the crate.
//!
//! Three families matter to callers: configuration errors (bad sizes, empty
//! target sets — the request can never succeed), bounds errors (an index
//! escaped its register), and integrity errors (the numerics themselves are
//! suspect and results must not be trusted). The CLI maps the first two to
//! exit code 2 and the last to exit code 3.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={cap}")]
    QubitCount { requested: usize, cap: usize },

    #[error("basis index {index} out of range for {qubits} qubits (N = {states})")]
    IndexOutOfRange {
        index: usize,
        qubits: usize,
        states: usize,
    },

    #[error("state norm deviates from 1 by {deviation:.3e} (limit {limit:.1e})")]
    NormDrift { deviation: f64, limit: f64 },

    #[error("oracle target set is empty")]
    EmptyTargets,

    #[error("record table has no records")]
    EmptyTable,

    #[error("target count {targets} exceeds state count {states}")]
    TooManyTargets { targets: u64, states: u64 },

    #[error("dense operator construction capped at {cap} qubits, got {requested}")]
    DenseCap { requested: usize, cap: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency violated: {0}")]
    Integrity(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that mean "the numbers cannot be trusted", as opposed
    /// to a rejected request.
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::NormDrift { .. } | Error::Integrity(_))
    }
}
