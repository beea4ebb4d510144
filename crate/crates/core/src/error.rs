use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("local dimension mismatch: {0} vs {1}")]
    LocalDimMismatch(u32, u32),
    #[error("qudit count mismatch: {0} vs {1}")]
    QuditCountMismatch(usize, usize),
    #[error("invalid basis index: {0}")]
    InvalidBasisIndex(String),
    #[error("amplitude ring overflow: colliding amplitudes are neither equal nor opposite")]
    RingOverflow,
    #[error("position {position} out of range for {num_qudits} qudits")]
    PositionOutOfRange { position: usize, num_qudits: usize },
    #[error("operation requires qubits (local dimension 2), got {0}")]
    NotQubit(u32),
    #[error("phase order must be a positive even integer, got {0}")]
    InvalidPhaseOrder(u32),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("inputs are not orthogonal (|<i|j>| = {0:e})")]
    NonOrthogonal(f64),
    #[error("invalid scale rule: {0}")]
    InvalidRule(String),
    #[error("slot resolution failed: {0}")]
    SlotResolution(String),
    #[error("slot vectors are not orthonormal: {0}")]
    Orthonormality(String),
    #[error("result is not normalized (norm squared {0})")]
    NotNormalized(String),
    #[error("state is not uniform over its support")]
    NonUniform,
    #[error("value {value} is not within tolerance of a multiple of 1/{denominator}")]
    NotSnappable { value: f64, denominator: u64 },
    #[error("inconsistent majority corrections across basis components")]
    InconsistentCorrections,
    #[error("unsupported code operation: {0}")]
    UnsupportedCode(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
