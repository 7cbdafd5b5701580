use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,

    #[error("node index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("denominator vanishes: {0}")]
    ZeroDenominator(String),

    #[error("denominator vanishes along the orbit at step {step}")]
    OrbitBreakdown { step: usize },

    #[error("periodicity certificate does not hold for this matrix")]
    InvalidCertificate,

    #[error("function is not constant along the fibres of the submersion")]
    NotFiberConstant,

    #[error("component {component} of the map cannot be written in fibre coordinates")]
    NotReducible { component: usize },

    #[error("submersions {first} and {second} are not comparable under leaf inclusion")]
    NotAChain { first: usize, second: usize },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
