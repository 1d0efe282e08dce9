use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Each variant names the invariant that was violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("trace {trace:e} is too small to normalize")]
    ZeroTrace { trace: f64 },

    #[error("bad convex weights: {0}")]
    BadWeights(String),

    #[error("not an effect: spectrum [{min:e}, {max:e}] is not inside [0, 1]")]
    NotEffect { min: f64, max: f64 },

    #[error("not a state: {0}")]
    NotState(String),

    #[error("Kraus operators are not trace non-increasing (largest eigenvalue of ΣC†C is {max_eigenvalue})")]
    NotTraceNonIncreasing { max_eigenvalue: f64 },

    #[error("Choi matrix is not completely positive (min eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("effects do not sum to the identity (max deviation {deviation:e})")]
    NotNormalized { deviation: f64 },

    #[error("instrument total is not a channel (max |Ī*(I) - I| = {deviation:e})")]
    NotChannel { deviation: f64 },

    #[error("witness mismatch: {0}")]
    WitnessMismatch(String),

    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),

    #[error("outcome labels do not match: {0}")]
    LabelMismatch(String),

    #[error("invalid outcome label `{0}`")]
    InvalidLabel(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheoremId(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short machine-friendly name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "hermitian",
            Error::NotPsd { .. } => "positive-semidefinite",
            Error::DimMismatch { .. } => "matching-dimensions",
            Error::ZeroTrace { .. } => "nonzero-trace",
            Error::BadWeights(_) => "convex-weights",
            Error::NotEffect { .. } => "effect-bounds",
            Error::NotState(_) => "state",
            Error::NotTraceNonIncreasing { .. } => "trace-non-increasing",
            Error::NotCompletelyPositive { .. } => "completely-positive",
            Error::NotNormalized { .. } => "effects-sum-to-identity",
            Error::NotChannel { .. } => "instrument-total-is-channel",
            Error::WitnessMismatch(_) => "witness-measures-effect",
            Error::UnknownLabel(_) => "known-label",
            Error::LabelMismatch(_) => "matching-labels",
            Error::InvalidLabel(_) => "label-syntax",
            Error::UnknownTheoremId(_) => "known-theorem-id",
            Error::InvalidMatrix(_) => "matrix-literal",
            Error::InvalidTolerance(_) => "positive-tolerance",
            Error::InvalidInput(_) => "input",
        }
    }
}
