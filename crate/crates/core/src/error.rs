use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cap exceeded: closure has more than {cap} elements")]
    CapExceeded { cap: usize },

    #[error("element set is not closed under multiplication")]
    NotClosed,

    #[error("horizon insufficient: cannot certify threshold for l = {l} within {horizon} materialized terms")]
    HorizonInsufficient { l: u64, horizon: usize },

    #[error("sequence index {index} is beyond the materialized horizon {horizon}")]
    BeyondHorizon { index: usize, horizon: usize },

    #[error("element is not in the kernel of the lamplighter quotient")]
    NotInKernel,

    #[error("element is not in the normal closure of beta (shift {shift})")]
    NotInLInfinity { shift: i64 },

    #[error("degree {degree} exceeds brute-force cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("no admissible r({index})")]
    NoAdmissibleR { index: usize },

    #[error("growth function overflow at index {index}")]
    Overflow { index: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
