use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("guesser state is {bits} bits at turn {turn}, budget is {budget}")]
    MemoryBudgetExceeded { bits: usize, budget: usize, turn: usize },

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("division by zero in GF(2^{ell})")]
    DivisionByZero { ell: u32 },

    #[error("invalid parameter: {0}")]
    ParamError(String),

    #[error("power-sum recovery found {found} of {expected} missing cards")]
    RecoveryInconsistent { expected: usize, found: usize },

    #[error("arrangement is not a permutation of 1..={n}")]
    InvalidArrangement { n: usize },

    #[error("guesser `{0}` uses randomness; an adversarial arrangement needs a deterministic guesser")]
    NotDeterministic(String),

    #[error("infeasible schedule: {0}")]
    Infeasible(String),

    #[error("invalid dealer randomness: {0}")]
    InvalidRandomness(String),

    #[error("rank {rank} out of range (domain size {size})")]
    RankOutOfRange { rank: String, size: String },

    #[error("malformed codeword: {0}")]
    MalformedCodeword(String),

    #[error("schedule mismatch: {0}")]
    ScheduleMismatch(String),

    #[error("unknown theory curve `{0}`")]
    UnknownCurve(String),

    #[error("unknown {what} `{name}`")]
    UnknownKind { what: &'static str, name: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::ParamError(msg.into())
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MemoryBudgetExceeded { .. } => "memory-budget-exceeded",
            Error::ProtocolViolation(_) => "protocol-violation",
            Error::DivisionByZero { .. } => "division-by-zero",
            Error::ParamError(_) => "param",
            Error::RecoveryInconsistent { .. } => "recovery-inconsistent",
            Error::InvalidArrangement { .. } => "invalid-arrangement",
            Error::NotDeterministic(_) => "not-deterministic",
            Error::Infeasible(_) => "infeasible",
            Error::InvalidRandomness(_) => "invalid-randomness",
            Error::RankOutOfRange { .. } => "rank-out-of-range",
            Error::MalformedCodeword(_) => "malformed-codeword",
            Error::ScheduleMismatch(_) => "schedule-mismatch",
            Error::UnknownCurve(_) => "unknown-curve",
            Error::UnknownKind { .. } => "unknown-kind",
        }
    }
}
