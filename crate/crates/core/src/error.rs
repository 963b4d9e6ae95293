use thiserror::Error;

use crate::formula::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the engine, the oracle and the analyses.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{what} cap exceeded: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("brute-force budget exceeded: ~{estimate} evaluations > {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),

    #[error("parameter pattern does not cover parameter `{0}`")]
    PatternIncomplete(String),

    #[error("pattern not realizable: {0}")]
    Unrealizable(String),

    #[error("invalid model size: {0}")]
    InvalidSize(String),

    #[error("variable capture while substituting for `{0}`")]
    Capture(String),

    #[error("symbol `{0}` is not in the variable frame")]
    UnknownSymbol(String),

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("rejected: {0}")]
    Rejected(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Short stable tag used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::TheoryMismatch(_) => "theory_mismatch",
            Error::PatternIncomplete(_) => "pattern_incomplete",
            Error::Unrealizable(_) => "unrealizable",
            Error::InvalidSize(_) => "invalid_size",
            Error::Capture(_) => "capture",
            Error::UnknownSymbol(_) => "unknown_symbol",
            Error::Interpolation(_) => "interpolation",
            Error::Rejected(_) => "rejected",
            Error::Invalid(_) => "invalid_input",
            Error::Invariant(_) => "invariant",
        }
    }

    /// True for the errors that come from a configured resource limit.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::BudgetExceeded { .. })
    }
}
