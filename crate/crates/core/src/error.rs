use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("the hypothesis class is empty")]
    EmptyClass,

    #[error("domain mismatch: expected {expected} points, found {found}")]
    DomainMismatch { expected: usize, found: usize },

    #[error("arity mismatch: aggregator expects {expected} inputs, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("point {point} is out of range for a domain of {domain_size} points")]
    PointOutOfRange { point: usize, domain_size: usize },

    #[error("hypothesis {index} is out of range for a class of {len} hypotheses")]
    HypothesisOutOfRange { index: usize, len: usize },

    #[error("expected a {expected}-valued tree, found a {found}-valued tree")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("depth mismatch: expected {expected}, found {found}")]
    DepthMismatch { expected: usize, found: usize },

    #[error("unsupported aggregator {name} with arity {arity}")]
    UnsupportedAggregator { name: String, arity: usize },

    #[error("budget exceeded for {what}: needs {required}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: String,
        limit: u64,
    },

    #[error("staircase invariant violated at (i, j) = ({}, {})", .i + 1, .j + 1)]
    StaircaseViolation { i: usize, j: usize },

    #[error("no monochromatic clique of size {required}; largest found has size {largest}")]
    NoClique { required: usize, largest: usize },

    #[error("script is unrealizable from round {round} on")]
    Unrealizable { round: usize },

    #[error("internal contradiction: {0}")]
    Contradiction(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn budget(what: &'static str, required: impl ToString, limit: u64) -> Self {
        Error::BudgetExceeded {
            what,
            required: required.to_string(),
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
