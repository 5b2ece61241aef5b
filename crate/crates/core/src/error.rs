use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("letter {0:?} is not in the alphabet")]
    LetterNotInAlphabet(char),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("{what} exceeds budget of {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("insufficient horizon: need {needed}, have {available}")]
    InsufficientHorizon { needed: usize, available: usize },

    #[error("factor set is not certified complete")]
    IncompleteFactorSet,

    #[error("substitution is not primitive")]
    NotPrimitive,

    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(usize, usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("word is not in the factor set")]
    NotAFactor,

    #[error("target monoid is not a group")]
    NotAGroup,

    #[error("word already belongs to the subgroup")]
    NotSeparable,

    #[error("set is not a code")]
    NotACode,

    #[error("set is not a bifix code")]
    NotBifix,

    #[error("images agree, nothing to separate")]
    NothingToSeparate,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn horizon(needed: usize, available: usize) -> Self {
        Error::InsufficientHorizon { needed, available }
    }
}
