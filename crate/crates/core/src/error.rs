use thiserror::Error;

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or a request outside the configured bounds.
    Config,
    /// A mathematical precondition or a verification check did not hold.
    Check,
    /// An internal consistency assertion fired.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {size} exceeds the configured bound {limit}")]
    FieldTooLarge { size: u128, limit: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {0} does not belong to this field")]
    ForeignElement(u32),
    #[error("no embedding from level {from} into level {to}")]
    NoEmbedding { from: usize, to: usize },
    #[error("level {0} is not part of this field tower")]
    MissingLevel(usize),
    #[error("element is not in the subfield of level {0}")]
    NotInSubfield(usize),
    #[error("cannot parse field element {0:?}")]
    ParseElement(String),
    #[error("{0} requires odd characteristic")]
    EvenCharacteristic(&'static str),
    #[error("{0} is reducible")]
    Reducible(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("level budget {limit} exceeded (requested {requested})")]
    LevelBudget { requested: usize, limit: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("closure violation: {0}")]
    ClosureViolation(String),
    #[error("wild ramification at index {0}")]
    WildRamification(u64),
    #[error("non-integral genus at level {0}")]
    NonIntegerGenus(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("bad spec document: {0}")]
    SpecFormat(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotPrime(_)
            | Error::FieldTooLarge { .. }
            | Error::InvalidModulus(_)
            | Error::ForeignElement(_)
            | Error::NoEmbedding { .. }
            | Error::MissingLevel(_)
            | Error::ParseElement(_)
            | Error::EvenCharacteristic(_)
            | Error::LevelBudget { .. }
            | Error::SpecFormat(_)
            | Error::Parameter(_)
            | Error::Json(_) => ErrorKind::Config,
            Error::DivisionByZero
            | Error::NotInSubfield(_)
            | Error::Reducible(_)
            | Error::Precondition(_)
            | Error::Verification(_) => ErrorKind::Check,
            Error::ClosureViolation(_)
            | Error::WildRamification(_)
            | Error::NonIntegerGenus(_)
            | Error::Inconsistent(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
