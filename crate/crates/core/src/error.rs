use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("prime {0} exceeds the supported bound {max}", max = crate::ffarith::MAX_PRIME)]
    PrimeTooLarge(u64),

    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),

    #[error("leading coefficient of {cubic} vanishes mod {p}")]
    DegenerateCubic { cubic: String, p: u64 },

    #[error("characteristic {0} is not supported")]
    UnsupportedCharacteristic(u64),

    #[error("twist {twist} has degenerate reduction mod {p}")]
    DegenerateReduction { twist: String, p: u64 },

    #[error("{p} is a prime of bad reduction for {twist} (bad set {bad:?})")]
    BadPrime { twist: String, p: u64, bad: Vec<u64> },

    #[error("Frobenius at {0} is not defined on the ramification set")]
    RamifiedPrime(u64),

    #[error("no covering set among primes up to {limit}: {missing} sign vectors unrealised")]
    InsufficientLimit { limit: u64, missing: usize },

    #[error("candidate set intersects the ramification set at {0:?}")]
    CoveringOverlap(Vec<u64>),

    #[error("fixture for level {level} lacks coefficients at {needed:?}")]
    IncompleteFixture { level: u32, needed: Vec<u64> },

    #[error("no newform fixture for level {0}")]
    UnsupportedLevel(u32),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
