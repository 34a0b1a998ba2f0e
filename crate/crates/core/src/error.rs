use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ideal is not m-primary: {0}")]
    NotMPrimary(String),
    #[error("semigroup generators {0:?} have gcd different from 1")]
    BadSemigroup(Vec<u32>),
    #[error("prime {0} is not an accepted field size (primes up to 257)")]
    FieldTooLarge(u16),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("infinite length: {0}")]
    InfiniteLength(String),
    #[error("no non-zero-divisor in the ideal")]
    NoNzd,
    #[error("no principal reduction found with n <= {0}")]
    NoReductionFound(u32),
    #[error("stabilization budget exceeded: {0}")]
    StabilizationBudget(String),
    #[error("wrong ring family: {0}")]
    WrongFamily(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),
    #[error("lift failure: {0}")]
    LiftFailure(String),
    #[error("module is not Cohen-Macaulay of the required dimension")]
    NotCm,
    #[error("module is not Ulrich: {0}")]
    NotUlrich(String),
    #[error("ring is regular")]
    Regular,
    #[error("ideal or ring is not monomial: {0}")]
    NonMonomial(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotMPrimary(_) => "NotMPrimary",
            Error::BadSemigroup(_) => "BadSemigroup",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InfiniteLength(_) => "InfiniteLength",
            Error::NoNzd => "NoNZD",
            Error::NoReductionFound(_) => "NoReductionFound",
            Error::StabilizationBudget(_) => "StabilizationBudget",
            Error::WrongFamily(_) => "WrongFamily",
            Error::ResourceBudget(_) => "ResourceBudget",
            Error::LiftFailure(_) => "LiftFailure",
            Error::NotCm => "NotCM",
            Error::NotUlrich(_) => "NotUlrich",
            Error::Regular => "Regular",
            Error::NonMonomial(_) => "NonMonomial",
            Error::Invalid(_) => "Invalid",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
