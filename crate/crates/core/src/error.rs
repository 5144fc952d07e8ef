use thiserror::Error;

/// Every failure mode exposed by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unresolved symbol `{0}` after specialization")]
    UnresolvedSymbol(String),
    #[error("leading coefficient vanishes after specialization")]
    DegenerateLeadingCoefficient,
    #[error("invalid rank: {0}")]
    InvalidRank(String),
    #[error("invalid subset of simple roots: {0}")]
    InvalidSubset(String),
    #[error("Weyl element does not carry theta onto theta': {0}")]
    NotAssociate(String),
    #[error("theta is not a maximal Levi subset")]
    NotMaximalLevi,
    #[error("invalid level {level}: expected {min} <= level <= {max}")]
    InvalidLevel { level: u32, min: u32, max: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionError(String),
    #[error("unsupported constituent: {0}")]
    UnsupportedConstituent(String),
    #[error("ramified data are not supported")]
    UnsupportedRamified,
    #[error("operation requires numeric Satake parameters")]
    RequiresNumeric,
    #[error("wrong place kind: {0}")]
    WrongPlaceKind(String),
    #[error("invalid field size {0}: not a prime power")]
    InvalidFieldSize(u64),
    #[error("place table depth {have} is below the requested degree {want}")]
    TableTooShallow { have: u32, want: u32 },
    #[error("missing place data: {0}")]
    IncompleteDatum(String),
    #[error("parse error in `{field}`: {reason}")]
    Parse { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
