use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("operands belong to different quaternion algebras")]
    MixedAlgebras,
    #[error("operation unsupported in characteristic 2")]
    CharacteristicTwo,
    #[error("CRT moduli are not coprime")]
    NotCoprime,
    #[error("the real place carries no discrete valuation")]
    RealPlace,
    #[error("element has negative valuation {0} at the place")]
    NegativeValuation(i64),
    #[error("zero argument: {0}")]
    ZeroArgument(&'static str),
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),
    #[error("conflicting targets for place {0}")]
    ConflictingPlaces(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("search bound exhausted: {0}")]
    SearchExhausted(String),
    #[error("configured cap exceeded: {0}")]
    CapExceeded(String),
    #[error("insufficient precision: need at least {needed}, got {given}")]
    InsufficientPrecision { needed: u32, given: u32 },
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("artifact error: {0}")]
    Artifact(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
