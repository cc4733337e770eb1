use thiserror::Error;

/// Errors raised by model construction and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} exceeds the element bound {bound}")]
    ValueOutOfBound { value: String, bound: u64 },
    #[error("negative input: {0}")]
    NegativeInput(String),
    #[error("operation requires a numerical model")]
    WrongKind,
    #[error("malformed element or model: {0}")]
    Shape(String),
    #[error("{0} is not a member of the semigroup")]
    NotMember(String),
    #[error("state cones are only available under the algebraic order")]
    UnsupportedOrderMode,
    #[error("no state maps the zero element to 1")]
    ZeroNormalizer,
    #[error("inconclusive at the search bound: {0}")]
    UnknownAtBound(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bound too small: {0}")]
    BoundTooSmall(String),
    #[error("intervals or instances refer to different base models")]
    IncompatibleModels,
    #[error("undecidable at the search horizon: {0}")]
    UndecidableAtBound(String),
    #[error("sequence is not increasing at index {0}")]
    NotIncreasing(usize),
    #[error("no full element within the bound")]
    NoFullElement,
    #[error("no representable pair v << w with v full")]
    NoFullPair,
    #[error("the omega-comparison oracle returned no index")]
    OracleFailure,
    #[error("membership search exceeded its horizon of {0} states")]
    HorizonExceeded(usize),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::parse(
            format!("line {} column {}", err.line(), err.column()),
            err.to_string(),
        )
    }
}
