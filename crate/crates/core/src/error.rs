use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("classes live on different spaces: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("invalid model space: {0}")]
    InvalidSpace(String),

    #[error("model space too large: {0}")]
    SpaceTooLarge(String),

    #[error("invalid map {map}: {reason}")]
    InvalidMap { map: String, reason: String },

    #[error("malformed class: {0}")]
    MalformedClass(String),

    #[error("cannot parse class `{text}`: {reason}")]
    ClassParse { text: String, reason: String },

    #[error("malformed total Chern class: {0}")]
    MalformedChernClass(String),

    #[error("series must have constant term 1, found {0}")]
    ConstantTermNotOne(String),

    #[error("series is not even: {0}")]
    SeriesNotEven(String),

    #[error("class is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid bundle expression: {0}")]
    InvalidBundle(String),

    #[error("{map} is not a supported embedding: {reason}")]
    NotAnEmbedding { map: String, reason: String },

    #[error("embedding {0} has odd codimension")]
    OddCodimension(String),

    #[error("Chern character has mixed parity support: {0}")]
    ParityViolation(String),

    #[error("K-cycles do not share {what}: {left} vs {right}")]
    CycleMismatch {
        what: &'static str,
        left: String,
        right: String,
    },

    #[error("sum of K-cycles mixes even and odd summands")]
    MixedParity,

    #[error("empty sum of K-cycles has no parity")]
    EmptyCycleSum,

    #[error("cannot realize {class} as a K-class on {space}: {reason}")]
    Unrealizable {
        class: String,
        space: String,
        reason: String,
    },

    #[error("tachyon reduction changed the charge: {before} vs {after}")]
    ChargeMismatch { before: String, after: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
