use thiserror::Error;

/// Errors raised by measure, state and disintegration operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier must contain at least one atom")]
    EmptyCarrier,

    #[error("duplicate atom `{0}` in carrier")]
    DuplicateAtom(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("incompatible domains: {0}")]
    CarrierMismatch(&'static str),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("negative value {value} at atom `{atom}`")]
    NegativeValue { atom: String, value: String },

    #[error("the zero measure generates no conditional probabilities")]
    ZeroMeasure,

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),

    #[error("restriction to {0} has zero mass")]
    NullRestriction(String),

    #[error("{0} is not an elementary condition (zero mass)")]
    NotElementary(String),

    #[error("carrier of {atoms} atoms has 2^{atoms} events, above limit {limit}; use is_elementary_condition")]
    CarrierTooLarge { atoms: usize, limit: u128 },

    #[error("bunch axiom {axiom} violated: {detail}")]
    BunchAxiom { axiom: u8, detail: String },

    #[error("table for condition {condition} is invalid: {detail}")]
    InvalidTable { condition: String, detail: String },

    #[error("degenerate pair {b}, {c}: condition has zero probability given their union")]
    DegeneratePair { b: String, c: String },

    #[error("family not representable: conditions {b} and {c} disagree")]
    NotRepresentable { b: String, c: String },

    #[error("dominating measure vanishes at `{0}` where the pushforward is positive")]
    DominationFailure(String),

    #[error("`{atom}` lies outside the conditional support given {condition}")]
    OffSupport { atom: String, condition: String },
}

pub type Result<T> = std::result::Result<T, Error>;
