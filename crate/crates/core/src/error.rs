use thiserror::Error;

/// Errors raised by the algebra, geometry and extraction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("pole at t1 = t2 = 1: {0}")]
    PoleAtOne(String),

    #[error("degenerate substitution direction ({0}, {1})")]
    DegenerateDirection(i64, i64),

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("plethystic exponential of a series with nonzero constant term")]
    NonzeroConstantTerm,

    #[error("not a unit: {0}")]
    NotUnit(String),

    #[error("cell ({0}, {1}) is not in the diagram")]
    CellNotInDiagram(u32, u32),

    #[error("partition sizes differ: {0} vs {1}")]
    SizeMismatch(u32, u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("certification failed for {partition}: {reason}")]
    Certification { partition: String, reason: String },

    #[error("expected a monomial character, got {0}")]
    NotMonomial(String),

    #[error("rationality certificate mismatch: {0}")]
    CertificateMismatch(String),

    #[error("invalid surface model: {0}")]
    InvalidModel(String),

    #[error("rank-deficient design matrix: unprobed direction {0}")]
    RankDeficient(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
