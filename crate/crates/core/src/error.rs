use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("segment is not definable over the subgroup: {0}")]
    NonDefinableSegment(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("expansion step limit ({max}) exceeded")]
    StepLimit { max: usize },
    #[error("element does not fill the cut: {0}")]
    NotAFiller(String),
    #[error("cuts cannot be compared: {0}")]
    Incomparable(String),
    #[error("value group of the subfield is not convex in the extension")]
    NonConvex,
    #[error("value group of the subfield is convex in the extension")]
    Convex,
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("invalid ball: {0}")]
    InvalidBall(String),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("name `{0}` is already defined")]
    DuplicateName(String),
    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable code used in JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::NonDefinableSegment(_) => "non_definable_segment",
            Error::DivisionByZero => "division_by_zero",
            Error::FieldMismatch(_) => "field_mismatch",
            Error::StepLimit { .. } => "step_limit",
            Error::NotAFiller(_) => "not_a_filler",
            Error::Incomparable(_) => "incomparable",
            Error::NonConvex => "non_convex",
            Error::Convex => "convex",
            Error::InvalidCut(_) => "invalid_cut",
            Error::InvalidBall(_) => "invalid_ball",
            Error::InvalidPlace(_) => "invalid_place",
            Error::Syntax { .. } => "syntax",
            Error::UnknownName(_) => "unknown_name",
            Error::DuplicateName(_) => "duplicate_name",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
