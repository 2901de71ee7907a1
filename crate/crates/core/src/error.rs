use alloc::string::String;
use alloc::vec::Vec;

use crate::model::Violation;

/// Why a measurement value was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("scale value {value} outside [{min}, {max}]")]
    OutOfRange { value: i64, min: i32, max: i32 },
    #[error("numeric value is not finite")]
    NotFinite,
    #[error("list index {index} but the list has {len} items")]
    BadIndex { index: u32, len: usize },
    #[error("value is {found} but the measure expects {expected}")]
    TypeMismatch { expected: &'static str, found: &'static str },
}

impl ValidationError {
    pub fn code(&self) -> &'static str {
        match self {
            // A non-finite decimal lies outside every representable range.
            ValidationError::OutOfRange { .. } | ValidationError::NotFinite => "OUT_OF_RANGE",
            ValidationError::BadIndex { .. } => "BAD_INDEX",
            ValidationError::TypeMismatch { .. } => "TYPE_MISMATCH",
        }
    }
}

/// Failure to read a trial interchange document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unsupported schema version {0}")]
    SchemaVersionUnsupported(u64),
    #[error("{code} at {path}")]
    InvariantViolation { path: String, code: &'static str },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Malformed(_) => "MALFORMED",
            ParseError::SchemaVersionUnsupported(_) => "SCHEMA_VERSION_UNSUPPORTED",
            ParseError::InvariantViolation { .. } => "INVARIANT_VIOLATION",
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            ParseError::InvariantViolation { path, .. } => Some(path),
            _ => None,
        }
    }
}

/// Engine errors. Every variant has a stable name returned by [`Error::code`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("phase pairs must be at least 1")]
    InvalidPairs,
    #[error("day {day} is outside the trial ({total} days)")]
    DayOutOfRange { day: i64, total: u32 },
    #[error("trial is not running")]
    TrialNotRunning,
    #[error("trial has not been started")]
    NotStarted,
    #[error("trial has already been started")]
    AlreadyStarted,
    #[error("trial has not finished")]
    NotFinished,
    #[error("draft is incomplete: {}", violation_codes(.0))]
    DraftInvalid(Vec<Violation>),
    #[error("unknown measure {0}")]
    UnknownMeasure(String),
    #[error("VALUE_INVALID({code}): {0}", code = .0.code())]
    ValueInvalid(ValidationError),
    #[error("timestamp outside the trial window")]
    OutOfWindow,
    #[error("no task for {component} on {date} at {time}")]
    NoSuchTask { component: String, date: String, time: String },
    #[error("history comparison is not defined for list measures")]
    UnsupportedForList,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn violation_codes(v: &[Violation]) -> String {
    let mut out = String::new();
    for (i, violation) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(violation.code.as_str());
    }
    out
}

impl Error {
    /// The most specific stable error name. Wrapped validation and parse
    /// errors report their own code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidPairs => "INVALID_PAIRS",
            Error::DayOutOfRange { .. } => "DAY_OUT_OF_RANGE",
            Error::TrialNotRunning => "TRIAL_NOT_RUNNING",
            Error::NotStarted => "NOT_STARTED",
            Error::AlreadyStarted => "ALREADY_STARTED",
            Error::NotFinished => "NOT_FINISHED",
            Error::DraftInvalid(_) => "DRAFT_INVALID",
            Error::UnknownMeasure(_) => "UNKNOWN_MEASURE",
            Error::ValueInvalid(e) => e.code(),
            Error::OutOfWindow => "OUT_OF_WINDOW",
            Error::NoSuchTask { .. } => "NO_SUCH_TASK",
            Error::UnsupportedForList => "UNSUPPORTED_FOR_LIST",
            Error::Parse(e) => e.code(),
        }
    }
}

impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Error::ValueInvalid(e)
    }
}
