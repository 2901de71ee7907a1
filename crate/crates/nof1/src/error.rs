use std::path::PathBuf;

use serde::Serialize;

/// Errors from store-level operations. Every variant maps to a stable code.
#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt store: {file}: {reason}")]
    Corrupt { file: String, reason: String },
    #[error("store is locked by another process ({0})")]
    Locked(PathBuf),
    #[error("no trial in the store")]
    NoTrial,
    #[error("no running trial")]
    NotRunning,
    #[error("a trial is already running; it must finish first")]
    TrialRunning,
    #[error("the active trial is not a draft")]
    NotDraft,
    #[error("{0}")]
    Engine(#[from] nof1_core::Error),
}

impl StoreError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        StoreError::Io { path: path.into(), source }
    }

    pub fn code(&self) -> &'static str {
        match self {
            StoreError::Io { .. } => "IO_ERROR",
            StoreError::Corrupt { .. } => "CORRUPT_STORE",
            StoreError::Locked(_) => "STORE_LOCKED",
            StoreError::NoTrial => "NO_TRIAL",
            StoreError::NotRunning => "NOT_RUNNING",
            StoreError::TrialRunning => "TRIAL_RUNNING",
            StoreError::NotDraft => "NOT_DRAFT",
            StoreError::Engine(e) => e.code(),
        }
    }

    /// Document path of an interchange invariant violation, if any.
    pub fn path(&self) -> Option<&str> {
        match self {
            StoreError::Engine(nof1_core::Error::Parse(e)) => e.path(),
            _ => None,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { code: self.code().to_string(), message: self.to_string(), path: self.path().map(str::to_string) }
    }
}

impl From<nof1_core::ParseError> for StoreError {
    fn from(e: nof1_core::ParseError) -> Self {
        StoreError::Engine(e.into())
    }
}

impl From<nof1_core::ValidationError> for StoreError {
    fn from(e: nof1_core::ValidationError) -> Self {
        StoreError::Engine(e.into())
    }
}

/// Wire form of an error: `{code, message, path?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;
