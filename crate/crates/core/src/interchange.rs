//! The trial interchange document: canonical UTF-8 JSON.
//!
//! Object keys are sorted lexicographically and the text is compact, so a
//! trial always exports to the same bytes. Import is strict: unknown keys,
//! wrong shapes and unsupported schema versions are rejected, and every
//! invariant is re-checked before a `Trial` is handed out.

use alloc::string::{String, ToString};

use serde_json::Value;

use crate::error::ParseError;
use crate::model::{violations, Stage, Trial};

/// The only schema version this engine reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Canonical interchange text for `trial`.
pub fn export_trial(trial: &Trial) -> String {
    let mut value = to_canonical_value(trial);
    value.sort_all_objects();
    value.to_string()
}

/// The trial as a JSON value with interchange field names.
pub fn to_canonical_value(trial: &Trial) -> Value {
    // Serializing plain data into a Value cannot fail: all map keys are
    // strings or integers and no float is NaN once validated.
    serde_json::to_value(trial).expect("trial serializes to JSON")
}

pub fn import_trial(doc: &str) -> Result<Trial, ParseError> {
    if doc.trim().is_empty() {
        return Err(ParseError::Malformed("empty document".into()));
    }
    let value: Value = serde_json::from_str(doc).map_err(|e| ParseError::Malformed(e.to_string()))?;
    trial_from_value(value)
}

/// Validates an already-parsed document.
pub fn trial_from_value(value: Value) -> Result<Trial, ParseError> {
    let version = value
        .as_object()
        .ok_or_else(|| ParseError::Malformed("document is not an object".into()))?
        .get("schemaVersion")
        .ok_or_else(|| ParseError::Malformed("missing schemaVersion".into()))?
        .as_u64()
        .ok_or_else(|| ParseError::Malformed("schemaVersion is not a non-negative integer".into()))?;
    if version != SCHEMA_VERSION as u64 {
        return Err(ParseError::SchemaVersionUnsupported(version));
    }

    let trial: Trial = serde_json::from_value(value).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let draft = trial.stage == Stage::Draft;
    if let Some(v) = violations(&trial).into_iter().find(|v| !(draft && v.code.is_incompleteness())) {
        return Err(ParseError::InvariantViolation { path: v.path, code: v.code.as_str() });
    }
    Ok(trial)
}
