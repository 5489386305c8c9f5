//! Error types shared across the engine.

use thiserror::Error;

/// Rejection of an analyzer output or configuration value at construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ValidationError {
    #[error("field `{field}` out of range: {value} not in [{min}, {max}]")]
    OutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("day_index must be >= 1, got {0}")]
    DayIndex(u32),

    #[error("unknown tone label `{0}`")]
    UnknownTone(String),

    #[error("tag `{name}`: {reason}")]
    Tag { name: String, reason: String },

    #[error("rule thresholds must satisfy low_hard < low_soft < high_m < high_soft <= 5.0")]
    Thresholds,

    #[error("{0}")]
    Other(String),
}

/// History store failures.
#[derive(Debug, Error)]
pub enum StoreError {
    #[error("duplicate record for user `{user}` day {day}")]
    Duplicate { user: String, day: u32 },

    #[error("out-of-order append for user `{user}`: day {day} after day {last}")]
    OutOfOrder { user: String, day: u32, last: u32 },

    #[error("history io: {0}")]
    Io(#[from] std::io::Error),

    #[error("history record parse: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Failures raised while processing one entry through the pipeline.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("entry replay for user `{user}` day {day}: a record for this or a later day exists")]
    Replay { user: String, day: u32 },

    #[error(transparent)]
    Store(#[from] StoreError),
}
