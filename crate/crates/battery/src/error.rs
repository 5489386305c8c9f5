//! Battery-side error types.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}:{line}: {source}")]
    Line {
        path: String,
        line: usize,
        source: serde_json::Error,
    },

    #[error("entry {entry}: {reason}")]
    Entry { entry: String, reason: String },

    #[error("persona {persona}: expected {expected} entries, found {found}")]
    EntryCount {
        persona: String,
        expected: usize,
        found: usize,
    },

    #[error("missing persona {persona} in fixture directory")]
    MissingPersona { persona: String },
}

#[derive(Debug, Error)]
pub enum BatteryError {
    #[error(transparent)]
    Fixture(#[from] FixtureError),

    #[error("replay of entry {entry}: {source}")]
    Replay {
        entry: String,
        source: slipgate_core::PipelineError,
    },

    #[error("persona {persona} run is missing day {day}")]
    MissingDay { persona: String, day: u32 },

    #[error("report io: {0}")]
    Io(#[from] std::io::Error),
}
