//! Intervention levels and upward-only combination.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Response level of the pipeline, totally ordered `None < Soft < Hard`.
///
/// `None` is standard operation, `Soft` a gentle check-in (logged for
/// review), `Hard` surfaces crisis resources and raises an alert. Every
/// monotonicity check in the engine relies on this ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterventionLevel {
    None,
    Soft,
    Hard,
}

impl InterventionLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            InterventionLevel::None => "none",
            InterventionLevel::Soft => "soft",
            InterventionLevel::Hard => "hard",
        }
    }
}

impl fmt::Display for InterventionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upward-only combination of two levels: the larger one wins.
pub fn max_level(x: InterventionLevel, y: InterventionLevel) -> InterventionLevel {
    x.max(y)
}
