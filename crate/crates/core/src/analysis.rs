//! Analyzer output for one diary entry.
//!
//! The engine never derives metrics from text itself; it consumes the
//! primary analyzer's output (affect intensity `a`, narrative dynamism `m`,
//! sentiment, tone, emotion flow, signal tags) as a validated value object.

use crate::error::ValidationError;
use crate::ethics::EthicsTag;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Coarse tone label from a closed set. Only `Crisis` is crisis-toned;
/// the code-level safety net keys off that distinction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tone {
    Happy,
    Calm,
    Reflective,
    Tense,
    Sad,
    Crisis,
}

impl Tone {
    pub fn is_crisis(self) -> bool {
        matches!(self, Tone::Crisis)
    }

    pub fn parse(label: &str) -> Result<Self, ValidationError> {
        match label {
            "happy" => Ok(Tone::Happy),
            "calm" => Ok(Tone::Calm),
            "reflective" => Ok(Tone::Reflective),
            "tense" => Ok(Tone::Tense),
            "sad" => Ok(Tone::Sad),
            "crisis" => Ok(Tone::Crisis),
            other => Err(ValidationError::UnknownTone(other.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tone::Happy => "happy",
            Tone::Calm => "calm",
            Tone::Reflective => "reflective",
            Tone::Tense => "tense",
            Tone::Sad => "sad",
            Tone::Crisis => "crisis",
        }
    }
}

impl fmt::Display for Tone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Emotion labels that mark distress in an emotion flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistressSet(BTreeSet<String>);

impl DistressSet {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        DistressSet(labels.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }
}

impl Default for DistressSet {
    fn default() -> Self {
        DistressSet::new(["despair", "fear", "panic", "grief", "hopelessness"])
    }
}

/// Unvalidated analyzer output, as produced by an analyzer adapter or a
/// fixture line. Turn it into a [`PrimaryAnalysis`] with
/// [`PrimaryAnalysis::new`].
#[derive(Debug, Clone)]
pub struct AnalysisInput {
    pub entry_id: String,
    pub user_id: String,
    pub day_index: u32,
    pub a: f64,
    pub m: f64,
    pub sentiment: f64,
    pub tone: Tone,
    pub emotion_flow: Vec<String>,
    pub text: String,
    pub tags: Vec<EthicsTag>,
}

/// One diary entry's validated analyzer output.
///
/// Out-of-range fields are rejected at construction, never clamped.
/// `has_distress` is derived once from the emotion flow against the
/// configured distress set. Immutable after construction; safe to share
/// across threads.
#[derive(Debug, Clone, Serialize)]
pub struct PrimaryAnalysis {
    pub entry_id: String,
    pub user_id: String,
    pub day_index: u32,
    pub a: f64,
    pub m: f64,
    pub sentiment: f64,
    pub tone: Tone,
    pub emotion_flow: Vec<String>,
    pub has_distress: bool,
    pub text: String,
    pub tags: Vec<EthicsTag>,
}

fn check_range(field: &'static str, value: f64, min: f64, max: f64) -> Result<(), ValidationError> {
    if value >= min && value <= max {
        Ok(())
    } else {
        Err(ValidationError::OutOfRange {
            field,
            value,
            min,
            max,
        })
    }
}

impl PrimaryAnalysis {
    pub fn new(input: AnalysisInput, distress: &DistressSet) -> Result<Self, ValidationError> {
        check_range("a", input.a, 1.0, 5.0)?;
        check_range("m", input.m, 1.0, 5.0)?;
        check_range("sentiment", input.sentiment, 0.0, 100.0)?;
        if input.day_index < 1 {
            return Err(ValidationError::DayIndex(input.day_index));
        }
        let has_distress = input.emotion_flow.iter().any(|e| distress.contains(e));
        Ok(PrimaryAnalysis {
            entry_id: input.entry_id,
            user_id: input.user_id,
            day_index: input.day_index,
            a: input.a,
            m: input.m,
            sentiment: input.sentiment,
            tone: input.tone,
            emotion_flow: input.emotion_flow,
            has_distress,
            text: input.text,
            tags: input.tags,
        })
    }

    /// Count of tags on the positive spectrum (the code-level net compares
    /// this against the negative count).
    pub fn positive_tag_count(&self) -> usize {
        self.tags
            .iter()
            .filter(|t| t.spectrum == crate::ethics::Spectrum::Positive)
            .count()
    }

    pub fn negative_tag_count(&self) -> usize {
        self.tags.len() - self.positive_tag_count()
    }
}
