//! Stage 3: contextual pattern classification and the release decision.
//!
//! The only stage allowed to lower a level, and only from soft to none, and
//! only on affirmative evidence: an engaged-flow or baseline classification
//! at sufficient confidence. A missing or failed classifier keeps the level
//! as is.

use crate::analysis::PrimaryAnalysis;
use crate::ethics::{Severity, TagTaxonomy};
use crate::level::InterventionLevel;
use crate::stage1::RuleId;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Behavioral pattern classes. Internal risk labels, never shown to users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    ElevatedEnergy,
    EngagedFlow,
    LowEngagement,
    SustainedImmersion,
    Baseline,
}

impl Pattern {
    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::ElevatedEnergy => "elevated-energy",
            Pattern::EngagedFlow => "engaged-flow",
            Pattern::LowEngagement => "low-engagement",
            Pattern::SustainedImmersion => "sustained-immersion",
            Pattern::Baseline => "baseline",
        }
    }

    /// Patterns that justify releasing a soft flag back to none.
    pub fn releases(self) -> bool {
        matches!(self, Pattern::EngagedFlow | Pattern::Baseline)
    }

    pub fn parse(label: &str) -> Option<Self> {
        match label {
            "elevated-energy" => Some(Pattern::ElevatedEnergy),
            "engaged-flow" => Some(Pattern::EngagedFlow),
            "low-engagement" => Some(Pattern::LowEngagement),
            "sustained-immersion" => Some(Pattern::SustainedImmersion),
            "baseline" => Some(Pattern::Baseline),
            _ => None,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternClassification {
    pub pattern: Pattern,
    pub confidence: f64,
    pub reasoning: String,
}

impl PatternClassification {
    pub fn new(pattern: Pattern, confidence: f64, reasoning: impl Into<String>) -> Self {
        PatternClassification {
            pattern,
            confidence: confidence.clamp(0.0, 1.0),
            reasoning: reasoning.into(),
        }
    }
}

/// Pluggable secondary classifier. `None` means unavailable (timeout,
/// failure, or simply not configured) and always fails safe: no release.
/// Implementations must not touch pipeline state.
pub trait ClassifierAdapter: Send + Sync {
    fn classify(&self, analysis: &PrimaryAnalysis) -> Option<PatternClassification>;
}

/// Test double and fixture replay adapter: classifications looked up by
/// entry id.
#[derive(Debug, Default, Clone)]
pub struct ScriptedClassifier {
    by_entry: HashMap<String, PatternClassification>,
}

impl ScriptedClassifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry_id: impl Into<String>, classification: PatternClassification) {
        self.by_entry.insert(entry_id.into(), classification);
    }

    pub fn with(
        mut self,
        entry_id: impl Into<String>,
        classification: PatternClassification,
    ) -> Self {
        self.insert(entry_id, classification);
        self
    }
}

impl ClassifierAdapter for ScriptedClassifier {
    fn classify(&self, analysis: &PrimaryAnalysis) -> Option<PatternClassification> {
        self.by_entry.get(&analysis.entry_id).cloned()
    }
}

/// Adapter that is never available. Useful for degradation tests.
#[derive(Debug, Default, Clone, Copy)]
pub struct AbsentClassifier;

impl ClassifierAdapter for AbsentClassifier {
    fn classify(&self, _analysis: &PrimaryAnalysis) -> Option<PatternClassification> {
        None
    }
}

/// Outcome of the Stage 3 evaluation.
#[derive(Debug, Clone)]
pub struct Stage3Outcome {
    pub level: InterventionLevel,
    pub classification: Option<PatternClassification>,
    /// Trace reason when the stage activated; `None` when it did not.
    pub reason: Option<String>,
}

/// Whether Stage 3 runs at all for this entry. R1 and hard levels are
/// excluded: extreme low states get an immediate response, not an AI
/// second opinion. Confirmed crisis or dangerous tags also block release.
pub fn activates(
    rule: RuleId,
    level_in: InterventionLevel,
    analysis: &PrimaryAnalysis,
    taxonomy: &TagTaxonomy,
) -> bool {
    let suspected = matches!(rule, RuleId::R2 | RuleId::R3 | RuleId::R4 | RuleId::R5);
    let blocked = analysis
        .tags
        .iter()
        .any(|t| taxonomy.effective_severity(t) >= Severity::Dangerous);
    suspected && level_in == InterventionLevel::Soft && !analysis.text.is_empty() && !blocked
}

/// Run Stage 3. Returns the (possibly released) level plus whatever
/// classification was obtained.
pub fn evaluate(
    level_in: InterventionLevel,
    rule: RuleId,
    analysis: &PrimaryAnalysis,
    adapter: &dyn ClassifierAdapter,
    taxonomy: &TagTaxonomy,
    release_confidence_min: f64,
) -> Stage3Outcome {
    if !activates(rule, level_in, analysis, taxonomy) {
        return Stage3Outcome {
            level: level_in,
            classification: None,
            reason: None,
        };
    }
    match adapter.classify(analysis) {
        Some(c) if c.pattern.releases() && c.confidence >= release_confidence_min => {
            let reason = format!("release:{}@{:.2}", c.pattern, c.confidence);
            Stage3Outcome {
                level: InterventionLevel::None,
                classification: Some(c),
                reason: Some(reason),
            }
        }
        Some(c) => {
            let reason = format!("maintain:{}@{:.2}", c.pattern, c.confidence);
            Stage3Outcome {
                level: level_in,
                classification: Some(c),
                reason: Some(reason),
            }
        }
        None => Stage3Outcome {
            level: level_in,
            classification: None,
            reason: Some("classifier_unavailable".into()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{AnalysisInput, DistressSet, Tone};
    use crate::ethics::{EthicsTag, Spectrum, TagOrigin};
    use InterventionLevel::*;

    fn analysis(text: &str, tags: Vec<EthicsTag>) -> PrimaryAnalysis {
        PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: "e".into(),
                user_id: "u".into(),
                day_index: 1,
                a: 4.6,
                m: 4.7,
                sentiment: 82.0,
                tone: Tone::Happy,
                emotion_flow: vec!["joy".into()],
                text: text.into(),
                tags,
            },
            &DistressSet::default(),
        )
        .unwrap()
    }

    fn scripted(pattern: Pattern, confidence: f64) -> ScriptedClassifier {
        ScriptedClassifier::new().with("e", PatternClassification::new(pattern, confidence, "r"))
    }

    #[test]
    fn releases_engaged_flow_at_confidence() {
        let a = analysis("몰입해서 작업했다", vec![]);
        let tax = TagTaxonomy::default();
        let out = evaluate(Soft, RuleId::R2, &a, &scripted(Pattern::EngagedFlow, 0.91), &tax, 0.70);
        assert_eq!(out.level, None);
        assert_eq!(out.reason.as_deref(), Some("release:engaged-flow@0.91"));
        assert_eq!(out.classification.unwrap().pattern, Pattern::EngagedFlow);
    }

    #[test]
    fn non_release_pattern_maintains() {
        let a = analysis("버겁다", vec![]);
        let tax = TagTaxonomy::default();
        let out =
            evaluate(Soft, RuleId::R4, &a, &scripted(Pattern::LowEngagement, 0.85), &tax, 0.70);
        assert_eq!(out.level, Soft);
        assert_eq!(out.reason.as_deref(), Some("maintain:low-engagement@0.85"));
    }

    #[test]
    fn never_activates_on_r1_or_hard() {
        let a = analysis("text", vec![]);
        let tax = TagTaxonomy::default();
        let out = evaluate(Hard, RuleId::R1, &a, &scripted(Pattern::Baseline, 0.99), &tax, 0.70);
        assert_eq!(out.level, Hard);
        assert!(out.reason.is_none());
        assert!(out.classification.is_none());
    }

    #[test]
    fn below_confidence_threshold_maintains() {
        let a = analysis("text", vec![]);
        let tax = TagTaxonomy::default();
        let out = evaluate(Soft, RuleId::R2, &a, &scripted(Pattern::EngagedFlow, 0.50), &tax, 0.70);
        assert_eq!(out.level, Soft);
        assert_eq!(out.reason.as_deref(), Some("maintain:engaged-flow@0.50"));
    }

    #[test]
    fn absent_classifier_fails_safe() {
        let a = analysis("text", vec![]);
        let tax = TagTaxonomy::default();
        let out = evaluate(Soft, RuleId::R5, &a, &AbsentClassifier, &tax, 0.70);
        assert_eq!(out.level, Soft);
        assert_eq!(out.reason.as_deref(), Some("classifier_unavailable"));
    }

    #[test]
    fn empty_text_skips_stage() {
        let a = analysis("", vec![]);
        let tax = TagTaxonomy::default();
        let out = evaluate(Soft, RuleId::R2, &a, &scripted(Pattern::EngagedFlow, 0.95), &tax, 0.70);
        assert_eq!(out.level, Soft);
        assert!(out.reason.is_none());
    }

    #[test]
    fn confirmed_crisis_tag_blocks_release() {
        let crisis = EthicsTag::new(
            "crisis_suicide",
            Spectrum::Negative,
            crate::ethics::Severity::Crisis,
            TagOrigin::Predefined,
        )
        .unwrap();
        let a = analysis("text", vec![crisis]);
        let tax = TagTaxonomy::default();
        let out = evaluate(Soft, RuleId::R2, &a, &scripted(Pattern::EngagedFlow, 0.95), &tax, 0.70);
        assert_eq!(out.level, Soft);
        assert!(out.reason.is_none());
    }
}
