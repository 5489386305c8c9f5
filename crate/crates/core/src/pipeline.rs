//! Orchestration of the four stages for one entry.
//!
//! Order of operations: keyword scan and cross-validation first (so the
//! validated tag set is what Stage 2 adjusts on and what can block a Stage 3
//! release), then S1 -> S2 -> S3 -> S4, then the history append. Decisions
//! and alerts go to separate sinks; alerts are for immediate monitoring.

use crate::analysis::{DistressSet, PrimaryAnalysis};
use crate::decision::{InterventionDecision, Stage, StageTrace};
use crate::error::PipelineError;
use crate::ethics::{
    adjust_level, cross_validate, detect_keyword_candidates, EthicsTag, GuardInputs, Severity,
    TagOrigin, TagTaxonomy,
};
use crate::level::InterventionLevel;
use crate::stage1::{classify, RuleThresholds};
use crate::stage3::{evaluate, ClassifierAdapter};
use crate::stage4::{escalate, HistoryRecord, HistoryStore, WINDOW_SPAN};
use std::collections::BTreeSet;

/// Everything the pipeline needs to process entries deterministically.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub thresholds: RuleThresholds,
    pub taxonomy: TagTaxonomy,
    pub distress_emotions: DistressSet,
    pub release_confidence_min: f64,
    pub guard_sentiment_threshold: f64,
    /// When false, tags and alerts are still computed but every decision is
    /// forced to none (staged-rollout mode).
    pub slip_enabled: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            thresholds: RuleThresholds::default(),
            taxonomy: TagTaxonomy::default(),
            distress_emotions: DistressSet::default(),
            release_confidence_min: 0.70,
            guard_sentiment_threshold: 30.0,
            slip_enabled: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), crate::error::ValidationError> {
        self.thresholds.validate()
    }
}

/// The validated tag set for an entry: analyzer tags minus unconfirmed
/// crisis tags, plus confirmed keyword candidates.
fn post_validation_tags(
    analysis: &PrimaryAnalysis,
    confirmed: &[EthicsTag],
) -> Vec<EthicsTag> {
    let confirmed_names: BTreeSet<&str> = confirmed.iter().map(|t| t.name.as_str()).collect();
    let mut tags: Vec<EthicsTag> = analysis
        .tags
        .iter()
        .filter(|t| t.severity != Severity::Crisis || confirmed_names.contains(t.name.as_str()))
        .cloned()
        .collect();
    for tag in confirmed {
        if tag.origin == TagOrigin::KeywordCandidate
            && !tags.iter().any(|t| t.name == tag.name)
        {
            tags.push(tag.clone());
        }
    }
    tags
}

/// Process one entry end to end and append its history record.
///
/// Entries for one user must arrive in strictly increasing day order;
/// a repeated or earlier day is a replay error and leaves no trace.
pub fn process_entry(
    analysis: &PrimaryAnalysis,
    guard_inputs: GuardInputs,
    adapter: &dyn ClassifierAdapter,
    store: &dyn HistoryStore,
    config: &PipelineConfig,
) -> Result<InterventionDecision, PipelineError> {
    if let Some(last) = store.latest_day(&analysis.user_id)? {
        if analysis.day_index <= last {
            return Err(PipelineError::Replay {
                user: analysis.user_id.clone(),
                day: analysis.day_index,
            });
        }
    }

    // Crisis candidates: keyword hits plus crisis-severity analyzer tags.
    let mut candidates = detect_keyword_candidates(&analysis.text, &config.taxonomy);
    for tag in &analysis.tags {
        if tag.severity == Severity::Crisis && !candidates.iter().any(|c| c.name == tag.name) {
            candidates.push(tag.clone());
        }
    }
    let validation = cross_validate(
        &candidates,
        analysis,
        guard_inputs,
        config.guard_sentiment_threshold,
    );
    let tags = post_validation_tags(analysis, &validation.confirmed);

    if !config.slip_enabled {
        let off = |stage| {
            StageTrace::new(stage, InterventionLevel::None, InterventionLevel::None, "slip_disabled")
        };
        let traces = vec![off(Stage::S1), off(Stage::S2), off(Stage::S4)];
        store.append(HistoryRecord {
            user_id: analysis.user_id.clone(),
            day_index: analysis.day_index,
            final_level: InterventionLevel::None,
            pattern: None,
        })?;
        return Ok(InterventionDecision {
            entry_id: analysis.entry_id.clone(),
            user_id: analysis.user_id.clone(),
            day_index: analysis.day_index,
            final_level: InterventionLevel::None,
            traces,
            crisis_alert: validation.alert,
            tags,
        });
    }

    // Stage 1: rule grading.
    let (rule, s1_level) = classify(analysis.a, analysis.m, &config.thresholds)?;
    let mut traces = vec![StageTrace::new(
        Stage::S1,
        InterventionLevel::None,
        s1_level,
        rule.to_string(),
    )];

    // Stage 2: tag adjustment over the validated set.
    let (s2_level, s2_reason) = adjust_level(s1_level, &tags, &config.taxonomy);
    traces.push(StageTrace::new(Stage::S2, s1_level, s2_level, s2_reason));

    // Stage 3 sees the entry as validated (rejected crisis tags removed).
    let effective = PrimaryAnalysis {
        tags: tags.clone(),
        ..analysis.clone()
    };
    let s3 = evaluate(
        s2_level,
        rule,
        &effective,
        adapter,
        &config.taxonomy,
        config.release_confidence_min,
    );
    if let Some(reason) = &s3.reason {
        traces.push(StageTrace::new(Stage::S3, s2_level, s3.level, reason.clone()));
    }

    // Stage 4: sliding-window escalation over prior records.
    let window = store.window(&analysis.user_id, analysis.day_index, WINDOW_SPAN)?;
    let pattern = s3.classification.as_ref().map(|c| c.pattern);
    let (s4_level, s4_reason) = escalate(s3.level, pattern, &window, analysis.day_index);
    traces.push(StageTrace::new(
        Stage::S4,
        s3.level,
        s4_level,
        s4_reason.trace_reason(),
    ));

    store.append(HistoryRecord {
        user_id: analysis.user_id.clone(),
        day_index: analysis.day_index,
        final_level: s4_level,
        pattern,
    })?;

    let decision = InterventionDecision {
        entry_id: analysis.entry_id.clone(),
        user_id: analysis.user_id.clone(),
        day_index: analysis.day_index,
        final_level: s4_level,
        traces,
        crisis_alert: validation.alert,
        tags,
    };
    debug_assert!(decision.check_shape());
    Ok(decision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{AnalysisInput, Tone};
    use crate::decision::AlertDisposition;
    use crate::ethics::Spectrum;
    use crate::stage3::{AbsentClassifier, Pattern, PatternClassification, ScriptedClassifier};
    use crate::stage4::MemoryHistoryStore;
    use InterventionLevel::*;

    fn positive(name: &str) -> EthicsTag {
        EthicsTag::predefined(name, Spectrum::Positive, Severity::Normal)
    }

    fn case_a_analysis(config: &PipelineConfig) -> PrimaryAnalysis {
        PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: "case-a".into(),
                user_id: "prod-1".into(),
                day_index: 3,
                a: 4.6,
                m: 4.7,
                sentiment: 82.0,
                tone: Tone::Happy,
                emotion_flow: vec!["joy".into(), "energy".into()],
                text: "작업에 완전히 몰입했다".into(),
                tags: vec![positive("reflection"), EthicsTag::custom("flow-state")],
            },
            &config.distress_emotions,
        )
        .unwrap()
    }

    #[test]
    fn healthy_flow_is_released() {
        let config = PipelineConfig::default();
        let analysis = case_a_analysis(&config);
        let adapter = ScriptedClassifier::new().with(
            "case-a",
            PatternClassification::new(Pattern::EngagedFlow, 0.91, "goal-directed work"),
        );
        let store = MemoryHistoryStore::new();
        let decision =
            process_entry(&analysis, GuardInputs::default(), &adapter, &store, &config).unwrap();

        assert_eq!(decision.final_level, None);
        let shape: Vec<(Stage, InterventionLevel, InterventionLevel, &str)> = decision
            .traces
            .iter()
            .map(|t| (t.stage, t.input_level, t.output_level, t.reason.as_str()))
            .collect();
        assert_eq!(
            shape,
            vec![
                (Stage::S1, None, Soft, "R2"),
                (Stage::S2, Soft, Soft, "no_change"),
                (Stage::S3, Soft, None, "release:engaged-flow@0.91"),
                (Stage::S4, None, None, "no_change"),
            ]
        );
        assert!(decision.crisis_alert.is_none());
        // Exactly one record appended, with the released level.
        let window = store.window("prod-1", 3, WINDOW_SPAN).unwrap();
        assert_eq!(window.len(), 1);
        assert_eq!(window[0].final_level, None);
        assert_eq!(window[0].pattern, Some(Pattern::EngagedFlow));
    }

    #[test]
    fn phantom_keyword_match_ends_false_positive() {
        let config = PipelineConfig::default();
        let analysis = PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: "case-b".into(),
                user_id: "prod-2".into(),
                day_index: 5,
                a: 3.8,
                m: 3.6,
                sentiment: 85.0,
                tone: Tone::Happy,
                emotion_flow: vec!["joy".into()],
                text: "오늘은 내 철학대로 살기로 했다. 마음이 가볍다.".into(),
                tags: vec![
                    positive("reflection"),
                    positive("connection"),
                    positive("growth"),
                    positive("gratitude"),
                ],
            },
            &config.distress_emotions,
        )
        .unwrap();
        let store = MemoryHistoryStore::new();
        let decision = process_entry(
            &analysis,
            GuardInputs::default(),
            &AbsentClassifier,
            &store,
            &config,
        )
        .unwrap();

        assert_eq!(decision.final_level, None);
        assert!(decision.trace(Stage::S3).is_none());
        let alert = decision.crisis_alert.unwrap();
        assert_eq!(alert.disposition, AlertDisposition::FalsePositive);
        assert_eq!(alert.triggering_tags, vec!["crisis_child_abuse"]);
        assert!(alert.code_level_net);
        // The phantom tag does not survive into the decision's tag set.
        assert!(decision.tags.iter().all(|t| t.severity != Severity::Crisis));
    }

    fn crisis_crash_analysis(config: &PipelineConfig, user: &str, day: u32) -> PrimaryAnalysis {
        PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: format!("{user}-d{day}"),
                user_id: user.into(),
                day_index: day,
                a: 1.4,
                m: 1.3,
                sentiment: 25.0,
                tone: Tone::Crisis,
                emotion_flow: vec!["despair".into(), "hopelessness".into()],
                text: "왜 살아있는지 모르겠어".into(),
                tags: vec![
                    EthicsTag::predefined("crisis_suicide", Spectrum::Negative, Severity::Crisis),
                    EthicsTag::predefined("hopelessness", Spectrum::Negative, Severity::Warning),
                    EthicsTag::predefined("exhaustion", Spectrum::Negative, Severity::Normal),
                ],
            },
            &config.distress_emotions,
        )
        .unwrap()
    }

    #[test]
    fn confirmed_crisis_goes_hard() {
        let config = PipelineConfig::default();
        let analysis = crisis_crash_analysis(&config, "prod-3", 20);
        let store = MemoryHistoryStore::new();
        let decision = process_entry(
            &analysis,
            GuardInputs {
                literal_behavior: true,
                context_concerning: true,
            },
            &AbsentClassifier,
            &store,
            &config,
        )
        .unwrap();

        assert_eq!(decision.final_level, Hard);
        let shape: Vec<(Stage, &str)> = decision
            .traces
            .iter()
            .map(|t| (t.stage, t.reason.as_str()))
            .collect();
        assert_eq!(
            shape,
            vec![
                (Stage::S1, "R4"),
                (Stage::S2, "crisis_tag:crisis_suicide"),
                (Stage::S4, "no_change"),
            ]
        );
        let alert = decision.crisis_alert.unwrap();
        assert_eq!(alert.disposition, AlertDisposition::Confirmed);
        assert!(alert.guard_report.passed);
    }

    #[test]
    fn duplicate_day_is_replay_error() {
        let config = PipelineConfig::default();
        let analysis = case_a_analysis(&config);
        let store = MemoryHistoryStore::new();
        process_entry(&analysis, GuardInputs::default(), &AbsentClassifier, &store, &config)
            .unwrap();
        let err = process_entry(
            &analysis,
            GuardInputs::default(),
            &AbsentClassifier,
            &store,
            &config,
        )
        .unwrap_err();
        assert!(matches!(err, PipelineError::Replay { .. }));
        assert_eq!(store.window("prod-1", 3, WINDOW_SPAN).unwrap().len(), 1);
    }

    #[test]
    fn slip_disabled_forces_none_but_keeps_alerts() {
        let config = PipelineConfig {
            slip_enabled: false,
            ..Default::default()
        };
        let analysis = crisis_crash_analysis(&config, "prod-4", 2);
        let store = MemoryHistoryStore::new();
        let decision = process_entry(
            &analysis,
            GuardInputs {
                literal_behavior: true,
                context_concerning: true,
            },
            &AbsentClassifier,
            &store,
            &config,
        )
        .unwrap();
        assert_eq!(decision.final_level, None);
        assert!(decision.traces.iter().all(|t| t.reason == "slip_disabled"));
        assert!(decision.check_shape());
        // Tags and the alert are still computed and logged.
        assert_eq!(
            decision.crisis_alert.unwrap().disposition,
            AlertDisposition::Confirmed
        );
        assert!(decision.tags.iter().any(|t| t.severity == Severity::Crisis));
    }

    #[test]
    fn degraded_adapter_and_empty_history_reduce_to_stage2() {
        let config = PipelineConfig::default();
        let analysis = PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: "e".into(),
                user_id: "u".into(),
                day_index: 1,
                a: 1.8,
                m: 3.0,
                sentiment: 45.0,
                tone: Tone::Tense,
                emotion_flow: vec![],
                text: "지친다".into(),
                tags: vec![],
            },
            &config.distress_emotions,
        )
        .unwrap();
        let store = MemoryHistoryStore::new();
        let decision =
            process_entry(&analysis, GuardInputs::default(), &AbsentClassifier, &store, &config)
                .unwrap();
        let s2 = decision.trace(Stage::S2).unwrap().output_level;
        assert_eq!(decision.final_level, s2);
        assert_eq!(decision.final_level, Soft); // R5 via a <= 2
        assert_eq!(
            decision.trace(Stage::S3).unwrap().reason,
            "classifier_unavailable"
        );
    }

    #[test]
    fn vigilance_follows_a_hard_day() {
        let config = PipelineConfig::default();
        let store = MemoryHistoryStore::new();
        let crash = crisis_crash_analysis(&config, "u", 4);
        process_entry(
            &crash,
            GuardInputs {
                literal_behavior: true,
                context_concerning: true,
            },
            &AbsentClassifier,
            &store,
            &config,
        )
        .unwrap();

        let next = PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: "u-d6".into(),
                user_id: "u".into(),
                day_index: 6,
                a: 3.0,
                m: 3.0,
                sentiment: 40.0,
                tone: Tone::Tense,
                emotion_flow: vec![],
                text: "조금 나아졌다".into(),
                tags: vec![],
            },
            &config.distress_emotions,
        )
        .unwrap();
        let decision =
            process_entry(&next, GuardInputs::default(), &AbsentClassifier, &store, &config)
                .unwrap();
        assert_eq!(decision.final_level, Soft);
        assert_eq!(decision.trace(Stage::S4).unwrap().reason, "vigilance");
    }
}
