//! Decision records: per-stage traces, the final decision, and crisis alerts.

use crate::ethics::{EthicsTag, GuardReport};
use crate::level::InterventionLevel;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    S1,
    S2,
    S3,
    S4,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One stage's contribution to a decision. Output may drop below input only
/// for S3 traces whose reason starts with `release:`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: Stage,
    pub input_level: InterventionLevel,
    pub output_level: InterventionLevel,
    pub reason: String,
}

impl StageTrace {
    pub fn new(
        stage: Stage,
        input_level: InterventionLevel,
        output_level: InterventionLevel,
        reason: impl Into<String>,
    ) -> Self {
        let trace = StageTrace {
            stage,
            input_level,
            output_level,
            reason: reason.into(),
        };
        debug_assert!(trace.is_monotone(), "non-monotone trace: {trace:?}");
        trace
    }

    /// Safety monotonicity for this trace: upward-only, except a Stage 3
    /// release.
    pub fn is_monotone(&self) -> bool {
        self.output_level >= self.input_level
            || (self.stage == Stage::S3 && self.reason.starts_with("release:"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlertDisposition {
    Confirmed,
    FalsePositive,
}

/// Logged whenever an entry produced crisis candidates, regardless of
/// whether cross-validation confirmed them. Carries the anonymized user id
/// plus the full guard evaluation and the code-level net outcome so the
/// rejection path is auditable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrisisAlert {
    pub entry_id: String,
    pub user_id: String,
    pub triggering_tags: Vec<String>,
    pub disposition: AlertDisposition,
    pub guard_report: GuardReport,
    /// true when the positive-majority net held (positive tags outnumber
    /// negative and tone is non-crisis), i.e. layer two rejected.
    pub code_level_net: bool,
}

/// Final outcome for one entry: the level, the per-stage trace, the
/// post-validation tag set, and the alert if one was raised.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterventionDecision {
    pub entry_id: String,
    pub user_id: String,
    pub day_index: u32,
    pub final_level: InterventionLevel,
    pub traces: Vec<StageTrace>,
    pub crisis_alert: Option<CrisisAlert>,
    pub tags: Vec<EthicsTag>,
}

impl InterventionDecision {
    pub fn trace(&self, stage: Stage) -> Option<&StageTrace> {
        self.traces.iter().find(|t| t.stage == stage)
    }

    /// Structural invariants: exactly one S1/S2/S4 trace, at most one S3,
    /// final level equal to the last trace's output.
    pub fn check_shape(&self) -> bool {
        let count = |s: Stage| self.traces.iter().filter(|t| t.stage == s).count();
        count(Stage::S1) == 1
            && count(Stage::S2) == 1
            && count(Stage::S3) <= 1
            && count(Stage::S4) == 1
            && self
                .traces
                .last()
                .is_some_and(|t| t.output_level == self.final_level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use InterventionLevel::*;

    #[test]
    fn trace_monotonicity_rules() {
        let up = StageTrace::new(Stage::S2, None, Soft, "warning_promotion");
        assert!(up.is_monotone());

        let release = StageTrace {
            stage: Stage::S3,
            input_level: Soft,
            output_level: None,
            reason: "release:engaged-flow@0.91".into(),
        };
        assert!(release.is_monotone());

        let bad = StageTrace {
            stage: Stage::S4,
            input_level: Soft,
            output_level: None,
            reason: "release:engaged-flow@0.91".into(),
        };
        assert!(!bad.is_monotone());

        let bad_reason = StageTrace {
            stage: Stage::S3,
            input_level: Soft,
            output_level: None,
            reason: "maintain:engaged-flow@0.40".into(),
        };
        assert!(!bad_reason.is_monotone());
    }

    #[test]
    fn decision_shape_checked() {
        let mk = |stage, out| StageTrace {
            stage,
            input_level: None,
            output_level: out,
            reason: "x".into(),
        };
        let decision = InterventionDecision {
            entry_id: "e".into(),
            user_id: "u".into(),
            day_index: 1,
            final_level: Soft,
            traces: vec![mk(Stage::S1, Soft), mk(Stage::S2, Soft), mk(Stage::S4, Soft)],
            crisis_alert: Option::None,
            tags: vec![],
        };
        assert!(decision.check_shape());

        let mut missing_s4 = decision.clone();
        missing_s4.traces.pop();
        assert!(!missing_s4.check_shape());

        let mut wrong_final = decision;
        wrong_final.final_level = Hard;
        assert!(!wrong_final.check_shape());
    }

    #[test]
    fn disposition_serializes_screaming_snake() {
        assert_eq!(
            serde_json::to_string(&AlertDisposition::FalsePositive).unwrap(),
            "\"FALSE_POSITIVE\""
        );
    }
}
