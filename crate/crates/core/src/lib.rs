//! Graduated intervention engine for journaling-style entry streams.
//!
//! Four stages process each entry: rule grading over the (a, m) space,
//! signal-tag adjustment with two-layer crisis cross-validation, contextual
//! pattern analysis behind a pluggable classifier (the only stage that may
//! lower a level), and sliding-window historical escalation. Stages may
//! otherwise only maintain or raise the intervention level — safety
//! monotonicity — and every decision carries a per-stage trace.
//!
//! The engine is deterministic given its inputs: analyzer outputs arrive as
//! validated value objects, classifier results come through an adapter, and
//! nothing reads wall-clock time.

pub mod analysis;
pub mod anonymize;
pub mod decision;
pub mod error;
pub mod ethics;
pub mod level;
pub mod pipeline;
pub mod remote;
pub mod stage1;
pub mod stage3;
pub mod stage4;

pub use analysis::{AnalysisInput, DistressSet, PrimaryAnalysis, Tone};
pub use anonymize::anonymized_id;
pub use decision::{AlertDisposition, CrisisAlert, InterventionDecision, Stage, StageTrace};
pub use error::{PipelineError, StoreError, ValidationError};
pub use ethics::{
    adjust_level, cross_validate, detect_keyword_candidates, CrossValidation, CustomTagCounter,
    EthicsTag, GuardInputs, GuardReport, PromotionRow, Severity, Spectrum, TagOrigin, TagTaxonomy,
};
pub use level::{max_level, InterventionLevel};
pub use pipeline::{process_entry, PipelineConfig};
pub use remote::RemoteClassifier;
pub use stage1::{classify, RuleId, RuleThresholds};
pub use stage3::{
    AbsentClassifier, ClassifierAdapter, Pattern, PatternClassification, ScriptedClassifier,
};
pub use stage4::{
    escalate, EscalationReason, HistoryRecord, HistoryStore, JsonlHistoryStore,
    MemoryHistoryStore, WINDOW_SPAN,
};
