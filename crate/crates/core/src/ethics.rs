//! Signal-tag taxonomy and Stage 2 level adjustment.
//!
//! Tags grade entries along a severity ladder (normal, warning, dangerous,
//! crisis). Crisis tags are never trusted directly: they must survive a
//! two-layer cross-validation (prompt-level guard plus code-level
//! positive-majority net) before Stage 2 may escalate on them. The keyword
//! scanner is a plain substring match on purpose — phantom matches inside
//! compound words are the failure mode the cross-validation exists to catch,
//! so the scanner must be able to produce them.

use crate::analysis::PrimaryAnalysis;
use crate::anonymize::anonymized_id;
use crate::decision::{AlertDisposition, CrisisAlert};
use crate::error::ValidationError;
use crate::level::InterventionLevel;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spectrum {
    Positive,
    Negative,
}

/// Severity ladder for signal tags. `Warning` promotes none to soft,
/// `Dangerous` and (validated) `Crisis` escalate to hard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Normal,
    Warning,
    Dangerous,
    Crisis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagOrigin {
    Predefined,
    Custom,
    KeywordCandidate,
}

/// A behavioral signal tag attached to an entry.
///
/// Construction enforces two invariants: crisis tags are always on the
/// negative spectrum, and custom (AI-generated) tags can carry at most
/// warning severity — a custom tag can never force a hard intervention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTag")]
pub struct EthicsTag {
    pub name: String,
    pub spectrum: Spectrum,
    pub severity: Severity,
    pub origin: TagOrigin,
}

#[derive(Deserialize)]
struct RawTag {
    name: String,
    spectrum: Spectrum,
    severity: Severity,
    origin: TagOrigin,
}

impl TryFrom<RawTag> for EthicsTag {
    type Error = ValidationError;
    fn try_from(raw: RawTag) -> Result<Self, ValidationError> {
        EthicsTag::new(raw.name, raw.spectrum, raw.severity, raw.origin)
    }
}

impl EthicsTag {
    pub fn new(
        name: impl Into<String>,
        spectrum: Spectrum,
        severity: Severity,
        origin: TagOrigin,
    ) -> Result<Self, ValidationError> {
        let name = name.into();
        if severity == Severity::Crisis && spectrum != Spectrum::Negative {
            return Err(ValidationError::Tag {
                name,
                reason: "crisis severity requires the negative spectrum".into(),
            });
        }
        if origin == TagOrigin::Custom && severity > Severity::Warning {
            return Err(ValidationError::Tag {
                name,
                reason: "custom tags cannot carry dangerous or crisis severity".into(),
            });
        }
        Ok(EthicsTag {
            name,
            spectrum,
            severity,
            origin,
        })
    }

    pub fn predefined(name: &str, spectrum: Spectrum, severity: Severity) -> Self {
        EthicsTag::new(name, spectrum, severity, TagOrigin::Predefined)
            .expect("predefined tag definitions are valid")
    }

    pub fn custom(name: &str) -> Self {
        EthicsTag::new(name, Spectrum::Positive, Severity::Normal, TagOrigin::Custom)
            .expect("normal custom tag is valid")
    }
}

// Predefined taxonomy: 12 tags, 6 per spectrum. gratitude and vitality are
// placeholder labels pending calibration against live tag distributions.
const POSITIVE_TAGS: [&str; 6] = [
    "reflection",
    "connection",
    "growth",
    "resilience",
    "gratitude",
    "vitality",
];
const NEGATIVE_NORMAL_TAGS: [&str; 2] = ["exhaustion", "uncertainty"];
const NEGATIVE_WARNING_TAGS: [&str; 4] = ["overwhelm", "isolation", "hopelessness", "anxiety"];

const DEFAULT_DANGEROUS_TAGS: [&str; 1] = ["self-harm"];

// Starter keyword list; extend or replace via the [keywords] config table.
const DEFAULT_CRISIS_KEYWORDS: [(&str, &str); 3] = [
    ("\u{d559}\u{b300}", "crisis_child_abuse"), // 학대
    ("\u{c790}\u{c0b4}", "crisis_suicide"),     // 자살
    ("\u{c8fd}\u{ace0} \u{c2f6}", "crisis_suicide"), // 죽고 싶
];

// Behavioral elevation tags: honored as warnings only when the deployment
// opts in, otherwise treated as normal signals.
const ELEVATION_TAGS: [&str; 3] = ["sleep-energy-paradox", "grandiosity", "impulsive-spending"];

/// Tag registry: the 12 predefined tags, the crisis keyword map, the
/// dangerous/crisis name registries, and promotion settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TagTaxonomy {
    predefined: Vec<EthicsTag>,
    crisis_keywords: BTreeMap<String, String>,
    crisis_tags: BTreeSet<String>,
    dangerous_tags: BTreeSet<String>,
    elevation_tags: BTreeSet<String>,
    pub elevation_tags_enabled: bool,
    pub promotion_threshold: f64,
}

impl Default for TagTaxonomy {
    fn default() -> Self {
        let mut predefined = Vec::with_capacity(12);
        for name in POSITIVE_TAGS {
            predefined.push(EthicsTag::predefined(name, Spectrum::Positive, Severity::Normal));
        }
        for name in NEGATIVE_NORMAL_TAGS {
            predefined.push(EthicsTag::predefined(name, Spectrum::Negative, Severity::Normal));
        }
        for name in NEGATIVE_WARNING_TAGS {
            predefined.push(EthicsTag::predefined(name, Spectrum::Negative, Severity::Warning));
        }
        let crisis_keywords: BTreeMap<String, String> = DEFAULT_CRISIS_KEYWORDS
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let crisis_tags = crisis_keywords.values().cloned().collect();
        TagTaxonomy {
            predefined,
            crisis_keywords,
            crisis_tags,
            dangerous_tags: DEFAULT_DANGEROUS_TAGS.iter().map(|s| s.to_string()).collect(),
            elevation_tags: ELEVATION_TAGS.iter().map(|s| s.to_string()).collect(),
            elevation_tags_enabled: false,
            promotion_threshold: 0.05,
        }
    }
}

impl TagTaxonomy {
    /// The 12 predefined tags (6 positive, 6 negative).
    pub fn predefined(&self) -> &[EthicsTag] {
        &self.predefined
    }

    pub fn crisis_keywords(&self) -> &BTreeMap<String, String> {
        &self.crisis_keywords
    }

    /// Register or replace a keyword; its target tag joins the crisis registry.
    pub fn add_crisis_keyword(&mut self, keyword: impl Into<String>, tag_name: impl Into<String>) {
        let tag_name = tag_name.into();
        self.crisis_tags.insert(tag_name.clone());
        self.crisis_keywords.insert(keyword.into(), tag_name);
    }

    pub fn add_dangerous_tag(&mut self, name: impl Into<String>) {
        self.dangerous_tags.insert(name.into());
    }

    pub fn is_crisis_name(&self, name: &str) -> bool {
        self.crisis_tags.contains(name)
    }

    pub fn is_dangerous_name(&self, name: &str) -> bool {
        self.dangerous_tags.contains(name)
    }

    /// Severity after applying the elevation-tag gate. Elevation-targeting
    /// tags count as warnings only when the deployment has opted in.
    pub fn effective_severity(&self, tag: &EthicsTag) -> Severity {
        if self.elevation_tags.contains(&tag.name) {
            if self.elevation_tags_enabled {
                Severity::Warning
            } else {
                Severity::Normal
            }
        } else {
            tag.severity
        }
    }

    /// Validate an externally supplied tag against the registry. Predefined
    /// names must match their registered spectrum and severity; custom names
    /// must not collide with registered ones; keyword candidates are
    /// engine-generated and never accepted from input.
    pub fn validate_tag(&self, tag: &EthicsTag) -> Result<(), ValidationError> {
        let err = |reason: &str| {
            Err(ValidationError::Tag {
                name: tag.name.clone(),
                reason: reason.to_string(),
            })
        };
        match tag.origin {
            TagOrigin::KeywordCandidate => err("keyword candidates cannot be supplied as input"),
            TagOrigin::Predefined => {
                if let Some(def) = self.predefined.iter().find(|d| d.name == tag.name) {
                    if def.spectrum != tag.spectrum || def.severity != tag.severity {
                        return err("spectrum or severity does not match the registry");
                    }
                    return Ok(());
                }
                if self.is_crisis_name(&tag.name) {
                    if tag.severity != Severity::Crisis || tag.spectrum != Spectrum::Negative {
                        return err("registered crisis tag must be crisis/negative");
                    }
                    return Ok(());
                }
                if self.is_dangerous_name(&tag.name) {
                    if tag.severity != Severity::Dangerous || tag.spectrum != Spectrum::Negative {
                        return err("registered dangerous tag must be dangerous/negative");
                    }
                    return Ok(());
                }
                err("unknown predefined tag name")
            }
            TagOrigin::Custom => {
                let reserved = self.predefined.iter().any(|d| d.name == tag.name)
                    || self.is_crisis_name(&tag.name)
                    || self.is_dangerous_name(&tag.name);
                if reserved {
                    err("custom tag name collides with a registered tag")
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Plain substring scan of the text against the crisis keyword map.
///
/// Each hit yields a crisis-severity candidate tag. No morphological
/// segmentation is attempted: a keyword embedded inside an unrelated
/// compound still matches, and cross-validation downstream is what
/// disposes of those phantom hits.
pub fn detect_keyword_candidates(text: &str, taxonomy: &TagTaxonomy) -> Vec<EthicsTag> {
    let mut names = BTreeSet::new();
    for (keyword, tag_name) in taxonomy.crisis_keywords() {
        if !keyword.is_empty() && text.contains(keyword.as_str()) {
            names.insert(tag_name.clone());
        }
    }
    names
        .into_iter()
        .map(|name| EthicsTag {
            name,
            spectrum: Spectrum::Negative,
            severity: Severity::Crisis,
            origin: TagOrigin::KeywordCandidate,
        })
        .collect()
}

/// Per-entry guard facts that cannot be derived inside the engine.
/// `literal_behavior` and `context_concerning` come from the analyzer
/// (or fixture) that saw the full text in context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardInputs {
    pub literal_behavior: bool,
    pub context_concerning: bool,
}

/// Outcome of the prompt-level guard: all four conditions must hold for a
/// crisis candidate to survive layer one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardReport {
    /// sentiment below the configured threshold (default 30)
    pub cond_a: bool,
    /// distress present in the emotion flow
    pub cond_b: bool,
    /// behavior described literally rather than figuratively
    pub cond_c: bool,
    /// surrounding context concerning without the suspect keyword
    pub cond_d: bool,
    pub passed: bool,
}

impl GuardReport {
    pub fn evaluate(
        analysis: &PrimaryAnalysis,
        inputs: GuardInputs,
        sentiment_threshold: f64,
    ) -> Self {
        let cond_a = analysis.sentiment < sentiment_threshold;
        let cond_b = analysis.has_distress;
        let cond_c = inputs.literal_behavior;
        let cond_d = inputs.context_concerning;
        GuardReport {
            cond_a,
            cond_b,
            cond_c,
            cond_d,
            passed: cond_a && cond_b && cond_c && cond_d,
        }
    }
}

/// Result of two-layer cross-validation over crisis candidates.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub confirmed: Vec<EthicsTag>,
    pub alert: Option<CrisisAlert>,
}

/// Run both cross-validation layers over the crisis candidates of one entry.
///
/// Layer one is the prompt-level guard; layer two the code-level net that
/// rejects candidates when positive tags outnumber negative ones and the
/// tone is non-crisis. Whenever there is at least one candidate a
/// [`CrisisAlert`] is emitted, `FALSE_POSITIVE` exactly when nothing
/// survived.
pub fn cross_validate(
    candidates: &[EthicsTag],
    analysis: &PrimaryAnalysis,
    guard_inputs: GuardInputs,
    sentiment_threshold: f64,
) -> CrossValidation {
    debug_assert!(candidates.iter().all(|c| c.severity == Severity::Crisis));
    if candidates.is_empty() {
        return CrossValidation {
            confirmed: Vec::new(),
            alert: None,
        };
    }

    let guard = GuardReport::evaluate(analysis, guard_inputs, sentiment_threshold);
    let positive = analysis.positive_tag_count();
    let negative = analysis.negative_tag_count();
    let code_level_net = positive > negative && !analysis.tone.is_crisis();

    let confirmed: Vec<EthicsTag> = if guard.passed && !code_level_net {
        candidates.to_vec()
    } else {
        Vec::new()
    };

    let disposition = if confirmed.is_empty() {
        AlertDisposition::FalsePositive
    } else {
        AlertDisposition::Confirmed
    };
    let alert = CrisisAlert {
        entry_id: analysis.entry_id.clone(),
        user_id: anonymized_id(&analysis.user_id),
        triggering_tags: candidates.iter().map(|c| c.name.clone()).collect(),
        disposition,
        guard_report: guard,
        code_level_net,
    };

    CrossValidation {
        confirmed,
        alert: Some(alert),
    }
}

/// Stage 2: strictly upward adjustment of the level from tag severities.
///
/// Expects a post-validation tag set (no unconfirmed keyword candidates).
/// Crisis and dangerous tags force hard; warning tags promote none to soft;
/// anything else leaves the level untouched.
pub fn adjust_level(
    level_in: InterventionLevel,
    tags: &[EthicsTag],
    taxonomy: &TagTaxonomy,
) -> (InterventionLevel, String) {
    if let Some(crisis) = tags
        .iter()
        .find(|t| taxonomy.effective_severity(t) == Severity::Crisis)
    {
        return (
            level_in.max(InterventionLevel::Hard),
            format!("crisis_tag:{}", crisis.name),
        );
    }
    if tags
        .iter()
        .any(|t| taxonomy.effective_severity(t) == Severity::Dangerous)
    {
        return (level_in.max(InterventionLevel::Hard), "dangerous_tag".into());
    }
    let has_warning = tags
        .iter()
        .any(|t| taxonomy.effective_severity(t) == Severity::Warning);
    if has_warning && level_in == InterventionLevel::None {
        return (InterventionLevel::Soft, "warning_promotion".into());
    }
    (level_in, "no_change".into())
}

/// Entry-frequency accumulator for custom tags, feeding the taxonomy
/// promotion report. Single writer; shard and merge if ingestion is
/// parallelized.
#[derive(Debug, Default, Clone)]
pub struct CustomTagCounter {
    entries: usize,
    counts: BTreeMap<String, usize>,
}

/// One row of the promotion report: a custom tag whose entry frequency
/// reached the promotion threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromotionRow {
    pub tag: String,
    pub count: usize,
    pub fraction: f64,
}

impl CustomTagCounter {
    /// Record one entry's tags. A tag repeated within the same entry counts
    /// once.
    pub fn observe<'a, I>(&mut self, tags: I)
    where
        I: IntoIterator<Item = &'a EthicsTag>,
    {
        self.entries += 1;
        let unique: BTreeSet<&str> = tags
            .into_iter()
            .filter(|t| t.origin == TagOrigin::Custom)
            .map(|t| t.name.as_str())
            .collect();
        for name in unique {
            *self.counts.entry(name.to_string()).or_insert(0) += 1;
        }
    }

    pub fn entries_seen(&self) -> usize {
        self.entries
    }

    pub fn merge(&mut self, other: &CustomTagCounter) {
        self.entries += other.entries;
        for (name, count) in &other.counts {
            *self.counts.entry(name.clone()).or_insert(0) += count;
        }
    }

    /// Promotion candidates at the given entry-frequency threshold, sorted
    /// by count descending (name ascending on ties).
    pub fn report(&self, threshold: f64) -> Vec<PromotionRow> {
        if self.entries == 0 {
            return Vec::new();
        }
        let mut rows: Vec<PromotionRow> = self
            .counts
            .iter()
            .filter_map(|(tag, &count)| {
                let fraction = count as f64 / self.entries as f64;
                (fraction >= threshold).then(|| PromotionRow {
                    tag: tag.clone(),
                    count,
                    fraction,
                })
            })
            .collect();
        rows.sort_by(|x, y| y.count.cmp(&x.count).then_with(|| x.tag.cmp(&y.tag)));
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{AnalysisInput, DistressSet, Tone};
    use proptest::prelude::*;

    fn analysis(
        sentiment: f64,
        tone: Tone,
        emotions: &[&str],
        tags: Vec<EthicsTag>,
    ) -> PrimaryAnalysis {
        PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: "e".into(),
                user_id: "u".into(),
                day_index: 1,
                a: 3.0,
                m: 3.0,
                sentiment,
                tone,
                emotion_flow: emotions.iter().map(|s| s.to_string()).collect(),
                text: String::new(),
                tags,
            },
            &DistressSet::default(),
        )
        .unwrap()
    }

    fn warning(name: &str) -> EthicsTag {
        EthicsTag::predefined(name, Spectrum::Negative, Severity::Warning)
    }

    fn positive(name: &str) -> EthicsTag {
        EthicsTag::predefined(name, Spectrum::Positive, Severity::Normal)
    }

    fn crisis(name: &str) -> EthicsTag {
        EthicsTag::predefined(name, Spectrum::Negative, Severity::Crisis)
    }

    #[test]
    fn taxonomy_has_twelve_predefined_six_per_spectrum() {
        let tax = TagTaxonomy::default();
        assert_eq!(tax.predefined().len(), 12);
        let pos = tax
            .predefined()
            .iter()
            .filter(|t| t.spectrum == Spectrum::Positive)
            .count();
        assert_eq!(pos, 6);
        for tag_name in tax.crisis_keywords().values() {
            assert!(tax.is_crisis_name(tag_name));
        }
    }

    #[test]
    fn tag_invariants_enforced() {
        assert!(EthicsTag::new("x", Spectrum::Positive, Severity::Crisis, TagOrigin::Predefined)
            .is_err());
        assert!(
            EthicsTag::new("x", Spectrum::Negative, Severity::Dangerous, TagOrigin::Custom)
                .is_err()
        );
        assert!(
            EthicsTag::new("x", Spectrum::Negative, Severity::Warning, TagOrigin::Custom).is_ok()
        );
    }

    #[test]
    fn keyword_scan_matches_inside_compounds() {
        let tax = TagTaxonomy::default();
        // 철학대로 embeds 학대
        let hits = detect_keyword_candidates("오늘은 내 철학대로 살기로 했다", &tax);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].name, "crisis_child_abuse");
        assert_eq!(hits[0].origin, TagOrigin::KeywordCandidate);
        assert_eq!(hits[0].severity, Severity::Crisis);
    }

    #[test]
    fn keyword_scan_empty_text_and_indirect_phrasing() {
        let tax = TagTaxonomy::default();
        assert!(detect_keyword_candidates("", &tax).is_empty());
        // Indirect ideation carries none of the listed substrings.
        assert!(detect_keyword_candidates("내일 아침이 안 왔으면", &tax).is_empty());
    }

    #[test]
    fn keyword_scan_dedupes_by_tag_name() {
        let tax = TagTaxonomy::default();
        let hits = detect_keyword_candidates("자살이라는 단어, 죽고 싶다는 생각", &tax);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].name, "crisis_suicide");
    }

    #[test]
    fn cross_validate_rejects_phantom_match_both_layers() {
        // Happy entry, 4 positive / 0 negative, sentiment 85.
        let tags = vec![
            positive("reflection"),
            positive("connection"),
            positive("growth"),
            positive("gratitude"),
        ];
        let a = analysis(85.0, Tone::Happy, &["joy"], tags);
        let candidates = vec![crisis("crisis_child_abuse")];
        let out = cross_validate(&candidates, &a, GuardInputs::default(), 30.0);
        assert!(out.confirmed.is_empty());
        let alert = out.alert.unwrap();
        assert_eq!(alert.disposition, AlertDisposition::FalsePositive);
        assert!(!alert.guard_report.cond_a); // sentiment 85 > 30
        assert!(alert.code_level_net); // 4 positive > 0 negative, non-crisis tone
        assert_eq!(alert.triggering_tags, vec!["crisis_child_abuse"]);
    }

    #[test]
    fn cross_validate_confirms_genuine_crisis() {
        let tags = vec![
            crisis("crisis_suicide"),
            warning("hopelessness"),
            EthicsTag::predefined("exhaustion", Spectrum::Negative, Severity::Normal),
        ];
        let a = analysis(25.0, Tone::Crisis, &["despair", "hopelessness"], tags);
        let out = cross_validate(
            &[crisis("crisis_suicide")],
            &a,
            GuardInputs {
                literal_behavior: true,
                context_concerning: true,
            },
            30.0,
        );
        assert_eq!(out.confirmed.len(), 1);
        assert_eq!(out.confirmed[0].name, "crisis_suicide");
        let alert = out.alert.unwrap();
        assert_eq!(alert.disposition, AlertDisposition::Confirmed);
        assert!(alert.guard_report.passed);
        assert!(!alert.code_level_net);
    }

    #[test]
    fn cross_validate_no_candidates_no_alert() {
        let a = analysis(50.0, Tone::Calm, &[], vec![]);
        let out = cross_validate(&[], &a, GuardInputs::default(), 30.0);
        assert!(out.confirmed.is_empty());
        assert!(out.alert.is_none());
    }

    #[test]
    fn adjust_level_examples() {
        use InterventionLevel::*;
        let tax = TagTaxonomy::default();

        let (level, reason) = adjust_level(None, &[warning("isolation")], &tax);
        assert_eq!((level, reason.as_str()), (Soft, "warning_promotion"));

        let dangerous =
            EthicsTag::predefined("self-harm", Spectrum::Negative, Severity::Dangerous);
        let (level, reason) = adjust_level(None, &[dangerous], &tax);
        assert_eq!((level, reason.as_str()), (Hard, "dangerous_tag"));

        let (level, reason) = adjust_level(Hard, &[positive("reflection")], &tax);
        assert_eq!((level, reason.as_str()), (Hard, "no_change"));

        let (level, reason) = adjust_level(Soft, &[positive("growth"), positive("resilience")], &tax);
        assert_eq!((level, reason.as_str()), (Soft, "no_change"));

        let (level, reason) = adjust_level(None, &[crisis("crisis_suicide")], &tax);
        assert_eq!((level, reason.as_str()), (Hard, "crisis_tag:crisis_suicide"));

        // Warning tags do not promote soft further.
        let (level, _) = adjust_level(Soft, &[warning("anxiety")], &tax);
        assert_eq!(level, Soft);
    }

    #[test]
    fn elevation_tags_gated_by_flag() {
        use InterventionLevel::*;
        let mut tax = TagTaxonomy::default();
        let tag =
            EthicsTag::new("grandiosity", Spectrum::Negative, Severity::Warning, TagOrigin::Custom)
                .unwrap();

        let (level, _) = adjust_level(None, std::slice::from_ref(&tag), &tax);
        assert_eq!(level, None, "elevation tag ignored while disabled");

        tax.elevation_tags_enabled = true;
        let (level, reason) = adjust_level(None, &[tag], &tax);
        assert_eq!((level, reason.as_str()), (Soft, "warning_promotion"));
    }

    #[test]
    fn validate_tag_against_registry() {
        let tax = TagTaxonomy::default();
        assert!(tax.validate_tag(&positive("reflection")).is_ok());
        assert!(tax.validate_tag(&crisis("crisis_suicide")).is_ok());
        // Wrong severity for a registered name.
        let wrong = EthicsTag::predefined("isolation", Spectrum::Negative, Severity::Normal);
        assert!(tax.validate_tag(&wrong).is_err());
        // Unknown predefined name.
        let unknown = EthicsTag::predefined("serenity", Spectrum::Positive, Severity::Normal);
        assert!(tax.validate_tag(&unknown).is_err());
        // Custom name colliding with a registered tag.
        let collide =
            EthicsTag::new("reflection", Spectrum::Positive, Severity::Normal, TagOrigin::Custom)
                .unwrap();
        assert!(tax.validate_tag(&collide).is_err());
        // Keyword candidates never come from input.
        let kw = EthicsTag {
            name: "crisis_suicide".into(),
            spectrum: Spectrum::Negative,
            severity: Severity::Crisis,
            origin: TagOrigin::KeywordCandidate,
        };
        assert!(tax.validate_tag(&kw).is_err());
    }

    #[test]
    fn promotion_counter_reports_candidates() {
        let mut counter = CustomTagCounter::default();
        for i in 0..68 {
            let mut tags = Vec::new();
            if i < 9 {
                tags.push(EthicsTag::custom("self-care"));
            }
            if i < 3 {
                tags.push(EthicsTag::custom("one-off"));
            }
            counter.observe(tags.iter());
        }
        let rows = counter.report(0.10);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].tag, "self-care");
        assert_eq!(rows[0].count, 9);
        assert!((rows[0].fraction - 9.0 / 68.0).abs() < 1e-12);
    }

    #[test]
    fn promotion_counter_empty() {
        let counter = CustomTagCounter::default();
        assert!(counter.report(0.05).is_empty());
    }

    fn arb_severity() -> impl Strategy<Value = Severity> {
        prop_oneof![
            Just(Severity::Normal),
            Just(Severity::Warning),
            Just(Severity::Dangerous),
            Just(Severity::Crisis),
        ]
    }

    fn arb_tag() -> impl Strategy<Value = EthicsTag> {
        ("[a-z]{3,10}", arb_severity()).prop_map(|(name, severity)| EthicsTag {
            spectrum: Spectrum::Negative,
            severity,
            origin: TagOrigin::Predefined,
            name,
        })
    }

    fn arb_level() -> impl Strategy<Value = InterventionLevel> {
        prop_oneof![
            Just(InterventionLevel::None),
            Just(InterventionLevel::Soft),
            Just(InterventionLevel::Hard),
        ]
    }

    proptest! {
        #[test]
        fn adjust_level_is_upward_only(
            level in arb_level(),
            tags in proptest::collection::vec(arb_tag(), 0..8),
        ) {
            let tax = TagTaxonomy::default();
            let (out, _) = adjust_level(level, &tags, &tax);
            prop_assert!(out >= level);
        }

        #[test]
        fn guard_rejects_whenever_sentiment_at_or_above_threshold(
            sentiment in 30.0f64..100.0,
            distress in proptest::bool::ANY,
            literal in proptest::bool::ANY,
            concerning in proptest::bool::ANY,
        ) {
            let emotions: &[&str] = if distress { &["despair"] } else { &["calm"] };
            let a = analysis(sentiment, Tone::Crisis, emotions, vec![]);
            let out = cross_validate(
                &[crisis("crisis_suicide")],
                &a,
                GuardInputs { literal_behavior: literal, context_concerning: concerning },
                30.0,
            );
            prop_assert!(out.confirmed.is_empty());
            prop_assert_eq!(
                out.alert.unwrap().disposition,
                AlertDisposition::FalsePositive
            );
        }

        #[test]
        fn keyword_detection_is_monotone_under_suffixes(
            x in "[가-힣a-z ]{0,20}",
            y in "[가-힣a-z ]{0,20}",
        ) {
            let tax = TagTaxonomy::default();
            let base: BTreeSet<String> =
                detect_keyword_candidates(&x, &tax).into_iter().map(|t| t.name).collect();
            let extended: BTreeSet<String> = {
                let mut s = x.clone();
                s.push_str(&y);
                detect_keyword_candidates(&s, &tax).into_iter().map(|t| t.name).collect()
            };
            prop_assert!(base.is_subset(&extended));
        }
    }
}
