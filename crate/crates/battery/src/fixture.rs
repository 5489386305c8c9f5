//! Fixture entry format and loaders.
//!
//! One JSONL line per diary entry, carrying the precomputed analyzer
//! outputs plus the per-entry guard facts and the scripted classifier
//! result. Unknown fields are rejected and every load failure names the
//! file and line.

use crate::error::FixtureError;
use serde::{Deserialize, Serialize};
use slipgate_core::{
    AnalysisInput, EthicsTag, GuardInputs, Pattern, PatternClassification, PipelineConfig,
    PrimaryAnalysis, Tone,
};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Per-entry guard facts supplied by the analyzer that saw the text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardSpec {
    pub literal: bool,
    pub concerning: bool,
}

/// Scripted secondary-classifier output; `null` in the fixture means the
/// classifier was unavailable for that entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationSpec {
    pub pattern: String,
    pub confidence: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub reasoning: String,
}

fn default_true() -> bool {
    true
}

fn is_true(v: &bool) -> bool {
    *v
}

/// One fixture line. `persona` doubles as the stream (user) identifier;
/// `slip` mirrors the staged rollout (tags and alerts are always computed,
/// intervention output only when true).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureEntry {
    pub persona: String,
    pub day: u32,
    pub a: f64,
    pub m: f64,
    pub sentiment: f64,
    pub tone: String,
    pub emotions: Vec<String>,
    pub text: String,
    pub tags: Vec<EthicsTag>,
    pub guard: GuardSpec,
    pub classification: Option<ClassificationSpec>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub slip: bool,
}

impl FixtureEntry {
    pub fn entry_id(&self) -> String {
        format!("{}-d{:03}", self.persona, self.day)
    }

    pub fn with_tags(mut self, tags: Vec<EthicsTag>) -> Self {
        self.tags = tags;
        self
    }

    pub fn with_emotions(mut self, emotions: &[&str]) -> Self {
        self.emotions = emotions.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_classification(mut self, pattern: &str, confidence: f64) -> Self {
        self.classification = Some(ClassificationSpec {
            pattern: pattern.into(),
            confidence,
            reasoning: String::new(),
        });
        self
    }

    pub fn with_guard_flags(mut self, literal: bool, concerning: bool) -> Self {
        self.guard = GuardSpec {
            literal,
            concerning,
        };
        self
    }

    pub fn with_slip(mut self, slip: bool) -> Self {
        self.slip = slip;
        self
    }

    pub fn guard_inputs(&self) -> GuardInputs {
        GuardInputs {
            literal_behavior: self.guard.literal,
            context_concerning: self.guard.concerning,
        }
    }

    pub fn classification(&self) -> Result<Option<PatternClassification>, FixtureError> {
        match &self.classification {
            None => Ok(None),
            Some(spec) => {
                let pattern = Pattern::parse(&spec.pattern).ok_or_else(|| {
                    FixtureError::Entry {
                        entry: self.entry_id(),
                        reason: format!("unknown pattern label `{}`", spec.pattern),
                    }
                })?;
                Ok(Some(PatternClassification::new(
                    pattern,
                    spec.confidence,
                    spec.reasoning.clone(),
                )))
            }
        }
    }

    /// Validate and convert into the engine's analysis type.
    pub fn to_analysis(&self, config: &PipelineConfig) -> Result<PrimaryAnalysis, FixtureError> {
        let fail = |reason: String| FixtureError::Entry {
            entry: self.entry_id(),
            reason,
        };
        let tone = Tone::parse(&self.tone).map_err(|e| fail(e.to_string()))?;
        for tag in &self.tags {
            config
                .taxonomy
                .validate_tag(tag)
                .map_err(|e| fail(e.to_string()))?;
        }
        PrimaryAnalysis::new(
            AnalysisInput {
                entry_id: self.entry_id(),
                user_id: self.persona.clone(),
                day_index: self.day,
                a: self.a,
                m: self.m,
                sentiment: self.sentiment,
                tone,
                emotion_flow: self.emotions.clone(),
                text: self.text.clone(),
                tags: self.tags.clone(),
            },
            &config.distress_emotions,
        )
        .map_err(|e| fail(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash)]
pub enum PersonaId {
    A,
    B,
    C,
    D,
    E,
}

impl PersonaId {
    pub const ALL: [PersonaId; 5] = [
        PersonaId::A,
        PersonaId::B,
        PersonaId::C,
        PersonaId::D,
        PersonaId::E,
    ];

    /// Presentation order used by reports (normal first, elevated last).
    pub const REPORT_ORDER: [PersonaId; 5] = [
        PersonaId::E,
        PersonaId::C,
        PersonaId::D,
        PersonaId::B,
        PersonaId::A,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PersonaId::A => "A",
            PersonaId::B => "B",
            PersonaId::C => "C",
            PersonaId::D => "D",
            PersonaId::E => "E",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" => Some(PersonaId::A),
            "B" => Some(PersonaId::B),
            "C" => Some(PersonaId::C),
            "D" => Some(PersonaId::D),
            "E" => Some(PersonaId::E),
            _ => None,
        }
    }

    /// Battery design size for each persona stream.
    pub fn expected_entries(self) -> usize {
        match self {
            PersonaId::A => 30,
            PersonaId::B => 31,
            PersonaId::C => 10,
            PersonaId::D => 10,
            PersonaId::E => 10,
        }
    }

    pub fn file_name(self) -> String {
        format!("persona_{}.jsonl", self.as_str().to_ascii_lowercase())
    }
}

impl fmt::Display for PersonaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifier-capability variant of the battery. Personas A and C carry
/// variant-specific files; the rest reuse the base streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Base,
    TagsWeak,
    TagsStrong,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Base, Variant::TagsWeak, Variant::TagsStrong];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Base => "base",
            Variant::TagsWeak => "tags_weak",
            Variant::TagsStrong => "tags_strong",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "base" => Some(Variant::Base),
            "tags_weak" => Some(Variant::TagsWeak),
            "tags_strong" => Some(Variant::TagsStrong),
            _ => None,
        }
    }

    /// Variant runs honor behavioral elevation tags; the base run does not.
    pub fn pipeline_config(self, base: &PipelineConfig) -> PipelineConfig {
        let mut config = base.clone();
        config.taxonomy.elevation_tags_enabled = self != Variant::Base;
        config
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One persona's ordered entry stream under a given variant.
#[derive(Debug, Clone)]
pub struct PersonaFixture {
    pub persona: PersonaId,
    pub variant: Variant,
    pub entries: Vec<FixtureEntry>,
}

impl PersonaFixture {
    pub fn validate(&self) -> Result<(), FixtureError> {
        if self.entries.len() != self.persona.expected_entries() {
            return Err(FixtureError::EntryCount {
                persona: self.persona.to_string(),
                expected: self.persona.expected_entries(),
                found: self.entries.len(),
            });
        }
        let mut last_day = 0u32;
        for entry in &self.entries {
            if entry.persona != self.persona.as_str() {
                return Err(FixtureError::Entry {
                    entry: entry.entry_id(),
                    reason: format!("persona field does not match stream {}", self.persona),
                });
            }
            if entry.day <= last_day {
                return Err(FixtureError::Entry {
                    entry: entry.entry_id(),
                    reason: format!("day {} not strictly increasing (last {})", entry.day, last_day),
                });
            }
            last_day = entry.day;
        }
        Ok(())
    }
}

/// The five persona streams for one variant.
#[derive(Debug, Clone)]
pub struct BatterySet {
    pub variant: Variant,
    pub personas: Vec<PersonaFixture>,
}

impl BatterySet {
    pub fn get(&self, persona: PersonaId) -> Option<&PersonaFixture> {
        self.personas.iter().find(|p| p.persona == persona)
    }

    pub fn total_entries(&self) -> usize {
        self.personas.iter().map(|p| p.entries.len()).sum()
    }

    pub fn validate(&self) -> Result<(), FixtureError> {
        for persona in PersonaId::ALL {
            match self.get(persona) {
                None => {
                    return Err(FixtureError::MissingPersona {
                        persona: persona.to_string(),
                    })
                }
                Some(fixture) => fixture.validate()?,
            }
        }
        Ok(())
    }
}

/// Parse a JSONL fixture file, reporting the 1-based line on failure.
pub fn read_entries_jsonl(path: &Path) -> Result<Vec<FixtureEntry>, FixtureError> {
    let text = fs::read_to_string(path).map_err(|source| FixtureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: FixtureEntry =
            serde_json::from_str(line).map_err(|source| FixtureError::Line {
                path: path.display().to_string(),
                line: idx + 1,
                source,
            })?;
        entries.push(entry);
    }
    Ok(entries)
}

pub fn write_entries_jsonl(path: &Path, entries: &[FixtureEntry]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut out = Vec::new();
    for entry in entries {
        writeln!(out, "{}", serde_json::to_string(entry).expect("fixture serializes"))?;
    }
    fs::write(path, out)
}

/// Load the five-persona battery from `dir`. Base streams live under
/// `base/`; a variant directory only holds the personas it overrides.
pub fn load_battery_dir(dir: &Path, variant: Variant) -> Result<BatterySet, FixtureError> {
    let mut personas = Vec::with_capacity(5);
    for persona in PersonaId::ALL {
        let base_path = dir.join(Variant::Base.as_str()).join(persona.file_name());
        let path = if variant == Variant::Base {
            base_path
        } else {
            let override_path = dir.join(variant.as_str()).join(persona.file_name());
            if override_path.exists() {
                override_path
            } else {
                base_path
            }
        };
        if !path.exists() {
            return Err(FixtureError::MissingPersona {
                persona: persona.to_string(),
            });
        }
        let entries = read_entries_jsonl(&path)?;
        personas.push(PersonaFixture {
            persona,
            variant,
            entries,
        });
    }
    let set = BatterySet { variant, personas };
    set.validate()?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_line() -> &'static str {
        r#"{"persona":"A","day":9,"a":4.2,"m":4.4,"sentiment":76,"tone":"happy","emotions":["excited"],"text":"...","tags":[{"name":"flow-state","spectrum":"positive","severity":"normal","origin":"custom"}],"guard":{"literal":false,"concerning":false},"classification":{"pattern":"engaged-flow","confidence":0.91}}"#
    }

    #[test]
    fn parses_the_documented_line_shape() {
        let entry: FixtureEntry = serde_json::from_str(sample_line()).unwrap();
        assert_eq!(entry.entry_id(), "A-d009");
        assert!(entry.slip);
        let c = entry.classification().unwrap().unwrap();
        assert_eq!(c.pattern, Pattern::EngagedFlow);
        let config = PipelineConfig::default();
        let analysis = entry.to_analysis(&config).unwrap();
        assert_eq!(analysis.user_id, "A");
        assert_eq!(analysis.day_index, 9);
    }

    #[test]
    fn rejects_unknown_fields() {
        let line = sample_line().replacen("\"day\":9", "\"day\":9,\"weekday\":3", 1);
        assert!(serde_json::from_str::<FixtureEntry>(&line).is_err());
    }

    #[test]
    fn loader_reports_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        std::fs::write(&path, format!("{}\nnot json\n", sample_line())).unwrap();
        let err = read_entries_jsonl(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.jsonl"), "{msg}");
        assert!(msg.contains(":2"), "{msg}");
    }

    #[test]
    fn entry_round_trips_via_jsonl() {
        let entry: FixtureEntry = serde_json::from_str(sample_line()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.jsonl");
        write_entries_jsonl(&path, std::slice::from_ref(&entry)).unwrap();
        let back = read_entries_jsonl(&path).unwrap();
        assert_eq!(back, vec![entry]);
    }

    #[test]
    fn fixture_validation_checks_counts_and_order() {
        let entry: FixtureEntry = serde_json::from_str(sample_line()).unwrap();
        let fixture = PersonaFixture {
            persona: PersonaId::A,
            variant: Variant::Base,
            entries: vec![entry],
        };
        assert!(matches!(
            fixture.validate(),
            Err(FixtureError::EntryCount { .. })
        ));
    }

    #[test]
    fn invalid_tone_and_tag_surface_entry_ids() {
        let mut entry: FixtureEntry = serde_json::from_str(sample_line()).unwrap();
        entry.tone = "melancholic".into();
        let err = entry.to_analysis(&PipelineConfig::default()).unwrap_err();
        assert!(err.to_string().contains("A-d009"));
    }
}
