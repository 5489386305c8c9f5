//! Replay of fixture streams through the pipeline.

use crate::error::BatteryError;
use crate::fixture::{BatterySet, FixtureEntry, PersonaFixture, PersonaId, Variant};
use slipgate_core::{
    process_entry, InterventionDecision, InterventionLevel, MemoryHistoryStore, Pattern,
    PipelineConfig, ScriptedClassifier,
};
use std::ops::RangeInclusive;
use std::sync::Mutex;

/// Persona A's designed elevated-energy episode.
pub const ELEVATED_DAYS: RangeInclusive<u32> = 9..=16;

/// One replayed entry: the fixture line, the decision it produced, and the
/// pattern that went into history.
#[derive(Debug, Clone)]
pub struct ReplayedEntry {
    pub entry: FixtureEntry,
    pub decision: InterventionDecision,
    pub pattern: Option<Pattern>,
}

#[derive(Debug, Clone)]
pub struct PersonaRun {
    pub persona: PersonaId,
    pub entries: Vec<ReplayedEntry>,
}

impl PersonaRun {
    pub fn level_of_day(&self, day: u32) -> Option<InterventionLevel> {
        self.entries
            .iter()
            .find(|r| r.entry.day == day)
            .map(|r| r.decision.final_level)
    }
}

/// Outcome of replaying the five-persona battery.
#[derive(Debug, Clone)]
pub struct BatteryRun {
    pub variant: Variant,
    pub personas: Vec<PersonaRun>,
}

impl BatteryRun {
    pub fn get(&self, persona: PersonaId) -> &PersonaRun {
        self.personas
            .iter()
            .find(|p| p.persona == persona)
            .expect("battery run holds all five personas")
    }

    pub fn all_entries(&self) -> impl Iterator<Item = &ReplayedEntry> {
        self.personas.iter().flat_map(|p| p.entries.iter())
    }
}

/// Replay one fixture stream against a fresh store. Entries with
/// `slip: false` run with intervention output disabled (tags and alerts
/// still computed).
fn replay_stream(
    entries: &[FixtureEntry],
    config: &PipelineConfig,
) -> Result<Vec<ReplayedEntry>, BatteryError> {
    let store = MemoryHistoryStore::new();
    let mut adapter = ScriptedClassifier::new();
    for entry in entries {
        if let Some(c) = entry.classification()? {
            adapter.insert(entry.entry_id(), c);
        }
    }
    let disabled = PipelineConfig {
        slip_enabled: false,
        ..config.clone()
    };

    let mut out = Vec::with_capacity(entries.len());
    for entry in entries {
        let analysis = entry.to_analysis(config)?;
        let effective = if entry.slip { config } else { &disabled };
        let decision = process_entry(&analysis, entry.guard_inputs(), &adapter, &store, effective)
            .map_err(|source| BatteryError::Replay {
                entry: entry.entry_id(),
                source,
            })?;
        let pattern = store
            .window(&analysis.user_id, analysis.day_index, 1)
            .map_err(slipgate_core::PipelineError::from)
            .map_err(|source| BatteryError::Replay {
                entry: entry.entry_id(),
                source,
            })?
            .first()
            .and_then(|r| r.pattern);
        out.push(ReplayedEntry {
            entry: entry.clone(),
            decision,
            pattern,
        });
    }
    Ok(out)
}

/// Replay all five personas as independent users. The variant decides
/// whether behavioral elevation tags are honored. `jobs` bounds persona
/// parallelism; results are deterministic regardless.
pub fn run_battery(
    set: &BatterySet,
    config: &PipelineConfig,
    jobs: usize,
) -> Result<BatteryRun, BatteryError> {
    set.validate()?;
    let config = set.variant.pipeline_config(config);
    let jobs = jobs.clamp(1, set.personas.len().max(1));

    let mut results: Vec<Option<Result<PersonaRun, BatteryError>>> =
        (0..set.personas.len()).map(|_| None).collect();

    if jobs == 1 {
        for (i, fixture) in set.personas.iter().enumerate() {
            results[i] = Some(replay_persona(fixture, &config));
        }
    } else {
        let work: Mutex<Vec<usize>> = Mutex::new((0..set.personas.len()).rev().collect());
        let slots: Vec<Mutex<Option<Result<PersonaRun, BatteryError>>>> =
            (0..set.personas.len()).map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let next = work.lock().unwrap().pop();
                    match next {
                        Some(i) => {
                            let run = replay_persona(&set.personas[i], &config);
                            *slots[i].lock().unwrap() = Some(run);
                        }
                        None => break,
                    }
                });
            }
        });
        for (i, slot) in slots.into_iter().enumerate() {
            results[i] = slot.into_inner().unwrap();
        }
    }

    let mut personas = Vec::with_capacity(results.len());
    for result in results {
        personas.push(result.expect("every persona replayed")?);
    }
    Ok(BatteryRun {
        variant: set.variant,
        personas,
    })
}

fn replay_persona(
    fixture: &PersonaFixture,
    config: &PipelineConfig,
) -> Result<PersonaRun, BatteryError> {
    Ok(PersonaRun {
        persona: fixture.persona,
        entries: replay_stream(&fixture.entries, config)?,
    })
}

/// Outcome of replaying the production-shaped stream.
#[derive(Debug, Clone)]
pub struct ProductionRun {
    pub entries: Vec<ReplayedEntry>,
}

/// Replay an arbitrary entry stream (users interleaved, per-user day order
/// required).
pub fn run_production(
    entries: &[FixtureEntry],
    config: &PipelineConfig,
) -> Result<ProductionRun, BatteryError> {
    Ok(ProductionRun {
        entries: replay_stream(entries, config)?,
    })
}

/// Elevation detection: the share of the named days whose final level was
/// soft or above. Every named day must be present in the run.
pub fn detection_metric(
    run: &PersonaRun,
    elevated_days: RangeInclusive<u32>,
) -> Result<(usize, usize), BatteryError> {
    let mut detected = 0;
    let mut total = 0;
    for day in elevated_days {
        total += 1;
        match run.level_of_day(day) {
            None => {
                return Err(BatteryError::MissingDay {
                    persona: run.persona.to_string(),
                    day,
                })
            }
            Some(level) if level >= InterventionLevel::Soft => detected += 1,
            Some(_) => {}
        }
    }
    Ok((detected, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::personas::builtin_battery;

    #[test]
    fn battery_runs_and_is_parallel_deterministic() {
        let set = builtin_battery(Variant::Base);
        let config = PipelineConfig::default();
        let serial = run_battery(&set, &config, 1).unwrap();
        let parallel = run_battery(&set, &config, 4).unwrap();
        for (a, b) in serial.personas.iter().zip(parallel.personas.iter()) {
            assert_eq!(a.persona, b.persona);
            let la: Vec<_> = a.entries.iter().map(|e| e.decision.final_level).collect();
            let lb: Vec<_> = b.entries.iter().map(|e| e.decision.final_level).collect();
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn detection_metric_errors_on_missing_days() {
        let set = builtin_battery(Variant::Base);
        let run = run_battery(&set, &PipelineConfig::default(), 1).unwrap();
        let persona_a = run.get(PersonaId::A);
        assert!(detection_metric(persona_a, 9..=16).is_ok());
        assert!(matches!(
            detection_metric(persona_a, 29..=31),
            Err(BatteryError::MissingDay { .. })
        ));
    }

    #[test]
    fn replay_of_same_stream_twice_fails_cleanly() {
        // One store per replay_stream call, so this exercises the duplicate
        // guard within a single stream instead.
        let mut entries = builtin_battery(Variant::Base)
            .get(PersonaId::E)
            .unwrap()
            .entries
            .clone();
        entries.push(entries.last().unwrap().clone());
        let err = replay_stream(&entries, &PipelineConfig::default()).unwrap_err();
        assert!(matches!(err, BatteryError::Replay { .. }));
    }
}
