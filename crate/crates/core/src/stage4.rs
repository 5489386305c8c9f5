//! Stage 4: per-user decision history and 7-day sliding-window escalation.

use crate::anonymize::anonymized_id;
use crate::error::StoreError;
use crate::level::InterventionLevel;
use crate::stage3::Pattern;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

pub const WINDOW_SPAN: u32 = 7;

/// One persisted decision, the unit of the sliding window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryRecord {
    pub user_id: String,
    pub day_index: u32,
    pub final_level: InterventionLevel,
    pub pattern: Option<Pattern>,
}

/// Append-only per-user history. `append` must reject duplicate or
/// out-of-order days so that replaying a stream twice leaves the stored
/// history unchanged. `window` returns records with day_index in
/// [day_index - span + 1, day_index], ascending; the current day's record
/// is never visible before it is appended.
pub trait HistoryStore: Send + Sync {
    fn append(&self, record: HistoryRecord) -> Result<(), StoreError>;
    fn window(&self, user_id: &str, day_index: u32, span: u32) -> Result<Vec<HistoryRecord>, StoreError>;
    fn latest_day(&self, user_id: &str) -> Result<Option<u32>, StoreError>;
}

fn window_of(records: &[HistoryRecord], day_index: u32, span: u32) -> Vec<HistoryRecord> {
    let lo = day_index.saturating_sub(span.saturating_sub(1));
    records
        .iter()
        .filter(|r| r.day_index >= lo && r.day_index <= day_index)
        .cloned()
        .collect()
}

fn check_order(user: &str, last: Option<u32>, day: u32) -> Result<(), StoreError> {
    match last {
        Some(l) if day == l => Err(StoreError::Duplicate {
            user: user.to_string(),
            day,
        }),
        Some(l) if day < l => Err(StoreError::OutOfOrder {
            user: user.to_string(),
            day,
            last: l,
        }),
        _ => Ok(()),
    }
}

/// In-memory store for battery runs and tests.
#[derive(Debug, Default)]
pub struct MemoryHistoryStore {
    records: Mutex<HashMap<String, Vec<HistoryRecord>>>,
}

impl MemoryHistoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl HistoryStore for MemoryHistoryStore {
    fn append(&self, record: HistoryRecord) -> Result<(), StoreError> {
        let mut map = self.records.lock().unwrap();
        let stream = map.entry(record.user_id.clone()).or_default();
        check_order(&record.user_id, stream.last().map(|r| r.day_index), record.day_index)?;
        stream.push(record);
        Ok(())
    }

    fn window(&self, user_id: &str, day_index: u32, span: u32) -> Result<Vec<HistoryRecord>, StoreError> {
        let map = self.records.lock().unwrap();
        Ok(map
            .get(user_id)
            .map(|records| window_of(records, day_index, span))
            .unwrap_or_default())
    }

    fn latest_day(&self, user_id: &str) -> Result<Option<u32>, StoreError> {
        let map = self.records.lock().unwrap();
        Ok(map.get(user_id).and_then(|r| r.last().map(|x| x.day_index)))
    }
}

/// Wire form of one history line:
/// `{"user":"<hash>","day":3,"level":"soft","pattern":null}`.
#[derive(Serialize, Deserialize)]
struct HistoryLine {
    user: String,
    day: u32,
    level: InterventionLevel,
    pattern: Option<Pattern>,
}

/// Append-only JSONL store, one file per user named by the anonymized id.
/// Existing files are loaded lazily on first touch; appends are
/// write-through.
pub struct JsonlHistoryStore {
    dir: PathBuf,
    cache: Mutex<HashMap<String, Vec<HistoryRecord>>>,
}

impl JsonlHistoryStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(JsonlHistoryStore {
            dir,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn user_path(&self, user_id: &str) -> PathBuf {
        self.dir.join(format!("{}.jsonl", anonymized_id(user_id)))
    }

    fn load_user(path: &Path, user_id: &str) -> Result<Vec<HistoryRecord>, StoreError> {
        if !path.exists() {
            return Ok(Vec::new());
        }
        let mut records = Vec::new();
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: HistoryLine = serde_json::from_str(&line)?;
            records.push(HistoryRecord {
                user_id: user_id.to_string(),
                day_index: parsed.day,
                final_level: parsed.level,
                pattern: parsed.pattern,
            });
        }
        Ok(records)
    }

    fn with_user<T>(
        &self,
        user_id: &str,
        f: impl FnOnce(&mut Vec<HistoryRecord>) -> Result<T, StoreError>,
    ) -> Result<T, StoreError> {
        let mut cache = self.cache.lock().unwrap();
        if !cache.contains_key(user_id) {
            let loaded = Self::load_user(&self.user_path(user_id), user_id)?;
            cache.insert(user_id.to_string(), loaded);
        }
        f(cache.get_mut(user_id).expect("just inserted"))
    }
}

impl HistoryStore for JsonlHistoryStore {
    fn append(&self, record: HistoryRecord) -> Result<(), StoreError> {
        let path = self.user_path(&record.user_id);
        self.with_user(&record.user_id.clone(), |records| {
            check_order(&record.user_id, records.last().map(|r| r.day_index), record.day_index)?;
            let line = HistoryLine {
                user: anonymized_id(&record.user_id),
                day: record.day_index,
                level: record.final_level,
                pattern: record.pattern,
            };
            let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
            writeln!(file, "{}", serde_json::to_string(&line)?)?;
            records.push(record);
            Ok(())
        })
    }

    fn window(&self, user_id: &str, day_index: u32, span: u32) -> Result<Vec<HistoryRecord>, StoreError> {
        self.with_user(user_id, |records| Ok(window_of(records, day_index, span)))
    }

    fn latest_day(&self, user_id: &str) -> Result<Option<u32>, StoreError> {
        self.with_user(user_id, |records| Ok(records.last().map(|r| r.day_index)))
    }
}

/// Why Stage 4 changed (or kept) the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscalationReason {
    ThreeConsecutive,
    FiveOfSeven,
    Oscillation,
    Vigilance,
    NoChange,
}

impl EscalationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            EscalationReason::ThreeConsecutive => "3-consecutive",
            EscalationReason::FiveOfSeven => "5-of-7",
            EscalationReason::Oscillation => "oscillation",
            EscalationReason::Vigilance => "vigilance",
            EscalationReason::NoChange => "no_change",
        }
    }

    /// Trace form: window-derived reasons carry a `window:` prefix.
    pub fn trace_reason(self) -> String {
        match self {
            EscalationReason::ThreeConsecutive
            | EscalationReason::FiveOfSeven
            | EscalationReason::Oscillation => format!("window:{}", self.as_str()),
            EscalationReason::Vigilance | EscalationReason::NoChange => self.as_str().to_string(),
        }
    }
}

/// Length of the run of consecutive day indexes with level >= soft that
/// ends at the current provisional day. A gap in day indexes breaks the
/// run.
fn run_ending_at_current(
    window: &[HistoryRecord],
    current_day: u32,
    current_level: InterventionLevel,
) -> u32 {
    if current_level < InterventionLevel::Soft {
        return 0;
    }
    let mut run = 1;
    let mut day = current_day;
    while day > 1 {
        day -= 1;
        let prev = window.iter().find(|r| r.day_index == day);
        match prev {
            Some(r) if r.final_level >= InterventionLevel::Soft => run += 1,
            _ => break,
        }
    }
    run
}

/// Count of alternations between elevated-energy and low-engagement in the
/// day-ordered pattern sequence (window plus current). Other patterns are
/// transparent: they neither extend nor break an alternation chain.
fn oscillation_count(window: &[HistoryRecord], pattern_in: Option<Pattern>) -> u32 {
    let mut ordered: Vec<&HistoryRecord> = window.iter().collect();
    ordered.sort_by_key(|r| r.day_index);
    let mut flips = 0;
    let mut last: Option<Pattern> = None;
    let patterns = ordered
        .iter()
        .filter_map(|r| r.pattern)
        .chain(pattern_in);
    for p in patterns {
        if !matches!(p, Pattern::ElevatedEnergy | Pattern::LowEngagement) {
            continue;
        }
        if let Some(prev) = last {
            if prev != p {
                flips += 1;
            }
        }
        last = Some(p);
    }
    flips
}

/// Stage 4 escalation over the prior 7-day window plus the current
/// provisional record. Strictly upward-only.
///
/// Escalation rules (all yield hard, so order only picks the recorded
/// reason; the density rule is checked first so the broader pattern wins
/// the label):
/// - >= 5 of the last 7 days at soft-or-above, today included -> hard
/// - a run of >= 3 consecutive days at soft-or-above ending today -> hard
/// - >= 2 elevated-energy/low-engagement alternations in the window -> hard
/// Then vigilance: a hard in the window while today is none -> soft.
///
/// The streak rules require today's provisional level to be soft-or-above:
/// escalation rides an active streak, while a quiet day after a hard is
/// vigilance's job. Without that gate a single 3-day streak would latch
/// hard indefinitely through its own stored escalations.
pub fn escalate(
    level_in: InterventionLevel,
    pattern_in: Option<Pattern>,
    window: &[HistoryRecord],
    current_day: u32,
) -> (InterventionLevel, EscalationReason) {
    debug_assert!(window
        .iter()
        .all(|r| r.day_index < current_day
            && r.day_index + WINDOW_SPAN > current_day));

    if level_in >= InterventionLevel::Soft {
        let prior = window
            .iter()
            .filter(|r| r.final_level >= InterventionLevel::Soft)
            .count();
        if prior + 1 >= 5 {
            return (InterventionLevel::Hard, EscalationReason::FiveOfSeven);
        }
    }

    if run_ending_at_current(window, current_day, level_in) >= 3 {
        return (InterventionLevel::Hard, EscalationReason::ThreeConsecutive);
    }

    if oscillation_count(window, pattern_in) >= 2 {
        return (InterventionLevel::Hard, EscalationReason::Oscillation);
    }

    let recent_hard = window.iter().any(|r| r.final_level == InterventionLevel::Hard);
    if recent_hard && level_in == InterventionLevel::None {
        return (InterventionLevel::Soft, EscalationReason::Vigilance);
    }

    (level_in, EscalationReason::NoChange)
}
