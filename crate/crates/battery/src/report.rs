//! Metrics aggregation and deterministic report emission.
//!
//! Everything here is a pure function of the replay results: fixed
//! iteration orders, fixed float formatting, no timestamps. Two runs over
//! the same inputs produce byte-identical artifacts.

use crate::fixture::PersonaId;
use crate::run::{detection_metric, BatteryRun, PersonaRun, ProductionRun, ReplayedEntry, ELEVATED_DAYS};
use crate::svg::trajectory_svg;
use serde::Serialize;
use slipgate_core::{
    detect_keyword_candidates, AlertDisposition, CustomTagCounter, InterventionLevel, Pattern,
    PromotionRow, RuleId, Severity, Stage, TagOrigin, TagTaxonomy,
};
use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Percentage rounded to one decimal.
pub fn pct1(count: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let raw = count as f64 * 100.0 / total as f64;
    (raw * 10.0).round() / 10.0
}

/// Percentage rounded to the nearest integer (table rendering).
pub fn pct0(count: usize, total: usize) -> i64 {
    if total == 0 {
        return 0;
    }
    (count as f64 * 100.0 / total as f64).round() as i64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LevelCounts {
    pub none: usize,
    pub soft: usize,
    pub hard: usize,
}

impl LevelCounts {
    pub fn observe(&mut self, level: InterventionLevel) {
        match level {
            InterventionLevel::None => self.none += 1,
            InterventionLevel::Soft => self.soft += 1,
            InterventionLevel::Hard => self.hard += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.none + self.soft + self.hard
    }
}

/// Mean and sample standard deviation of a sentiment group.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelStats {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

fn level_stats(values: &[f64]) -> LevelStats {
    let n = values.len();
    if n == 0 {
        return LevelStats {
            n,
            mean: 0.0,
            sd: 0.0,
        };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        var.sqrt()
    };
    LevelStats { n, mean, sd }
}

fn sentiment_by_level<'a>(
    entries: impl Iterator<Item = &'a ReplayedEntry>,
) -> BTreeMap<String, LevelStats> {
    let mut groups: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    for replayed in entries {
        groups
            .entry(replayed.decision.final_level.as_str())
            .or_default()
            .push(replayed.entry.sentiment);
    }
    groups
        .into_iter()
        .map(|(level, values)| (level.to_string(), level_stats(&values)))
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ratio {
    pub count: usize,
    pub of: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CrisisLayerSplit {
    pub ideation_entries: usize,
    pub keyword_flagged: usize,
    pub tag_flagged: usize,
    pub keyword_pct: f64,
    pub tag_pct: f64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct AlertCounts {
    pub total: usize,
    pub confirmed: usize,
    pub false_positive: usize,
}

fn alert_counts<'a>(entries: impl Iterator<Item = &'a ReplayedEntry>) -> AlertCounts {
    let mut counts = AlertCounts::default();
    for replayed in entries {
        if let Some(alert) = &replayed.decision.crisis_alert {
            counts.total += 1;
            match alert.disposition {
                AlertDisposition::Confirmed => counts.confirmed += 1,
                AlertDisposition::FalsePositive => counts.false_positive += 1,
            }
        }
    }
    counts
}

#[derive(Debug, Clone, Serialize)]
pub struct PersonaSummary {
    pub persona: String,
    pub entries: usize,
    pub none: usize,
    pub soft: usize,
    pub hard: usize,
    pub none_pct: f64,
    pub soft_pct: f64,
    pub hard_pct: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elevation: Option<Ratio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow_false_positives: Option<Ratio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crisis_layers: Option<CrisisLayerSplit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatterySummary {
    pub variant: String,
    pub total_entries: usize,
    pub personas: Vec<PersonaSummary>,
    pub sentiment_by_level: BTreeMap<String, LevelStats>,
    pub alerts: AlertCounts,
    pub promotion: Vec<PromotionRow>,
}

/// Crisis-layer split for a persona: the ideation set is every entry
/// flagged by either layer (keyword scan on the text, or a crisis-severity
/// tag from the analyzer).
fn crisis_layer_split(run: &PersonaRun, taxonomy: &TagTaxonomy) -> CrisisLayerSplit {
    let mut ideation = 0;
    let mut keyword = 0;
    let mut tag = 0;
    for replayed in &run.entries {
        let keyword_hit = !detect_keyword_candidates(&replayed.entry.text, taxonomy).is_empty();
        let tag_hit = replayed
            .entry
            .tags
            .iter()
            .any(|t| t.severity == Severity::Crisis);
        if keyword_hit || tag_hit {
            ideation += 1;
            keyword += usize::from(keyword_hit);
            tag += usize::from(tag_hit);
        }
    }
    CrisisLayerSplit {
        ideation_entries: ideation,
        keyword_flagged: keyword,
        tag_flagged: tag,
        keyword_pct: pct1(keyword, ideation),
        tag_pct: pct1(tag, ideation),
    }
}

fn persona_summary(run: &PersonaRun, taxonomy: &TagTaxonomy) -> PersonaSummary {
    let mut counts = LevelCounts::default();
    for replayed in &run.entries {
        counts.observe(replayed.decision.final_level);
    }
    let total = counts.total();

    let elevation = (run.persona == PersonaId::A)
        .then(|| detection_metric(run, ELEVATED_DAYS).expect("persona A covers days 9-16"))
        .map(|(count, of)| Ratio { count, of });
    let flow_false_positives = (run.persona == PersonaId::C).then(|| Ratio {
        count: counts.soft + counts.hard,
        of: total,
    });
    let crisis_layers =
        (run.persona == PersonaId::D).then(|| crisis_layer_split(run, taxonomy));

    PersonaSummary {
        persona: run.persona.to_string(),
        entries: total,
        none: counts.none,
        soft: counts.soft,
        hard: counts.hard,
        none_pct: pct1(counts.none, total),
        soft_pct: pct1(counts.soft, total),
        hard_pct: pct1(counts.hard, total),
        elevation,
        flow_false_positives,
        crisis_layers,
    }
}

fn promotion_rows<'a>(
    entries: impl Iterator<Item = &'a ReplayedEntry>,
    threshold: f64,
) -> Vec<PromotionRow> {
    let mut counter = CustomTagCounter::default();
    for replayed in entries {
        counter.observe(replayed.decision.tags.iter());
    }
    counter.report(threshold)
}

pub fn summarize_battery(run: &BatteryRun, taxonomy: &TagTaxonomy) -> BatterySummary {
    let personas = PersonaId::REPORT_ORDER
        .iter()
        .map(|&p| persona_summary(run.get(p), taxonomy))
        .collect();
    BatterySummary {
        variant: run.variant.to_string(),
        total_entries: run.all_entries().count(),
        personas,
        sentiment_by_level: sentiment_by_level(run.all_entries()),
        alerts: alert_counts(run.all_entries()),
        promotion: promotion_rows(run.all_entries(), taxonomy.promotion_threshold),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TagCount {
    pub tag: String,
    pub count: usize,
    pub pct: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductionSummary {
    pub total_entries: usize,
    pub slip_enabled_entries: usize,
    pub enabled_levels: LevelCounts,
    pub enabled_none_pct: f64,
    pub enabled_soft_pct: f64,
    pub enabled_hard_pct: f64,
    pub sentiment_by_level: BTreeMap<String, LevelStats>,
    pub r2_triggered: usize,
    pub r2_released: usize,
    pub alerts: AlertCounts,
    pub predefined_tags: Vec<TagCount>,
    pub promotion: Vec<PromotionRow>,
}

pub fn summarize_production(run: &ProductionRun, taxonomy: &TagTaxonomy) -> ProductionSummary {
    let enabled: Vec<&ReplayedEntry> =
        run.entries.iter().filter(|r| r.entry.slip).collect();
    let mut counts = LevelCounts::default();
    for replayed in &enabled {
        counts.observe(replayed.decision.final_level);
    }
    let total_enabled = counts.total();

    let r2_entries: Vec<&&ReplayedEntry> = enabled
        .iter()
        .filter(|r| {
            r.decision
                .trace(Stage::S1)
                .is_some_and(|t| t.reason == RuleId::R2.to_string())
        })
        .collect();
    let r2_released = r2_entries
        .iter()
        .filter(|r| {
            r.decision
                .trace(Stage::S3)
                .is_some_and(|t| t.reason.starts_with("release:"))
        })
        .count();

    // Predefined tag frequency over the whole stream (tags run everywhere).
    let mut tag_counts: BTreeMap<String, usize> = BTreeMap::new();
    for replayed in &run.entries {
        for tag in &replayed.entry.tags {
            if tag.origin == TagOrigin::Predefined && tag.severity < Severity::Dangerous {
                *tag_counts.entry(tag.name.clone()).or_insert(0) += 1;
            }
        }
    }
    let total = run.entries.len();
    let mut predefined_tags: Vec<TagCount> = tag_counts
        .into_iter()
        .map(|(tag, count)| TagCount {
            pct: pct1(count, total),
            tag,
            count,
        })
        .collect();
    predefined_tags.sort_by(|x, y| y.count.cmp(&x.count).then_with(|| x.tag.cmp(&y.tag)));

    ProductionSummary {
        total_entries: total,
        slip_enabled_entries: total_enabled,
        enabled_levels: counts,
        enabled_none_pct: pct1(counts.none, total_enabled),
        enabled_soft_pct: pct1(counts.soft, total_enabled),
        enabled_hard_pct: pct1(counts.hard, total_enabled),
        sentiment_by_level: sentiment_by_level(enabled.into_iter()),
        r2_triggered: r2_entries.len(),
        r2_released,
        alerts: alert_counts(run.entries.iter()),
        predefined_tags,
        promotion: promotion_rows(run.entries.iter(), taxonomy.promotion_threshold),
    }
}

/// One row of a trajectory artifact.
#[derive(Debug, Clone)]
pub struct TrajectoryRow {
    pub day: u32,
    pub sentiment: f64,
    pub level: InterventionLevel,
    pub pattern: Option<Pattern>,
}

pub fn trajectory_rows(run: &PersonaRun) -> Vec<TrajectoryRow> {
    run.entries
        .iter()
        .map(|r| TrajectoryRow {
            day: r.entry.day,
            sentiment: r.entry.sentiment,
            level: r.decision.final_level,
            pattern: r.pattern,
        })
        .collect()
}

/// Integers print bare, anything else with one decimal.
pub fn fmt_num(value: f64) -> String {
    if value.fract() == 0.0 {
        format!("{value:.0}")
    } else {
        format!("{value:.1}")
    }
}

pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::from("day,sentiment,level,pattern\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.day,
            fmt_num(row.sentiment),
            row.level,
            row.pattern.map(|p| p.as_str()).unwrap_or(""),
        ));
    }
    out
}

pub fn promotion_csv(rows: &[PromotionRow]) -> String {
    let mut out = String::from("tag,count,fraction\n");
    for row in rows {
        out.push_str(&format!("{},{},{:.4}\n", row.tag, row.count, row.fraction));
    }
    out
}

pub fn decisions_jsonl<'a>(entries: impl Iterator<Item = &'a ReplayedEntry>) -> String {
    let mut out = String::new();
    for replayed in entries {
        out.push_str(&serde_json::to_string(&replayed.decision).expect("decision serializes"));
        out.push('\n');
    }
    out
}

pub fn alerts_jsonl<'a>(entries: impl Iterator<Item = &'a ReplayedEntry>) -> String {
    let mut out = String::new();
    for replayed in entries {
        if let Some(alert) = &replayed.decision.crisis_alert {
            out.push_str(&serde_json::to_string(alert).expect("alert serializes"));
            out.push('\n');
        }
    }
    out
}

fn write(path: &Path, contents: &str, written: &mut Vec<PathBuf>) -> io::Result<()> {
    fs::write(path, contents)?;
    written.push(path.to_path_buf());
    Ok(())
}

/// Write the full battery artifact set (summary JSON, per-persona CSV and
/// SVG trajectories, decision and alert logs, promotion CSV). Returns the
/// paths written.
pub fn write_battery_artifacts(
    run: &BatteryRun,
    taxonomy: &TagTaxonomy,
    out_dir: &Path,
) -> io::Result<(BatterySummary, Vec<PathBuf>)> {
    fs::create_dir_all(out_dir)?;
    let summary = summarize_battery(run, taxonomy);
    let mut written = Vec::new();

    let mut summary_json =
        serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_json.push('\n');
    write(&out_dir.join("summary.json"), &summary_json, &mut written)?;

    for &persona in &PersonaId::REPORT_ORDER {
        let persona_run = run.get(persona);
        let rows = trajectory_rows(persona_run);
        let stem = persona.as_str().to_ascii_lowercase();
        write(
            &out_dir.join(format!("trajectory_{stem}.csv")),
            &trajectory_csv(&rows),
            &mut written,
        )?;
        write(
            &out_dir.join(format!("trajectory_{stem}.svg")),
            &trajectory_svg(&format!("Persona {persona}"), &rows),
            &mut written,
        )?;
    }

    let ordered = || {
        PersonaId::REPORT_ORDER
            .iter()
            .flat_map(|&p| run.get(p).entries.iter())
    };
    write(&out_dir.join("decisions.jsonl"), &decisions_jsonl(ordered()), &mut written)?;
    write(&out_dir.join("alerts.jsonl"), &alerts_jsonl(ordered()), &mut written)?;
    write(
        &out_dir.join("promotion.csv"),
        &promotion_csv(&summary.promotion),
        &mut written,
    )?;
    Ok((summary, written))
}

/// Write production artifacts (summary JSON plus decision/alert logs).
pub fn write_production_artifacts(
    run: &ProductionRun,
    taxonomy: &TagTaxonomy,
    out_dir: &Path,
) -> io::Result<(ProductionSummary, Vec<PathBuf>)> {
    fs::create_dir_all(out_dir)?;
    let summary = summarize_production(run, taxonomy);
    let mut written = Vec::new();
    let mut summary_json =
        serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_json.push('\n');
    write(&out_dir.join("summary.json"), &summary_json, &mut written)?;
    write(
        &out_dir.join("decisions.jsonl"),
        &decisions_jsonl(run.entries.iter()),
        &mut written,
    )?;
    write(
        &out_dir.join("alerts.jsonl"),
        &alerts_jsonl(run.entries.iter()),
        &mut written,
    )?;
    write(
        &out_dir.join("promotion.csv"),
        &promotion_csv(&summary.promotion),
        &mut written,
    )?;
    Ok((summary, written))
}
