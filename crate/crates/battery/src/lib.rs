//! Persona battery: calibrated fixture streams, the replay harness, and
//! deterministic evaluation reports (distribution tables, detection and
//! false-positive metrics, crisis-layer split, trajectory CSV/SVG).

pub mod error;
pub mod fixture;
pub mod personas;
pub mod report;
pub mod run;
pub mod svg;

pub use error::{BatteryError, FixtureError};
pub use fixture::{
    load_battery_dir, read_entries_jsonl, write_entries_jsonl, BatterySet, ClassificationSpec,
    FixtureEntry, GuardSpec, PersonaFixture, PersonaId, Variant,
};
pub use personas::{
    builtin_battery, case_entries, production_entries, write_builtin_fixtures,
};
pub use report::{
    alerts_jsonl, decisions_jsonl, fmt_num, pct0, pct1, promotion_csv, summarize_battery,
    summarize_production, trajectory_csv, trajectory_rows, write_battery_artifacts,
    write_production_artifacts, AlertCounts, BatterySummary, CrisisLayerSplit, LevelCounts,
    LevelStats, PersonaSummary, ProductionSummary, Ratio, TagCount, TrajectoryRow,
};
pub use run::{
    detection_metric, run_battery, run_production, BatteryRun, PersonaRun, ProductionRun,
    ReplayedEntry, ELEVATED_DAYS,
};
pub use svg::trajectory_svg;
