//! Static trajectory chart: sentiment line over day-colored level bands.

use crate::report::TrajectoryRow;
use slipgate_core::InterventionLevel;
use std::fmt::Write;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 320.0;
const MARGIN_LEFT: f64 = 52.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 42.0;

fn band_fill(level: InterventionLevel) -> &'static str {
    match level {
        InterventionLevel::None => "#e8f5e9",
        InterventionLevel::Soft => "#ffe0b2",
        InterventionLevel::Hard => "#ffcdd2",
    }
}

/// Render a byte-stable SVG line chart. Background bands show the final
/// intervention level per day; the line tracks sentiment (0-100).
pub fn trajectory_svg(title: &str, rows: &[TrajectoryRow]) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let day_min = rows.first().map(|r| r.day).unwrap_or(1) as f64;
    let day_max = rows.last().map(|r| r.day).unwrap_or(1) as f64;
    let span = (day_max - day_min + 1.0).max(1.0);
    let x_of = |day: f64| MARGIN_LEFT + (day - day_min + 0.5) / span * plot_w;
    let y_of = |sentiment: f64| MARGIN_TOP + (100.0 - sentiment) / 100.0 * plot_h;
    let band_w = plot_w / span;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"##
    );
    let _ = writeln!(svg, r##"<rect width="{WIDTH:.0}" height="{HEIGHT:.0}" fill="#ffffff"/>"##);
    let _ = writeln!(
        svg,
        r##"<text x="{MARGIN_LEFT:.1}" y="24" font-family="monospace" font-size="14" fill="#222222">{title} — sentiment / intervention level</text>"##
    );

    // Level bands, one per recorded day.
    for row in rows {
        let x = x_of(row.day as f64) - band_w / 2.0;
        let _ = writeln!(
            svg,
            r##"<rect x="{x:.1}" y="{MARGIN_TOP:.1}" width="{band_w:.1}" height="{plot_h:.1}" fill="{}"/>"##,
            band_fill(row.level)
        );
    }

    // Horizontal grid plus y labels.
    for tick in [0.0, 25.0, 50.0, 75.0, 100.0] {
        let y = y_of(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#cccccc" stroke-width="0.5"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="10" fill="#555555" text-anchor="end">{tick:.0}</text>"##,
            MARGIN_LEFT - 6.0,
            y + 3.5
        );
    }

    // X tick labels: every day for short streams, every fifth otherwise.
    let step = if span <= 31.0 { 1 } else { 5 };
    for row in rows {
        if row.day % step != 0 && row.day != rows[0].day {
            continue;
        }
        let x = x_of(row.day as f64);
        let _ = writeln!(
            svg,
            r##"<text x="{x:.1}" y="{:.1}" font-family="monospace" font-size="9" fill="#555555" text-anchor="middle">{}</text>"##,
            MARGIN_TOP + plot_h + 14.0,
            row.day
        );
    }

    // Sentiment polyline and points.
    if !rows.is_empty() {
        let points: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.1},{:.1}", x_of(r.day as f64), y_of(r.sentiment)))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#1565c0" stroke-width="2"/>"##,
            points.join(" ")
        );
        for row in rows {
            let _ = writeln!(
                svg,
                r##"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="#1565c0"/>"##,
                x_of(row.day as f64),
                y_of(row.sentiment)
            );
        }
    }

    // Axis frame and legend.
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT:.1}" y="{MARGIN_TOP:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#333333" stroke-width="1"/>"##
    );
    let legend = [
        (InterventionLevel::None, "none"),
        (InterventionLevel::Soft, "soft"),
        (InterventionLevel::Hard, "hard"),
    ];
    for (i, (level, label)) in legend.iter().enumerate() {
        let x = MARGIN_LEFT + plot_w - 180.0 + i as f64 * 60.0;
        let _ = writeln!(
            svg,
            r##"<rect x="{x:.1}" y="14" width="10" height="10" fill="{}" stroke="#999999" stroke-width="0.5"/>"##,
            band_fill(*level)
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="23" font-family="monospace" font-size="10" fill="#555555">{label}</text>"##,
            x + 14.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
