//! Accuracy-versus-i-factor charts as standalone SVG, one file per model.
//!
//! Dependence-measure series are solid, entropy series dashed. Every series
//! is a `<polyline class="series ...">` carrying `data-estimator`, so the
//! output can be checked structurally.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{AccuracyRecord, ModelKey};
use crate::error::{Error, Result};
use crate::resit::EstimatorKind;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939",
];

pub fn plot_file_name(model: ModelKey) -> String {
    format!("{}_{}_{}.svg", model.structure, model.x_dist, model.noise_dist)
}

fn color(kind: EstimatorKind) -> &'static str {
    let idx = EstimatorKind::ALL.iter().position(|k| *k == kind).unwrap_or(0);
    PALETTE[idx]
}

/// Renders the chart for one model from its records (others are ignored).
pub fn render_svg(model: ModelKey, records: &[AccuracyRecord]) -> String {
    let mut series: BTreeMap<EstimatorKind, Vec<(f64, f64)>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.model == model) {
        series.entry(r.estimator).or_default().push((r.i.value(), r.accuracy()));
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let (mut lo, mut hi) = series
        .values()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.0), h.max(p.0)));
    if !lo.is_finite() {
        lo = 0.01;
        hi = 100.0;
    }
    let (llo, mut lhi) = (lo.log10().floor(), hi.log10().ceil());
    if lhi <= llo {
        lhi = llo + 1.0;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v.log10() - llo) / (lhi - llo) * pw;
    let sy = |a: f64| TOP + (1.0 - a) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text class="title" x="{}" y="22" text-anchor="middle" font-size="14">{} ({})</text>"#,
        LEFT + pw / 2.0,
        model.label(),
        model.structure
    );

    // Axes and ticks.
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let mut e = llo;
    while e <= lhi + 1e-9 {
        let x = sx(10f64.powf(e));
        let _ = writeln!(
            s,
            r##"<line class="xtick" x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            TOP + ph,
            TOP + ph + 16.0,
            10f64.powf(e)
        );
        e += 1.0;
    }
    for k in 0..=5 {
        let a = k as f64 / 5.0;
        let y = sy(a);
        let _ = writeln!(
            s,
            r#"<text class="ytick" x="{:.1}" y="{:.1}" text-anchor="end">{a:.1}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for (a, cls) in [(0.5, "ref-chance"), (0.9, "ref-target")] {
        let y = sy(a);
        let _ = writeln!(
            s,
            r##"<line class="reference {cls}" x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#888" stroke-dasharray="2,3"/>"##,
            LEFT + pw
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">i-factor (log scale)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">accuracy</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (kind, pts) in &series {
        let (cls, dash) = if kind.is_entropy() {
            ("entropy", r#" stroke-dasharray="6,4""#)
        } else {
            ("dependence", "")
        };
        let points: Vec<String> = pts.iter().map(|&(v, a)| format!("{:.1},{:.1}", sx(v), sy(a))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series {cls}" data-estimator="{kind}" fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            color(*kind),
            points.join(" ")
        );
    }

    let lx = WIDTH - RIGHT + 14.0;
    for (row, kind) in series.keys().enumerate() {
        let y = TOP + 8.0 + row as f64 * 16.0;
        let dash = if kind.is_entropy() { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<g class="legend-entry"><line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{kind}</text></g>"#,
            lx + 24.0,
            color(*kind),
            lx + 30.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes one SVG per model present in `records` into `dir` (created if
/// missing) and returns the paths in model order.
pub fn emit_plots(records: &[AccuracyRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut models: Vec<ModelKey> = records.iter().map(|r| r.model).collect();
    models.sort();
    models.dedup();
    let mut paths = Vec::with_capacity(models.len());
    for m in models {
        let path = dir.join(plot_file_name(m));
        std::fs::write(&path, render_svg(m, records)).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
