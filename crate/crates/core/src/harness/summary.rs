//! Per-cell "accuracy reaches 90%" ranges over the i-grid, and their
//! tabulation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{AccuracyRecord, ModelKey};
use crate::resit::EstimatorKind;
use crate::synth::{Distribution, IFactor, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeBound {
    /// The condition still held at the edge of the evaluated grid.
    Open,
    At(IFactor),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeSummary {
    pub model: ModelKey,
    pub estimator: EstimatorKind,
    /// `None` when the threshold is never reached.
    pub span: Option<(RangeBound, RangeBound)>,
    /// Fraction of grid points strictly inside the span that fall below the
    /// threshold.
    pub interior_below: f64,
    /// False when `interior_below` exceeds the slack.
    pub valid: bool,
}

impl RangeSummary {
    pub fn lower(&self) -> Option<RangeBound> {
        self.span.map(|s| s.0)
    }

    pub fn upper(&self) -> Option<RangeBound> {
        self.span.map(|s| s.1)
    }

    /// Table cell text: `0.6 – 4`, `– 4`, `0.6 –`, `–`, a single value when
    /// both bounds coincide, or empty. Invalid spans get a trailing `*`.
    pub fn cell(&self) -> String {
        let Some((lo, hi)) = self.span else {
            return String::new();
        };
        let mut s = match (lo, hi) {
            (RangeBound::Open, RangeBound::Open) => "–".to_string(),
            (RangeBound::Open, RangeBound::At(h)) => format!("– {h}"),
            (RangeBound::At(l), RangeBound::Open) => format!("{l} –"),
            (RangeBound::At(l), RangeBound::At(h)) if l == h => l.to_string(),
            (RangeBound::At(l), RangeBound::At(h)) => format!("{l} – {h}"),
        };
        if !self.valid {
            s.push('*');
        }
        s
    }
}

/// Groups records per (model, estimator), orders each group by i-factor, and
/// finds the first and last grid points with accuracy at or above `threshold`.
pub fn summarize_ranges(records: &[AccuracyRecord], threshold: f64, slack: f64) -> Vec<RangeSummary> {
    let mut groups: BTreeMap<(ModelKey, EstimatorKind), Vec<(IFactor, f64)>> = BTreeMap::new();
    for r in records {
        groups.entry((r.model, r.estimator)).or_default().push((r.i, r.accuracy()));
    }
    groups
        .into_iter()
        .map(|((model, estimator), mut pts)| {
            pts.sort_by_key(|p| p.0);
            let above = |p: &(IFactor, f64)| p.1 >= threshold;
            let first = pts.iter().position(above);
            let last = pts.iter().rposition(above);
            let (span, interior_below) = match (first, last) {
                (Some(f), Some(l)) => {
                    let lo = if f == 0 { RangeBound::Open } else { RangeBound::At(pts[f].0) };
                    let hi = if l == pts.len() - 1 { RangeBound::Open } else { RangeBound::At(pts[l].0) };
                    let interior = &pts[f + 1..l.max(f + 1)];
                    let below = interior.iter().filter(|p| !above(p)).count();
                    let frac = if interior.is_empty() { 0.0 } else { below as f64 / interior.len() as f64 };
                    (Some((lo, hi)), frac)
                }
                _ => (None, 0.0),
            };
            RangeSummary {
                model,
                estimator,
                span,
                interior_below,
                valid: interior_below <= slack,
            }
        })
        .collect()
}

/// Markdown tables (one per structure present), rows = estimators, columns =
/// cause+noise combinations.
pub fn render_tables(summaries: &[RangeSummary]) -> String {
    let mut out = String::new();
    for structure in Structure::ALL {
        let rows: Vec<&RangeSummary> = summaries.iter().filter(|s| s.model.structure == structure).collect();
        if rows.is_empty() {
            continue;
        }
        let columns: Vec<ModelKey> = Distribution::ALL
            .into_iter()
            .flat_map(|x| Distribution::ALL.into_iter().map(move |n| ModelKey::new(structure, x, n)))
            .filter(|m| rows.iter().any(|r| r.model == *m))
            .collect();
        let estimators: Vec<EstimatorKind> = EstimatorKind::ALL
            .into_iter()
            .filter(|e| rows.iter().any(|r| r.estimator == *e))
            .collect();
        let _ = writeln!(out, "## {structure} models: i-factor ranges with accuracy >= 90%\n");
        out.push_str("| Estimator |");
        for c in &columns {
            let _ = write!(out, " {} |", c.label());
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(columns.len()));
        out.push('\n');
        for e in estimators {
            let _ = write!(out, "| {e} |");
            for c in &columns {
                let cell = rows
                    .iter()
                    .find(|r| r.model == *c && r.estimator == e)
                    .map(|r| r.cell())
                    .unwrap_or_default();
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
