use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::AccuracyRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "structure,x_dist,noise_dist,i,estimator,n_samples,repetitions,successes,accuracy,base_seed";

const DIAGNOSTICS_HEADER: &str = "structure,x_dist,noise_dist,i,estimator,errors,first_error";

fn sorted(records: &[AccuracyRecord]) -> Vec<&AccuracyRecord> {
    let mut v: Vec<&AccuracyRecord> = records.iter().collect();
    v.sort_by_key(|r| r.sort_key());
    v
}

/// Writes the accuracy table, sorted by (structure, x_dist, noise_dist,
/// estimator, i).
pub fn write_csv<W: Write>(records: &[AccuracyRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in sorted(records) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.model.structure,
            r.model.x_dist,
            r.model.noise_dist,
            r.i,
            r.estimator,
            r.n_samples,
            r.repetitions,
            r.successes,
            r.accuracy(),
            r.base_seed
        )?;
    }
    w.flush()
}

pub fn emit_csv(records: &[AccuracyRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(records, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// One row per cell that had at least one failed repetition.
pub fn write_diagnostics<W: Write>(records: &[AccuracyRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{DIAGNOSTICS_HEADER}")?;
    for r in sorted(records).into_iter().filter(|r| r.errors > 0) {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.model.structure,
            r.model.x_dist,
            r.model.noise_dist,
            r.i,
            r.estimator,
            r.errors,
            csv_quote(r.first_error.as_deref().unwrap_or(""))
        )?;
    }
    w.flush()
}

pub fn emit_diagnostics(records: &[AccuracyRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_diagnostics(records, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
