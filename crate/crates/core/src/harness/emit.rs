//! CSV and JSON output.
//!
//! `regret.csv` has header `round,trial_0,…,trial_{k-1},mean` and one row per
//! round. Values use Rust's shortest round-trip float formatting, so parsing
//! the file reproduces the in-memory curves exactly.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{ExperimentResult, RegretCurve};
use crate::error::{Error, Result};

pub const REGRET_FILE: &str = "regret.csv";
pub const REALIZED_FILE: &str = "realized_regret.csv";
pub const SUMMARY_FILE: &str = "summary.json";

pub fn write_curve_csv(path: &Path, curve: &RegretCurve) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "round")?;
    for k in 0..curve.trials.len() {
        write!(w, ",trial_{k}")?;
    }
    writeln!(w, ",mean")?;
    for t in 0..curve.horizon() {
        write!(w, "{}", t + 1)?;
        for c in &curve.trials {
            write!(w, ",{}", c[t])?;
        }
        writeln!(w, ",{}", curve.mean[t])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a file written by [`write_curve_csv`].
pub fn read_curve_csv(path: &Path) -> Result<RegretCurve> {
    let bad = |msg: String| Error::Config(format!("{}: {msg}", path.display()));
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
    let columns = header.split(',').count();
    if columns < 3 {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let k = columns - 2;
    let mut trials = vec![Vec::new(); k];
    let mut mean = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line?;
        let values: Vec<&str> = line.split(',').collect();
        if values.len() != columns || values[0] != (row + 1).to_string() {
            return Err(bad(format!("malformed row {}", row + 1)));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|e| bad(e.to_string()));
        for (c, v) in trials.iter_mut().zip(&values[1..=k]) {
            c.push(parse(v)?);
        }
        mean.push(parse(values[k + 1])?);
    }
    Ok(RegretCurve { trials, mean })
}

/// Writes `regret.csv`, `realized_regret.csv` and `summary.json` into `dir`.
pub fn emit(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_curve_csv(&dir.join(REGRET_FILE), &result.pseudo)?;
    write_curve_csv(&dir.join(REALIZED_FILE), &result.realized)?;
    let file = BufWriter::new(File::create(dir.join(SUMMARY_FILE))?);
    serde_json::to_writer_pretty(file, &result.summary())?;
    Ok(())
}
