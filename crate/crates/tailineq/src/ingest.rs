//! Reading and cleaning input data.
//!
//! Two formats are accepted and sniffed from the first non-empty line:
//!
//! - **newline-delimited numbers**: one value per line, blank lines
//!   ignored;
//! - **CSV with a header row**: the column is picked by name or 0-based
//!   index. Structural problems (unbalanced quoting, ragged rows) abort;
//!   individual cells that fail to parse are tolerated and counted.
//!
//! Parsed values must be finite and strictly positive to enter the
//! sample; everything else is dropped and tallied, so
//! `parsed == kept + dropped_nonpositive + parse_errors` always holds.

use crate::error::{Error, Result};
use crate::sample::Sample;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Which CSV column holds the values: a 0-based position or a header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(0)
    }
}

impl std::str::FromStr for ColumnSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Config("column selector must not be empty".into()));
        }
        if s.bytes().all(|b| b.is_ascii_digit()) {
            let idx = s
                .parse::<usize>()
                .map_err(|e| Error::Config(format!("column index {s:?}: {e}")))?;
            Ok(ColumnSelector::Index(idx))
        } else {
            Ok(ColumnSelector::Name(s.to_string()))
        }
    }
}

impl std::fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

/// Bookkeeping from one ingestion run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CleaningSummary {
    /// Data rows encountered (header and blank lines excluded).
    pub parsed: usize,
    /// Values that entered the sample.
    pub kept: usize,
    /// Values that parsed but were zero, negative, or non-finite.
    pub dropped_nonpositive: usize,
    /// Cells that failed to parse as numbers (or were empty/missing).
    pub parse_errors: usize,
    /// 1-based line numbers of the first few parse errors.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parse_error_lines: Vec<usize>,
}

const MAX_REPORTED_LINES: usize = 8;
const MIN_OBSERVATIONS: usize = 20;

impl CleaningSummary {
    fn keep(&mut self, values: &mut Vec<f64>, v: f64) {
        if v.is_finite() && v > 0.0 {
            values.push(v);
            self.kept += 1;
        } else {
            self.dropped_nonpositive += 1;
        }
    }

    fn parse_error(&mut self, line: usize) {
        self.parse_errors += 1;
        if self.parse_error_lines.len() < MAX_REPORTED_LINES {
            self.parse_error_lines.push(line);
        }
    }
}

/// Read, sniff, parse, and clean `path`, returning the sorted sample and
/// the cleaning tally. Fails if fewer than 20 usable values remain.
pub fn ingest(path: &Path, column: &ColumnSelector) -> Result<(Sample, CleaningSummary)> {
    let contents = std::fs::read_to_string(path)
        .map_err(|e| Error::Ingest(format!("cannot read {}: {e}", path.display())))?;

    let first = contents
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Ingest(format!("{} contains no data", path.display())))?;
    let is_csv = first.contains(',') || first.parse::<f64>().is_err();

    let mut summary = CleaningSummary::default();
    let mut values = Vec::new();

    if is_csv {
        ingest_csv(&contents, column, &mut summary, &mut values)?;
    } else {
        for (i, line) in contents.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            summary.parsed += 1;
            match line.parse::<f64>() {
                Ok(v) => summary.keep(&mut values, v),
                Err(_) => summary.parse_error(i + 1),
            }
        }
    }

    if summary.kept < MIN_OBSERVATIONS {
        return Err(Error::Ingest(format!(
            "only {} usable observations in {} after cleaning ({} non-positive, {} parse errors); need at least {MIN_OBSERVATIONS}",
            summary.kept,
            path.display(),
            summary.dropped_nonpositive,
            summary.parse_errors,
        )));
    }

    let sample = Sample::new(values, path.display().to_string())?;
    Ok((sample, summary))
}

fn ingest_csv(
    contents: &str,
    column: &ColumnSelector,
    summary: &mut CleaningSummary,
    values: &mut Vec<f64>,
) -> Result<()> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(contents.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::Ingest(format!("cannot read CSV header: {e}")))?
        .clone();

    let idx = match column {
        ColumnSelector::Index(i) => {
            if *i >= headers.len() {
                return Err(Error::Ingest(format!(
                    "column index {i} out of range: header has {} columns",
                    headers.len()
                )));
            }
            *i
        }
        ColumnSelector::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| {
                Error::Ingest(format!(
                    "column {name:?} not found; header has: {}",
                    headers.iter().collect::<Vec<_>>().join(", ")
                ))
            })?,
    };

    for record in reader.records() {
        // Structural CSV problems (ragged rows, broken quoting) are not
        // recoverable cell by cell: abort with the reader's diagnostics.
        let record = record.map_err(|e| Error::Ingest(format!("malformed CSV: {e}")))?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(summary.parsed + 2);
        summary.parsed += 1;
        match record.get(idx) {
            Some(cell) if !cell.is_empty() => match cell.parse::<f64>() {
                Ok(v) => summary.keep(values, v),
                Err(_) => summary.parse_error(line),
            },
            _ => summary.parse_error(line),
        }
    }
    Ok(())
}
