//! Result assembly and rendering.
//!
//! One [`InequalityReport`] collects everything a run produced: the
//! descriptive block, the cleaning tally, fitted tails, selection
//! diagnostics, and the measure-by-method matrix. Failures degrade per
//! cell — a column whose tail could not be fitted reports the reason in
//! every cell instead of erasing the rest of the table.
//!
//! JSON rendering is byte-stable: keys are emitted in sorted order and
//! every float is rounded to 10 significant decimal digits before
//! serialization, so equal analyses produce identical bytes.

use crate::dist::TailModel;
use crate::error::Error;
use crate::ingest::CleaningSummary;
use crate::measures::{DescriptiveStats, Measure};
use crate::select::SelectionReport;
use crate::tailfit::TailFit;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One entry of the measure-by-method matrix.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Value {
        value: f64,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        warnings: Vec<String>,
    },
    Failure { error: String, kind: String },
}

impl Cell {
    pub fn is_failure(&self) -> bool {
        matches!(self, Cell::Failure { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value { value, .. } => Some(*value),
            Cell::Failure { .. } => None,
        }
    }
}

/// Compact record of one fitted tail.
#[derive(Debug, Clone, Serialize)]
pub struct TailSummary {
    pub model: TailModel,
    pub u: f64,
    pub k: usize,
    pub alpha: f64,
    pub log_likelihood: f64,
    pub n_fitted: usize,
    pub dropped_ties: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl From<&TailFit> for TailSummary {
    fn from(fit: &TailFit) -> Self {
        TailSummary {
            model: fit.model.clone(),
            u: fit.u,
            k: fit.k,
            alpha: fit.alpha,
            log_likelihood: fit.log_likelihood,
            n_fitted: fit.n_fitted,
            dropped_ties: fit.dropped_ties,
            warnings: fit.warnings.clone(),
        }
    }
}

/// What happened to one requested tail family.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum TailOutcome {
    Fitted(TailSummary),
    Failed { error: String, kind: String },
}

/// Complete result of one analysis run.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub source: String,
    pub n: usize,
    /// Requested tail fraction (the effective `k/n` sits on each fit).
    pub alpha: f64,
    pub descriptive: DescriptiveStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cleaning: Option<CleaningSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection_error: Option<String>,
    /// Requested tail families by key, fitted or failed.
    pub tails: BTreeMap<String, TailOutcome>,
    /// Method keys in column order (`np` first).
    pub methods: Vec<String>,
    /// measure key -> method key -> cell.
    pub measures: BTreeMap<String, BTreeMap<String, Cell>>,
}

impl InequalityReport {
    /// True when any requested quantity failed: measure cells, requested
    /// tail fits, or the selection step itself.
    pub fn has_failures(&self) -> bool {
        self.selection_error.is_some()
            || self
                .tails
                .values()
                .any(|t| matches!(t, TailOutcome::Failed { .. }))
            || self
                .measures
                .values()
                .flat_map(|row| row.values())
                .any(Cell::is_failure)
    }

    /// Stable pretty JSON: sorted keys, floats at 10 significant digits,
    /// trailing newline.
    pub fn to_json(&self) -> crate::Result<String> {
        let mut value = serde_json::to_value(self)
            .map_err(|e| Error::Config(format!("report serialization failed: {e}")))?;
        round_floats(&mut value);
        let body = serde_json::to_string_pretty(&value)
            .map_err(|e| Error::Config(format!("report serialization failed: {e}")))?;
        Ok(format!("{body}\n"))
    }

    /// Human-readable fixed-width table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "source: {}", self.source);
        let _ = writeln!(
            out,
            "observations: {}    tail fraction: {}",
            self.n, self.alpha
        );
        if let Some(c) = &self.cleaning {
            let _ = writeln!(
                out,
                "cleaning: parsed {} | kept {} | dropped non-positive {} | parse errors {}",
                c.parsed, c.kept, c.dropped_nonpositive, c.parse_errors
            );
        }

        let d = &self.descriptive;
        let _ = writeln!(out);
        let _ = writeln!(out, "descriptive");
        let _ = writeln!(out, "  median       {:>16.4}", d.median);
        let mad_label = if d.mad_scaled { "MAD (scaled)" } else { "MAD" };
        let _ = writeln!(out, "  {:<12} {:>16.4}", mad_label, d.mad);
        let _ = writeln!(out, "  max          {:>16.4}", d.max);

        if !self.tails.is_empty() {
            let _ = writeln!(out);
            match self.first_fit() {
                Some(t) => {
                    let _ = writeln!(
                        out,
                        "tail fits (u = {:.6}, k = {}, alpha = {:.6})",
                        t.u, t.k, t.alpha
                    );
                }
                None => {
                    let _ = writeln!(out, "tail fits");
                }
            }
            for (key, outcome) in &self.tails {
                match outcome {
                    TailOutcome::Fitted(t) => {
                        let chosen = self
                            .selection
                            .as_ref()
                            .map(|sel| sel.chosen.key() == key)
                            .unwrap_or(false);
                        let score = self.selection.as_ref().and_then(|sel| {
                            sel.scores
                                .iter()
                                .find(|sc| sc.family.key() == key)
                                .map(|sc| sc.representativeness)
                        });
                        let mut line = format!(
                            "  {:<4} {}  loglik {:.3}",
                            key,
                            params_string(&t.model),
                            t.log_likelihood
                        );
                        if let Some(r) = score {
                            let _ = write!(line, "  R {r:.5}");
                        }
                        if t.dropped_ties > 0 {
                            let _ = write!(line, "  ties dropped {}", t.dropped_ties);
                        }
                        if chosen {
                            line.push_str("  [selected]");
                        }
                        let _ = writeln!(out, "{line}");
                    }
                    TailOutcome::Failed { error, kind } => {
                        let _ = writeln!(out, "  {key:<4} failed ({kind}): {error}");
                    }
                }
            }
        }
        if let Some(err) = &self.selection_error {
            let _ = writeln!(out);
            let _ = writeln!(out, "tail selection failed: {err}");
        }

        let _ = writeln!(out);
        let _ = write!(out, "{:<10}", "measure");
        for m in &self.methods {
            let _ = write!(out, "{m:>16}");
        }
        let _ = writeln!(out);

        let mut notes: Vec<String> = Vec::new();
        for measure in Measure::ALL {
            let Some(row) = self.measures.get(measure.key()) else {
                continue;
            };
            let _ = write!(out, "{:<10}", measure.label());
            for method in &self.methods {
                match row.get(method) {
                    Some(Cell::Value { value, warnings }) => {
                        let marker = if warnings.is_empty() { "" } else { "*" };
                        let _ = write!(out, "{:>16}", format!("{value:.6}{marker}"));
                        for w in warnings {
                            let note = format!("warning ({method}): {w}");
                            if !notes.contains(&note) {
                                notes.push(note);
                            }
                        }
                    }
                    Some(Cell::Failure { error, kind }) => {
                        let _ = write!(out, "{:>16}", format!("[{kind}]"));
                        let note = format!("{} / {method} failed: {error}", measure.key());
                        if !notes.contains(&note) {
                            notes.push(note);
                        }
                    }
                    None => {
                        let _ = write!(out, "{:>16}", "-");
                    }
                }
            }
            let _ = writeln!(out);
        }

        if !notes.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "notes");
            for n in notes {
                let _ = writeln!(out, "  - {n}");
            }
        }
        out
    }

    fn first_fit(&self) -> Option<&TailSummary> {
        self.tails.values().find_map(|t| match t {
            TailOutcome::Fitted(s) => Some(s),
            TailOutcome::Failed { .. } => None,
        })
    }
}

fn params_string(m: &TailModel) -> String {
    match m {
        TailModel::Gpd(p) => format!("sigma {:.4}  gamma {:.4}", p.sigma(), p.gamma()),
        TailModel::Pareto(p) => format!("gamma {:.4}", p.gamma()),
        TailModel::Ppd(p) => {
            format!("gamma {:.4}  c {:.4}  tau {:.4}", p.gamma(), p.c(), p.tau())
        }
    }
}

/// Round every float in the tree to 10 significant decimal digits.
/// Integer-typed numbers (counts, sizes) pass through untouched.
fn round_floats(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(f) = n.as_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig10(f)) {
                        *n = rounded;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Decimal round-trip through `{:.9e}`: one leading digit plus nine
/// fractional digits of the scientific mantissa.
fn round_sig10(f: f64) -> f64 {
    if f == 0.0 || !f.is_finite() {
        return f;
    }
    format!("{f:.9e}").parse().unwrap_or(f)
}
