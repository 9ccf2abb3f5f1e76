//! End-to-end orchestration: options, tail-mode branching, and the
//! assembly of an [`InequalityReport`] from a sample.
//!
//! Three tail modes exist. `Family(f)` fits exactly one family; `All`
//! fits every family and reports each column; `Auto` fits every family,
//! scores each on representativeness, and keeps only the winner. In all
//! modes a failed fit degrades to per-cell errors while the empirical
//! column and the remaining families stay intact.

use crate::dist::TailFamily;
use crate::error::Error;
use crate::ingest::{self, CleaningSummary, ColumnSelector};
use crate::measures::{self, Measure, Method};
use crate::report::{Cell, InequalityReport, TailOutcome, TailSummary};
use crate::sample::Sample;
use crate::select;
use crate::spcdf::SemiParamCdf;
use crate::tailfit::{self, TailFit};
use crate::Result;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

/// Which tail families to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailChoice {
    /// Fit every family, keep the most representative one.
    Auto,
    /// Fit and report every family side by side.
    All,
    /// Fit exactly this family.
    Family(TailFamily),
}

impl FromStr for TailChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(TailChoice::Auto),
            "all" => Ok(TailChoice::All),
            "gpd" => Ok(TailChoice::Family(TailFamily::Gpd)),
            "pa" => Ok(TailChoice::Family(TailFamily::Pareto)),
            "ppd" => Ok(TailChoice::Family(TailFamily::Ppd)),
            other => Err(Error::Config(format!(
                "unknown tail choice '{other}' (expected auto, all, gpd, pa, or ppd)"
            ))),
        }
    }
}

impl std::fmt::Display for TailChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailChoice::Auto => f.write_str("auto"),
            TailChoice::All => f.write_str("all"),
            TailChoice::Family(fam) => f.write_str(fam.key()),
        }
    }
}

/// Analysis knobs, independent of where the data comes from.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Target tail fraction; the body/tail split uses `k = floor(alpha n)`.
    pub alpha: f64,
    pub tail: TailChoice,
    pub measures: Vec<Measure>,
    /// Report MAD scaled by 1.4826 (consistent with sigma under normality).
    pub scaled_mad: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            alpha: 0.1,
            tail: TailChoice::Auto,
            measures: Measure::ALL.to_vec(),
            scaled_mad: false,
        }
    }
}

impl AnalyzeOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::Config(format!(
                "tail fraction must lie in (0, 0.5), got {}",
                self.alpha
            )));
        }
        if self.measures.is_empty() {
            return Err(Error::Config("no measures requested".into()));
        }
        Ok(())
    }
}

/// A full run request: input location plus analysis options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub column: ColumnSelector,
    pub alpha: f64,
    pub tail: TailChoice,
    pub measures: Vec<Measure>,
    pub scaled_mad: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            column: ColumnSelector::default(),
            alpha: 0.1,
            tail: TailChoice::Auto,
            measures: Measure::ALL.to_vec(),
            scaled_mad: false,
        }
    }

    pub fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            alpha: self.alpha,
            tail: self.tail,
            measures: self.measures.clone(),
            scaled_mad: self.scaled_mad,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.options().validate()
    }
}

/// Read, clean, and analyze the configured input.
pub fn run_pipeline(config: &RunConfig) -> Result<InequalityReport> {
    config.validate()?;
    let (sample, cleaning) = ingest::ingest(&config.input, &config.column)?;
    analyze_sample(&sample, &config.options(), Some(cleaning))
}

/// One semi-parametric column of the measure matrix: either a spliced
/// distribution ready to integrate, or the (kind, message) of its failure.
type Column = (TailFamily, std::result::Result<SemiParamCdf, (String, String)>);

/// Analyze an in-memory sample. Errors only on invalid options; fitting
/// problems degrade into the report instead.
pub fn analyze_sample(
    s: &Sample,
    opts: &AnalyzeOptions,
    cleaning: Option<CleaningSummary>,
) -> Result<InequalityReport> {
    opts.validate()?;
    let descriptive = measures::descriptive_stats(s, opts.scaled_mad);

    let mut tails: BTreeMap<String, TailOutcome> = BTreeMap::new();
    let mut selection = None;
    let mut selection_error = None;
    let mut columns: Vec<Column> = Vec::new();

    match opts.tail {
        TailChoice::Family(family) => match tailfit::fit_tail_model(s, opts.alpha, family) {
            Ok(fit) => push_fitted(&mut tails, &mut columns, s, family, fit),
            Err(e) => push_failed(&mut tails, &mut columns, family, &e),
        },
        TailChoice::All => match select::evaluate_families(s, opts.alpha) {
            Ok(outcome) => {
                if let Some(chosen) = outcome.chosen {
                    selection = Some(outcome.report(chosen));
                }
                let mut fits = outcome.fits;
                for family in TailFamily::ALL {
                    if let Some(pos) = fits.iter().position(|(f, _)| *f == family) {
                        let (_, fit) = fits.remove(pos);
                        push_fitted(&mut tails, &mut columns, s, family, fit);
                    } else if let Some(fail) =
                        outcome.failures.iter().find(|f| f.family == family)
                    {
                        tails.insert(
                            family.key().to_string(),
                            TailOutcome::Failed {
                                error: fail.error.clone(),
                                kind: fail.kind.to_string(),
                            },
                        );
                        columns.push((family, Err((fail.kind.to_string(), fail.error.clone()))));
                    }
                }
            }
            Err(e) => {
                // The threshold itself cannot be placed: every requested
                // column fails for the same reason.
                selection_error = Some(e.to_string());
                for family in TailFamily::ALL {
                    push_failed(&mut tails, &mut columns, family, &e);
                }
            }
        },
        TailChoice::Auto => match select::evaluate_families(s, opts.alpha) {
            Ok(outcome) => match outcome.chosen {
                Some(chosen) => {
                    selection = Some(outcome.report(chosen));
                    let fit = outcome
                        .fits
                        .into_iter()
                        .find(|(f, _)| *f == chosen)
                        .map(|(_, fit)| fit)
                        .expect("chosen family always has a fit");
                    push_fitted(&mut tails, &mut columns, s, chosen, fit);
                }
                None => {
                    selection_error =
                        Some(Error::AllFitsFailed(outcome.failure_detail()).to_string());
                }
            },
            Err(e) => selection_error = Some(e.to_string()),
        },
    }

    let mut methods = vec![Method::Np.key().to_string()];
    for (family, _) in &columns {
        methods.push(Method::Sp(*family).key().to_string());
    }

    let mut matrix: BTreeMap<String, BTreeMap<String, Cell>> = BTreeMap::new();
    for &measure in &opts.measures {
        let mut row = BTreeMap::new();
        row.insert(
            Method::Np.key().to_string(),
            cell_from(measures::np_value(measure, s), &[]),
        );
        for (family, col) in &columns {
            let cell = match col {
                Ok(cdf) => {
                    let warnings = cdf
                        .tail()
                        .map(|t| t.warnings.as_slice())
                        .unwrap_or(&[]);
                    cell_from(measures::sp_value(measure, cdf), warnings)
                }
                Err((kind, msg)) => Cell::Failure {
                    error: msg.clone(),
                    kind: kind.clone(),
                },
            };
            row.insert(Method::Sp(*family).key().to_string(), cell);
        }
        matrix.insert(measure.key().to_string(), row);
    }

    Ok(InequalityReport {
        source: s.source().to_string(),
        n: s.n(),
        alpha: opts.alpha,
        descriptive,
        cleaning,
        selection,
        selection_error,
        tails,
        methods,
        measures: matrix,
    })
}

fn cell_from(result: Result<f64>, warnings: &[String]) -> Cell {
    match result {
        Ok(value) => Cell::Value {
            value,
            warnings: warnings.to_vec(),
        },
        Err(e) => Cell::Failure {
            error: e.to_string(),
            kind: e.kind().to_string(),
        },
    }
}

fn push_fitted(
    tails: &mut BTreeMap<String, TailOutcome>,
    columns: &mut Vec<Column>,
    s: &Sample,
    family: TailFamily,
    fit: TailFit,
) {
    tails.insert(
        family.key().to_string(),
        TailOutcome::Fitted(TailSummary::from(&fit)),
    );
    match SemiParamCdf::build(s, fit) {
        Ok(cdf) => columns.push((family, Ok(cdf))),
        Err(e) => {
            tails.insert(
                family.key().to_string(),
                TailOutcome::Failed {
                    error: e.to_string(),
                    kind: e.kind().to_string(),
                },
            );
            columns.push((family, Err((e.kind().to_string(), e.to_string()))));
        }
    }
}

fn push_failed(
    tails: &mut BTreeMap<String, TailOutcome>,
    columns: &mut Vec<Column>,
    family: TailFamily,
    e: &Error,
) {
    tails.insert(
        family.key().to_string(),
        TailOutcome::Failed {
            error: e.to_string(),
            kind: e.kind().to_string(),
        },
    );
    columns.push((family, Err((e.kind().to_string(), e.to_string()))));
}
