//! Tail-family selection by a representativeness index.
//!
//! For a candidate CDF F and the sorted points it was fitted to, compare
//! the fitted probabilities `F(X_{i,n})` with the plotting positions
//! `(2i-1)/(2n)`:
//!
//! ```text
//! R = 1 - (12 n / (4 n^2 - 1)) * sum_i (F(X_{i,n}) - (2i-1)/(2n))^2
//! ```
//!
//! `R = 1` means the fitted law reproduces the plotting positions exactly;
//! `R = 0` is the worst attainable over monotone probability vectors (the
//! normalizer is the value of the sum at the constant vectors 0 or 1).
//! Each fitted family is scored on its own exceedances — absolute for the
//! GPD, relative for the Pareto families — and the family with the highest
//! index wins; near-exact ties go to the simpler law (Pa, then PPD, then
//! GPD).

use crate::dist::{TailFamily, TailModel};
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::tailfit::{
    absolute_exceedances, fit_tail_model, relative_exceedances, select_threshold, TailFit,
};
use serde::Serialize;

/// Representativeness of a monotone vector of fitted probabilities.
pub fn bertino_from_probs(probs: &[f64]) -> Result<f64> {
    let n = probs.len();
    if n == 0 {
        return Err(Error::Domain(
            "representativeness of an empty vector is undefined".into(),
        ));
    }
    let mut prev = f64::NEG_INFINITY;
    for (i, &p) in probs.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "fitted probability {p} at position {i} lies outside [0, 1]"
            )));
        }
        if p < prev {
            return Err(Error::Domain(format!(
                "fitted probabilities must be nondecreasing; position {i} has {p} after {prev}"
            )));
        }
        prev = p;
    }
    let nf = n as f64;
    let mut ss = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        let target = (2.0 * (i + 1) as f64 - 1.0) / (2.0 * nf);
        ss += (p - target) * (p - target);
    }
    // The normalization bounds the index to [0, 1] for monotone inputs;
    // the clamp absorbs the last-bit rounding of the subtraction.
    Ok((1.0 - 12.0 * nf / (4.0 * nf * nf - 1.0) * ss).clamp(0.0, 1.0))
}

/// Representativeness of a fitted CDF on sorted evaluation points.
pub fn bertino_index<F>(sorted_points: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let probs = sorted_points
        .iter()
        .map(|&x| cdf(x))
        .collect::<Result<Vec<f64>>>()?;
    bertino_from_probs(&probs)
}

/// Diagnostics for one successfully fitted family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyScore {
    pub family: TailFamily,
    pub representativeness: f64,
    pub log_likelihood: f64,
    pub gamma: f64,
    pub model: TailModel,
}

/// Diagnostics for a family whose fit failed.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyFailure {
    pub family: TailFamily,
    pub kind: &'static str,
    pub error: String,
}

/// Outcome of scoring all candidate families on one sample.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport {
    /// Successful fits in family declaration order (GPD, Pa, PPD).
    pub scores: Vec<FamilyScore>,
    pub failures: Vec<FamilyFailure>,
    pub chosen: TailFamily,
    pub k: usize,
    pub alpha: f64,
}

/// Highest representativeness wins; scores within 1e-9 of the best are
/// treated as ties and resolved toward the simpler family: Pa, then PPD,
/// then GPD.
fn choose(scored: &[(TailFamily, f64)]) -> TailFamily {
    let best = scored
        .iter()
        .map(|(_, r)| *r)
        .fold(f64::NEG_INFINITY, f64::max);
    const PRIORITY: [TailFamily; 3] = [TailFamily::Pareto, TailFamily::Ppd, TailFamily::Gpd];
    for fam in PRIORITY {
        if scored.iter().any(|(f, r)| *f == fam && *r >= best - 1e-9) {
            return fam;
        }
    }
    scored[0].0
}

/// Everything learned from trying all families on one sample, whether or
/// not a winner exists. `chosen` is `None` only when every fit failed.
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub scores: Vec<FamilyScore>,
    pub failures: Vec<FamilyFailure>,
    pub chosen: Option<TailFamily>,
    pub fits: Vec<(TailFamily, TailFit)>,
    pub k: usize,
    pub alpha: f64,
}

impl SelectionOutcome {
    /// One line per failed family, for error messages.
    pub fn failure_detail(&self) -> String {
        self.failures
            .iter()
            .map(|f| format!("{}: {}", f.family.key(), f.error))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Freeze this outcome into a report with the given choice.
    pub fn report(&self, chosen: TailFamily) -> SelectionReport {
        SelectionReport {
            scores: self.scores.clone(),
            failures: self.failures.clone(),
            chosen,
            k: self.k,
            alpha: self.alpha,
        }
    }
}

/// Fit and score every family. Individual fit failures become
/// diagnostics; only a threshold that cannot be placed is an error.
pub fn evaluate_families(s: &Sample, alpha: f64) -> Result<SelectionOutcome> {
    let (_, k) = select_threshold(s, alpha)?;

    let mut scores = Vec::new();
    let mut failures = Vec::new();
    let mut fits = Vec::new();
    for family in TailFamily::ALL {
        let outcome = fit_tail_model(s, alpha, family).and_then(|fit| {
            let exceedances = match family {
                TailFamily::Gpd => absolute_exceedances(s, fit.u, fit.k).0,
                TailFamily::Pareto | TailFamily::Ppd => {
                    relative_exceedances(s, fit.u, fit.k).0
                }
            };
            let r = bertino_index(&exceedances, |x| fit.model.cdf(x))?;
            Ok((fit, r))
        });
        match outcome {
            Ok((fit, r)) => {
                scores.push(FamilyScore {
                    family,
                    representativeness: r,
                    log_likelihood: fit.log_likelihood,
                    gamma: fit.model.gamma(),
                    model: fit.model.clone(),
                });
                fits.push((family, fit));
            }
            Err(e) => failures.push(FamilyFailure {
                family,
                kind: e.kind(),
                error: e.to_string(),
            }),
        }
    }

    let chosen = if scores.is_empty() {
        None
    } else {
        Some(choose(
            &scores
                .iter()
                .map(|sc| (sc.family, sc.representativeness))
                .collect::<Vec<_>>(),
        ))
    };

    Ok(SelectionOutcome {
        scores,
        failures,
        chosen,
        fits,
        k,
        alpha: k as f64 / s.n() as f64,
    })
}

/// Fit every family, score each on its own exceedances, and pick one.
/// All three families failing is an error carrying per-family detail.
pub fn select_tail_model_with_fits(
    s: &Sample,
    alpha: f64,
) -> Result<(SelectionReport, Vec<(TailFamily, TailFit)>)> {
    let outcome = evaluate_families(s, alpha)?;
    match outcome.chosen {
        Some(chosen) => {
            let report = outcome.report(chosen);
            Ok((report, outcome.fits))
        }
        None => Err(Error::AllFitsFailed(outcome.failure_detail())),
    }
}

/// Like [`select_tail_model_with_fits`] but returns only the report.
pub fn select_tail_model(s: &Sample, alpha: f64) -> Result<SelectionReport> {
    select_tail_model_with_fits(s, alpha).map(|(report, _)| report)
}
