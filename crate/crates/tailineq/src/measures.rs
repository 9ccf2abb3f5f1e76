//! Inequality measures, each in a non-parametric (NP) and a
//! semi-parametric (SP) variant.
//!
//! - **Gini**: `(1/mu) * int F(x)(1-F(x)) dx`. The empirical part is the
//!   exact rectangle sum `sum_i (i/n)(1-i/n)(X_{i+1}-X_i)`; the parametric
//!   tail contributes a closed form for the GPD and an adaptive quadrature
//!   of `alpha*S - (alpha*S)^2` for the Pareto families.
//! - **GE(0)** (mean logarithmic deviation): `log(mu) - E[log X]`.
//! - **A(1)** (Atkinson, aversion 1): `1 - exp(E[log X]) / mu`.
//! - **QSR** (quintile share ratio): total income of the richest fifth
//!   over that of the poorest fifth, with the fifth taken as the
//!   `ceil(n/5)` outermost sample ranks.
//!
//! Every SP variant reduces *exactly* (bitwise) to its NP counterpart
//! when the distribution carries no parametric tail: both sides call the
//! same summation helpers on the same sorted slice.

use crate::dist::{TailFamily, TailModel};
use crate::error::{Error, Result};
use crate::quad;
use crate::sample::Sample;
use crate::spcdf::SemiParamCdf;
use serde::{Deserialize, Serialize};

/// One of the four supported inequality measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Gini,
    Ge0,
    A1,
    Qsr,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Gini, Measure::Ge0, Measure::A1, Measure::Qsr];

    /// Short key used in JSON output and CLI flags.
    pub fn key(&self) -> &'static str {
        match self {
            Measure::Gini => "gini",
            Measure::Ge0 => "ge0",
            Measure::A1 => "a1",
            Measure::Qsr => "qsr",
        }
    }

    /// Human-readable label for tables.
    pub fn label(&self) -> &'static str {
        match self {
            Measure::Gini => "Gini",
            Measure::Ge0 => "GE(0)",
            Measure::A1 => "A(1)",
            Measure::Qsr => "QSR",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gini" => Ok(Measure::Gini),
            "ge0" => Ok(Measure::Ge0),
            "a1" => Ok(Measure::A1),
            "qsr" => Ok(Measure::Qsr),
            other => Err(Error::Config(format!(
                "unknown measure {other:?}; expected gini, ge0, a1, or qsr"
            ))),
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

/// Estimation method: the empirical estimator or a semi-parametric
/// estimator with the given tail family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Np,
    Sp(TailFamily),
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Np,
        Method::Sp(TailFamily::Gpd),
        Method::Sp(TailFamily::Pareto),
        Method::Sp(TailFamily::Ppd),
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Method::Np => "np",
            Method::Sp(TailFamily::Gpd) => "sp-gpd",
            Method::Sp(TailFamily::Pareto) => "sp-pa",
            Method::Sp(TailFamily::Ppd) => "sp-ppd",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

// ---------------------------------------------------------------------------
// Shared kernels. NP and SP paths call the same functions on the same
// slices, which is what makes the k = 0 reduction exact.

fn sum(values: &[f64]) -> f64 {
    values.iter().sum()
}

fn sum_logs(values: &[f64]) -> f64 {
    values.iter().map(|v| v.ln()).sum()
}

/// `sum_{i=1..last} (i/n)(1 - i/n)(X_{i+1} - X_i)` over the sorted slice;
/// `n` is the slice length.
fn rect_sum(values: &[f64], last: usize) -> f64 {
    let n = values.len() as f64;
    let mut total = 0.0;
    for i in 1..=last {
        let p = i as f64 / n;
        total += p * (1.0 - p) * (values[i] - values[i - 1]);
    }
    total
}

fn gini_from_sorted(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::DegenerateData(
            "Gini requires at least 2 observations".into(),
        ));
    }
    let mu = sum(values) / values.len() as f64;
    Ok(rect_sum(values, values.len() - 1) / mu)
}

fn ge0_from_sorted(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    (sum(values) / n).ln() - sum_logs(values) / n
}

fn a1_from_sorted(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    1.0 - (sum_logs(values) / n).exp() / (sum(values) / n)
}

/// Number of ranks in one quintile: `ceil(n/5)`, with a grace margin so
/// float noise in `0.2 * n` cannot push an exact integer up a rank.
fn quintile_count(n: usize) -> usize {
    let t = 0.2 * n as f64;
    let m = if (t - t.round()).abs() < 1e-9 {
        t.round()
    } else {
        t.ceil()
    };
    (m as usize).max(1)
}

fn qsr_from_sorted(values: &[f64], m: usize) -> f64 {
    let n = values.len();
    sum(&values[n - m..]) / sum(&values[..m])
}

// ---------------------------------------------------------------------------
// Non-parametric estimators.

/// Empirical Gini index of the sample.
pub fn gini_np(s: &Sample) -> Result<f64> {
    gini_from_sorted(s.values())
}

/// Empirical mean logarithmic deviation.
pub fn ge0_np(s: &Sample) -> Result<f64> {
    Ok(ge0_from_sorted(s.values()))
}

/// Empirical Atkinson index with aversion parameter 1.
pub fn a1_np(s: &Sample) -> Result<f64> {
    Ok(a1_from_sorted(s.values()))
}

/// Empirical quintile share ratio; needs at least 5 observations so the
/// quintiles do not overlap.
pub fn qsr_np(s: &Sample) -> Result<f64> {
    if s.n() < 5 {
        return Err(Error::DegenerateData(format!(
            "QSR requires at least 5 observations, got {}",
            s.n()
        )));
    }
    Ok(qsr_from_sorted(s.values(), quintile_count(s.n())))
}

/// Dispatch a non-parametric estimator by measure.
pub fn np_value(measure: Measure, s: &Sample) -> Result<f64> {
    match measure {
        Measure::Gini => gini_np(s),
        Measure::Ge0 => ge0_np(s),
        Measure::A1 => a1_np(s),
        Measure::Qsr => qsr_np(s),
    }
}

// ---------------------------------------------------------------------------
// Semi-parametric estimators.

/// Tail contribution `int_u^inf F(1-F) dx` for the spliced distribution.
fn gini_tail_integral(f: &SemiParamCdf) -> Result<f64> {
    let fit = f.tail().expect("caller checked for a tail");
    let alpha = fit.alpha;
    let gamma = fit.model.gamma();
    match &fit.model {
        TailModel::Gpd(p) => {
            // Closed form: int_0^inf (alpha*S - alpha^2*S^2) dz with
            // int S = sigma/(1-gamma) and int S^2 = sigma/(2-gamma).
            let (nf, kf) = (f.n() as f64, fit.k as f64);
            let sigma = p.sigma();
            Ok(kf * sigma * (2.0 * nf - kf - gamma * (nf - kf))
                / (nf * nf * (1.0 - gamma) * (2.0 - gamma)))
        }
        TailModel::Pareto(_) | TailModel::Ppd(_) => {
            // Plug-in quadrature in relative coordinates. The integrand is
            // below alpha*S(y) <= 2*alpha*y^(-1/gamma), which is the
            // envelope handed to the tail rule.
            let model = fit.model.clone();
            let integrand = move |y: f64| {
                let s = alpha * model.sf(y).unwrap_or(0.0);
                s - s * s
            };
            Ok(fit.u * quad::integrate_upper_tail(integrand, 1.0, 2.0 * alpha, 1.0 / gamma, 1e-8)?)
        }
    }
}

/// Semi-parametric Gini index. Requires a finite tail mean (extreme value
/// index below 1).
pub fn gini_sp(f: &SemiParamCdf) -> Result<f64> {
    match f.tail() {
        None => gini_from_sorted(f.values()),
        Some(fit) => {
            let mu = f.mean()?;
            let body = rect_sum(f.values(), f.n() - fit.k - 1);
            let tail = gini_tail_integral(f)?;
            Ok((body + tail) / mu)
        }
    }
}

/// Semi-parametric mean logarithmic deviation. Defined for every fitted
/// index because only the log-moment of the tail enters.
pub fn ge0_sp(f: &SemiParamCdf) -> Result<f64> {
    match f.tail() {
        None => Ok(ge0_from_sorted(f.values())),
        Some(_) => Ok(f.mean()?.ln() - f.mean_log()?),
    }
}

/// Semi-parametric Atkinson index with aversion parameter 1.
pub fn a1_sp(f: &SemiParamCdf) -> Result<f64> {
    match f.tail() {
        None => Ok(a1_from_sorted(f.values())),
        Some(_) => Ok(1.0 - f.mean_log()?.exp() / f.mean()?),
    }
}

/// Semi-parametric quintile share ratio. The bottom quintile is always
/// empirical; the top quintile mixes the remaining body ranks with the
/// parametric tail mass (or lies entirely inside the tail when the tail
/// holds more than a fifth of the sample).
pub fn qsr_sp(f: &SemiParamCdf) -> Result<f64> {
    let n = f.n();
    if n < 5 {
        return Err(Error::DegenerateData(format!(
            "QSR requires at least 5 observations, got {n}"
        )));
    }
    match f.tail() {
        None => Ok(qsr_from_sorted(f.values(), quintile_count(n))),
        Some(fit) => {
            let m = quintile_count(n);
            if m > f.body_len() {
                return Err(Error::DegenerateData(format!(
                    "bottom quintile ({m} ranks) reaches into the parametric tail (k = {})",
                    fit.k
                )));
            }
            let bottom = sum(&f.values()[..m]);
            let kf = fit.k as f64;
            let top = if m >= fit.k {
                // Body ranks between the quintile cut and the threshold,
                // plus the whole tail mass.
                sum(&f.values()[n - m..n - fit.k]) + kf * fit.tail_mean()?
            } else {
                // The top fifth sits strictly inside the tail: cut at the
                // level that leaves conditional mass m/k above it.
                let q = 1.0 - m as f64 / kf;
                let cut = fit.tail_quantile(q.clamp(0.0, 1.0 - f64::EPSILON))?;
                kf * fit.tail_partial_mean(cut)?
            };
            Ok(top / bottom)
        }
    }
}

/// Dispatch a semi-parametric estimator by measure.
pub fn sp_value(measure: Measure, f: &SemiParamCdf) -> Result<f64> {
    match measure {
        Measure::Gini => gini_sp(f),
        Measure::Ge0 => ge0_sp(f),
        Measure::A1 => a1_sp(f),
        Measure::Qsr => qsr_sp(f),
    }
}

// ---------------------------------------------------------------------------
// Descriptive statistics.

/// Location and spread summary reported alongside the measures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    /// Sample median (mid-average for even sizes).
    pub median: f64,
    /// Median absolute deviation from the median. Raw by default; when
    /// `mad_scaled` it carries the 1.4826 normal-consistency factor.
    pub mad: f64,
    pub mad_scaled: bool,
    pub max: f64,
}

fn median_sorted(values: &[f64]) -> f64 {
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median, MAD, and maximum of the sample.
pub fn descriptive_stats(s: &Sample, scaled_mad: bool) -> DescriptiveStats {
    let median = median_sorted(s.values());
    let mut deviations: Vec<f64> = s.values().iter().map(|x| (x - median).abs()).collect();
    deviations.sort_by(f64::total_cmp);
    let mut mad = median_sorted(&deviations);
    if scaled_mad {
        mad *= 1.4826;
    }
    DescriptiveStats {
        n: s.n(),
        median,
        mad,
        mad_scaled: scaled_mad,
        max: s.max(),
    }
}
