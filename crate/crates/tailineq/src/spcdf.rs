//! The semi-parametric distribution function: empirical body, parametric
//! tail.
//!
//! Below the threshold u the estimator is the empirical CDF capped at
//! 1 - alpha; at and above u it is `1 - alpha * S(coord)`, where S is the
//! fitted tail survival evaluated on absolute (`x - u`) or relative
//! (`x / u`) exceedance coordinates. Two float-level invariants are
//! maintained bitwise:
//!
//! - `cdf(u) == 1 - alpha` exactly: the tail survival is renormalized by
//!   its value at the support edge (which is 1 up to an ulp for the
//!   perturbed family), and the body is capped with the same `1 - alpha`
//!   expression the tail branch uses.
//! - with no tail attached, every operation reduces to the plain
//!   empirical quantity on the same summation order, so semi-parametric
//!   and non-parametric paths agree exactly rather than approximately.

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::tailfit::TailFit;

/// Semi-parametric CDF: sorted data plus an optional fitted tail.
#[derive(Debug, Clone)]
pub struct SemiParamCdf {
    values: Vec<f64>,
    tail: Option<TailFit>,
    /// Tail survival at its own support edge; 1 up to an ulp. Dividing by
    /// it pins `cdf(u)` to exactly `1 - alpha`.
    tail_norm: f64,
}

impl SemiParamCdf {
    /// Purely empirical CDF (no parametric tail).
    pub fn empirical(s: &Sample) -> Self {
        SemiParamCdf {
            values: s.values().to_vec(),
            tail: None,
            tail_norm: 1.0,
        }
    }

    /// Splice a fitted tail onto the sample it was fitted from.
    pub fn build(s: &Sample, fit: TailFit) -> Result<Self> {
        let n = s.n();
        if fit.k < 1 || fit.k >= n {
            return Err(Error::InconsistentFit(format!(
                "tail count k = {} is outside [1, {}]",
                fit.k,
                n - 1
            )));
        }
        let u = s.order_stat(n - fit.k);
        if fit.u != u {
            return Err(Error::InconsistentFit(format!(
                "fit threshold {} is not the order statistic {} the sample implies for k = {}",
                fit.u, u, fit.k
            )));
        }
        let alpha = fit.k as f64 / n as f64;
        if fit.alpha != alpha {
            return Err(Error::InconsistentFit(format!(
                "fit tail mass {} does not equal k/n = {alpha}",
                fit.alpha
            )));
        }
        let tail_norm = fit.model.sf(fit.model.support_lower())?;
        Ok(SemiParamCdf {
            values: s.values().to_vec(),
            tail: Some(fit),
            tail_norm,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Exceedance count carried by the parametric tail (0 when empirical).
    pub fn k(&self) -> usize {
        self.tail.as_ref().map_or(0, |t| t.k)
    }

    /// Mass assigned to the parametric tail, `k/n` (0 when empirical).
    pub fn alpha(&self) -> f64 {
        self.tail.as_ref().map_or(0.0, |t| t.alpha)
    }

    pub fn threshold(&self) -> Option<f64> {
        self.tail.as_ref().map(|t| t.u)
    }

    pub fn tail(&self) -> Option<&TailFit> {
        self.tail.as_ref()
    }

    /// Sorted sample values (all of them, body and tail region alike).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of order statistics in the empirical body, `n - k`.
    pub fn body_len(&self) -> usize {
        self.values.len() - self.k()
    }

    fn count_le(&self, x: f64) -> usize {
        self.values.partition_point(|v| *v <= x)
    }

    /// Distribution function at `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let n = self.values.len() as f64;
        match &self.tail {
            None => self.count_le(x) as f64 / n,
            Some(fit) if x >= fit.u => {
                let cap = 1.0 - fit.alpha;
                let s = fit
                    .tail_sf(x)
                    .expect("tail survival is defined on [u, inf)")
                    / self.tail_norm;
                (1.0 - fit.alpha * s).max(cap)
            }
            Some(fit) => {
                let cap = 1.0 - fit.alpha;
                (self.count_le(x) as f64 / n).min(cap)
            }
        }
    }

    /// Quantile for `p` in `(0, 1)`: the empirical order statistic
    /// `X_{ceil(n p), n}` in the body, the fitted tail quantile above the
    /// `1 - alpha` split point.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "quantile level must lie in (0, 1), got {p}"
            )));
        }
        let n = self.values.len();
        if let Some(fit) = &self.tail {
            let cap = 1.0 - fit.alpha;
            if p > cap {
                // Conditional tail probability, kept strictly below 1.
                let q = ((p - cap) / fit.alpha).clamp(0.0, 1.0 - f64::EPSILON);
                return fit.tail_quantile(q);
            }
        }
        let t = p * n as f64;
        let idx = if (t - t.round()).abs() < 1e-9 {
            t.round() as usize
        } else {
            t.ceil() as usize
        };
        Ok(self.values[idx.clamp(1, n) - 1])
    }

    /// Mean of the estimated distribution: the body order statistics at
    /// mass `1/n` each plus `alpha` times the tail conditional mean.
    pub fn mean(&self) -> Result<f64> {
        let n = self.values.len() as f64;
        match &self.tail {
            None => Ok(self.values.iter().sum::<f64>() / n),
            Some(fit) => {
                let body: f64 = self.values[..self.body_len()].iter().sum();
                Ok(body / n + fit.alpha * fit.tail_mean()?)
            }
        }
    }

    /// Mean of the log: body log sum at mass `1/n` each plus `alpha` times
    /// the tail conditional log-mean. Finite for every fitted index.
    pub fn mean_log(&self) -> Result<f64> {
        let n = self.values.len() as f64;
        match &self.tail {
            None => Ok(self.values.iter().map(|v| v.ln()).sum::<f64>() / n),
            Some(fit) => {
                let body: f64 = self.values[..self.body_len()].iter().map(|v| v.ln()).sum();
                Ok(body / n + fit.alpha * fit.tail_mean_log()?)
            }
        }
    }
}
