//! Validated sample data: sorted, strictly positive observations.

use crate::error::{Error, Result};

/// A cleaned data sample. Values are sorted ascending, strictly positive
/// and finite; `n >= 1`. Construction is the only place these invariants
/// are checked, so everything downstream can rely on them.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Vec<f64>,
    source: String,
}

impl Sample {
    /// Build a sample from raw values. Sorts; rejects empty input and any
    /// non-finite or non-positive value.
    pub fn new(mut values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateData("sample is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::DegenerateData(format!(
                "sample values must be finite and strictly positive, found {bad}"
            )));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self {
            values,
            source: source.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sorted ascending view of the data.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The i-th order statistic, 1-based: `order_stat(1)` is the minimum,
    /// `order_stat(n)` the maximum.
    pub fn order_stat(&self, i: usize) -> f64 {
        assert!(
            i >= 1 && i <= self.values.len(),
            "order statistic index {i} out of range 1..={}",
            self.values.len()
        );
        self.values[i - 1]
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Arithmetic mean, summed in ascending order.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Free-text provenance (file path, generator description, ...).
    pub fn source(&self) -> &str {
        &self.source
    }
}
