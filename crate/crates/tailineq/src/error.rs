//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates its family's constraints (e.g. `gamma <= 0`).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation point lies outside the distribution's support.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data cannot support the requested operation (too few points,
    /// all values equal, empty after cleaning).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// The likelihood optimizer hit its iteration cap before the convergence
    /// tolerances were met. Carries the best iterate found so far.
    #[error("fit did not converge for {family}: best log-likelihood {log_likelihood} at {params:?} after {iterations} iterations")]
    NonConvergence {
        family: &'static str,
        params: Vec<f64>,
        log_likelihood: f64,
        iterations: usize,
    },

    /// A tail fit and the sample it claims to come from disagree.
    #[error("inconsistent tail fit: {0}")]
    InconsistentFit(String),

    /// The fitted extreme value index implies an infinite mean, so
    /// mean-based measures are undefined.
    #[error("infinite mean: fitted gamma = {gamma} >= 1, {context}")]
    InfiniteMean { gamma: f64, context: String },

    /// Numerical quadrature failed to reach its tolerance.
    #[error("quadrature error: {0}")]
    Quadrature(String),

    /// Invalid run configuration.
    #[error("invalid config: {0}")]
    Config(String),

    /// Data ingestion failure.
    #[error("ingest error: {0}")]
    Ingest(String),

    /// All candidate tail families failed to fit.
    #[error("no tail model could be fitted: {0}")]
    AllFitsFailed(String),
}

impl Error {
    /// Short machine-readable tag used in report cells and the FFI layer.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Domain(_) => "domain",
            Error::DegenerateData(_) => "degenerate-data",
            Error::NonConvergence { .. } => "non-convergence",
            Error::InconsistentFit(_) => "inconsistent-fit",
            Error::InfiniteMean { .. } => "infinite-mean",
            Error::Quadrature(_) => "quadrature",
            Error::Config(_) => "config",
            Error::Ingest(_) => "ingest",
            Error::AllFitsFailed(_) => "all-fits-failed",
        }
    }
}
