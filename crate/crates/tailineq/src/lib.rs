//! Semi-parametric inequality measures for heavy-tailed samples.
//!
//! The estimators here splice an empirical distribution body onto a
//! parametric extreme-value tail. The body is the usual empirical CDF up to
//! a high quantile threshold; above the threshold one of three tail laws is
//! fitted to the exceedances (generalized Pareto, strict Pareto, or a
//! second-order perturbed Pareto), and inequality functionals — Gini, mean
//! log deviation, the Atkinson index, the quintile share ratio — are
//! evaluated against the spliced distribution. A representativeness index
//! based on the mean squared discrepancy between fitted and ideal ranks
//! scores the candidate tails and picks one automatically.
//!
//! The crate is organised bottom-up:
//!
//! - [`dist`]: the three tail laws (CDF/quantile/density/likelihood);
//! - [`quad`], [`optim`]: adaptive Gauss–Kronrod quadrature and Nelder–Mead,
//!   the numerical kernels behind fitting and the non-closed-form moments;
//! - [`sample`]: validated, sorted, strictly positive data;
//! - [`tailfit`]: threshold selection and maximum-likelihood tail fits;
//! - [`spcdf`]: the spliced semi-parametric CDF, quantile, and mean;
//! - [`measures`]: inequality measures, empirical and semi-parametric;
//! - [`select`]: the representativeness index and automatic tail choice;
//! - [`ingest`], [`simulate`], [`report`], [`pipeline`]: CSV intake,
//!   seeded sampling from the tail laws, report shaping, and the
//!   end-to-end run driven by the command-line interface.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`:
// the negated form also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod ingest;
pub mod measures;
pub mod optim;
pub mod pipeline;
pub mod quad;
pub mod report;
pub mod sample;
pub mod select;
pub mod simulate;
pub mod spcdf;
pub mod tailfit;

pub use error::{Error, Result};
pub use sample::Sample;
