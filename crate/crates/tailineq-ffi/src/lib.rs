//! C ABI for the tailineq library.
//!
//! The surface is handle-based: build a `TailineqSample` from a buffer of
//! doubles, run `tailineq_analyze` to get a `TailineqReport`, then read
//! the report as JSON or cell by cell. Every function returns a
//! `TailineqStatus`; on any non-OK status the thread-local message from
//! `tailineq_last_error` describes what went wrong. Handles are freed
//! with their matching `_free` function, strings from this library with
//! `tailineq_string_free`.
//!
//! The generated header lives at `include/tailineq.h`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use tailineq::pipeline::{analyze_sample, AnalyzeOptions, TailChoice};
use tailineq::report::{Cell, InequalityReport};
use tailineq::Sample;

/// Result of every call. Non-zero values carry a thread-local message
/// readable through `tailineq_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailineqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    Domain = 4,
    DegenerateData = 5,
    NonConvergence = 6,
    InconsistentFit = 7,
    /// The fitted tail index implies an infinite mean.
    InfiniteMean = 8,
    Quadrature = 9,
    Config = 10,
    Ingest = 11,
    AllFitsFailed = 12,
    /// The requested measure/method cell does not exist in the report.
    NotFound = 13,
    /// An internal invariant was violated; this is a bug.
    Panic = 14,
}

/// Opaque handle over a validated, sorted sample.
pub struct TailineqSample {
    inner: Sample,
}

/// Opaque handle over a finished analysis report.
pub struct TailineqReport {
    inner: InequalityReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for_kind(kind: &str) -> TailineqStatus {
    match kind {
        "invalid-parameter" => TailineqStatus::InvalidParameter,
        "domain" => TailineqStatus::Domain,
        "degenerate-data" => TailineqStatus::DegenerateData,
        "non-convergence" => TailineqStatus::NonConvergence,
        "inconsistent-fit" => TailineqStatus::InconsistentFit,
        "infinite-mean" => TailineqStatus::InfiniteMean,
        "quadrature" => TailineqStatus::Quadrature,
        "config" => TailineqStatus::Config,
        "ingest" => TailineqStatus::Ingest,
        "all-fits-failed" => TailineqStatus::AllFitsFailed,
        _ => TailineqStatus::Panic,
    }
}

fn fail(e: &tailineq::Error) -> TailineqStatus {
    set_error(&e.to_string());
    status_for_kind(e.kind())
}

fn guard<F: FnOnce() -> TailineqStatus>(body: F) -> TailineqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic; please report this as a bug");
            TailineqStatus::Panic
        }
    }
}

/// Message for the most recent non-OK status on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn tailineq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tailineq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build a sample from `len` strictly positive, finite doubles. The
/// buffer is copied; the caller keeps ownership of `values`. On success
/// writes a handle to `out` (free with `tailineq_sample_free`).
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` must be a
/// valid location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn tailineq_sample_new(
    values: *const f64,
    len: usize,
    out: *mut *mut TailineqSample,
) -> TailineqStatus {
    guard(|| {
        if values.is_null() || out.is_null() {
            set_error("values and out must not be null");
            return TailineqStatus::NullArgument;
        }
        let slice = std::slice::from_raw_parts(values, len);
        match Sample::new(slice.to_vec(), "buffer") {
            Ok(sample) => {
                *out = Box::into_raw(Box::new(TailineqSample { inner: sample }));
                TailineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of observations in the sample; 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle from `tailineq_sample_new`.
#[no_mangle]
pub unsafe extern "C" fn tailineq_sample_len(sample: *const TailineqSample) -> usize {
    if sample.is_null() {
        return 0;
    }
    (*sample).inner.n()
}

/// Free a sample handle. Null is accepted and ignored.
///
/// # Safety
/// `sample` must be null or a live handle, and must not be used again.
#[no_mangle]
pub unsafe extern "C" fn tailineq_sample_free(sample: *mut TailineqSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Analyze a sample: empirical measures plus spliced-tail measures.
/// `alpha` is the tail fraction in (0, 0.5); `tail` is one of "auto",
/// "all", "gpd", "pa", "ppd" (null means "auto"). Fit failures degrade
/// into the report rather than failing the call; inspect
/// `tailineq_report_has_failures`. On success writes a handle to `out`
/// (free with `tailineq_report_free`).
///
/// # Safety
/// `sample` must be a live handle; `tail` null or NUL-terminated;
/// `out` a valid location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn tailineq_analyze(
    sample: *const TailineqSample,
    alpha: f64,
    tail: *const c_char,
    out: *mut *mut TailineqReport,
) -> TailineqStatus {
    guard(|| {
        if sample.is_null() || out.is_null() {
            set_error("sample and out must not be null");
            return TailineqStatus::NullArgument;
        }
        let choice = if tail.is_null() {
            TailChoice::Auto
        } else {
            let text = match CStr::from_ptr(tail).to_str() {
                Ok(text) => text,
                Err(_) => {
                    set_error("tail must be valid UTF-8");
                    return TailineqStatus::InvalidUtf8;
                }
            };
            match text.parse::<TailChoice>() {
                Ok(choice) => choice,
                Err(e) => return fail(&e),
            }
        };
        let opts = AnalyzeOptions {
            alpha,
            tail: choice,
            ..AnalyzeOptions::default()
        };
        match analyze_sample(&(*sample).inner, &opts, None) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(TailineqReport { inner: report }));
                TailineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// 1 when any requested cell, tail fit, or the selection step failed;
/// 0 otherwise (also 0 for a null handle).
///
/// # Safety
/// `report` must be null or a live handle from `tailineq_analyze`.
#[no_mangle]
pub unsafe extern "C" fn tailineq_report_has_failures(report: *const TailineqReport) -> i32 {
    if report.is_null() {
        return 0;
    }
    i32::from((*report).inner.has_failures())
}

/// Render the report as pretty JSON with sorted keys and floats at 10
/// significant digits. On success writes a heap string to `out`; free it
/// with `tailineq_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid location for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn tailineq_report_json(
    report: *const TailineqReport,
    out: *mut *mut c_char,
) -> TailineqStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            set_error("report and out must not be null");
            return TailineqStatus::NullArgument;
        }
        match (*report).inner.to_json() {
            Ok(json) => match CString::new(json) {
                Ok(cstring) => {
                    *out = cstring.into_raw();
                    TailineqStatus::Ok
                }
                Err(_) => {
                    set_error("serialized report contained an interior NUL");
                    TailineqStatus::Panic
                }
            },
            Err(e) => fail(&e),
        }
    })
}

/// Read one cell of the measure matrix. `measure` is one of "gini",
/// "ge0", "a1", "qsr"; `method` one of "np", "sp-gpd", "sp-pa", "sp-ppd"
/// (whichever the report contains). A cell that holds a typed failure
/// returns that failure's status and message instead of a value.
///
/// # Safety
/// `report` must be a live handle; `measure` and `method` NUL-terminated;
/// `out` a valid location for one double.
#[no_mangle]
pub unsafe extern "C" fn tailineq_report_value(
    report: *const TailineqReport,
    measure: *const c_char,
    method: *const c_char,
    out: *mut f64,
) -> TailineqStatus {
    guard(|| {
        if report.is_null() || measure.is_null() || method.is_null() || out.is_null() {
            set_error("report, measure, method, and out must not be null");
            return TailineqStatus::NullArgument;
        }
        let (measure, method) = match (
            CStr::from_ptr(measure).to_str(),
            CStr::from_ptr(method).to_str(),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                set_error("measure and method must be valid UTF-8");
                return TailineqStatus::InvalidUtf8;
            }
        };
        let cell = (*report)
            .inner
            .measures
            .get(measure)
            .and_then(|row| row.get(method));
        match cell {
            Some(Cell::Value { value, .. }) => {
                *out = *value;
                TailineqStatus::Ok
            }
            Some(Cell::Failure { error, kind }) => {
                set_error(error);
                status_for_kind(kind)
            }
            None => {
                set_error(&format!("no cell for measure '{measure}', method '{method}'"));
                TailineqStatus::NotFound
            }
        }
    })
}

/// Free a report handle. Null is accepted and ignored.
///
/// # Safety
/// `report` must be null or a live handle, and must not be used again.
#[no_mangle]
pub unsafe extern "C" fn tailineq_report_free(report: *mut TailineqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Free a string produced by this library. Null is accepted and ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, and must not
/// be used again.
#[no_mangle]
pub unsafe extern "C" fn tailineq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
