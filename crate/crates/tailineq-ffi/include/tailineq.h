/* C interface for the tailineq inequality-measure library. Generated by cbindgen; do not edit by hand. */

#ifndef TAILINEQ_H
#define TAILINEQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call. Non-zero values carry a thread-local message
// readable through `tailineq_last_error`.
typedef enum TailineqStatus {
  TAILINEQ_STATUS_OK = 0,
  // A required pointer argument was null.
  TAILINEQ_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  TAILINEQ_STATUS_INVALID_UTF8 = 2,
  TAILINEQ_STATUS_INVALID_PARAMETER = 3,
  TAILINEQ_STATUS_DOMAIN = 4,
  TAILINEQ_STATUS_DEGENERATE_DATA = 5,
  TAILINEQ_STATUS_NON_CONVERGENCE = 6,
  TAILINEQ_STATUS_INCONSISTENT_FIT = 7,
  // The fitted tail index implies an infinite mean.
  TAILINEQ_STATUS_INFINITE_MEAN = 8,
  TAILINEQ_STATUS_QUADRATURE = 9,
  TAILINEQ_STATUS_CONFIG = 10,
  TAILINEQ_STATUS_INGEST = 11,
  TAILINEQ_STATUS_ALL_FITS_FAILED = 12,
  // The requested measure/method cell does not exist in the report.
  TAILINEQ_STATUS_NOT_FOUND = 13,
  // An internal invariant was violated; this is a bug.
  TAILINEQ_STATUS_PANIC = 14,
} TailineqStatus;

// Opaque handle over a finished analysis report.
typedef struct TailineqReport TailineqReport;

// Opaque handle over a validated, sorted sample.
typedef struct TailineqSample TailineqSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent non-OK status on this thread. The pointer
// stays valid until the next failing call on the same thread. Never null.
const char *tailineq_last_error(void);

// Library version as a static NUL-terminated string.
const char *tailineq_version(void);

// Build a sample from `len` strictly positive, finite doubles. The
// buffer is copied; the caller keeps ownership of `values`. On success
// writes a handle to `out` (free with `tailineq_sample_free`).
//
// # Safety
// `values` must point to `len` readable doubles and `out` must be a
// valid location for one pointer.
enum TailineqStatus tailineq_sample_new(const double *values,
                                        size_t len,
                                        struct TailineqSample **out);

// Number of observations in the sample; 0 for a null handle.
//
// # Safety
// `sample` must be null or a live handle from `tailineq_sample_new`.
size_t tailineq_sample_len(const struct TailineqSample *sample);

// Free a sample handle. Null is accepted and ignored.
//
// # Safety
// `sample` must be null or a live handle, and must not be used again.
void tailineq_sample_free(struct TailineqSample *sample);

// Analyze a sample: empirical measures plus spliced-tail measures.
// `alpha` is the tail fraction in (0, 0.5); `tail` is one of "auto",
// "all", "gpd", "pa", "ppd" (null means "auto"). Fit failures degrade
// into the report rather than failing the call; inspect
// `tailineq_report_has_failures`. On success writes a handle to `out`
// (free with `tailineq_report_free`).
//
// # Safety
// `sample` must be a live handle; `tail` null or NUL-terminated;
// `out` a valid location for one pointer.
enum TailineqStatus tailineq_analyze(const struct TailineqSample *sample,
                                     double alpha,
                                     const char *tail,
                                     struct TailineqReport **out);

// 1 when any requested cell, tail fit, or the selection step failed;
// 0 otherwise (also 0 for a null handle).
//
// # Safety
// `report` must be null or a live handle from `tailineq_analyze`.
int32_t tailineq_report_has_failures(const struct TailineqReport *report);

// Render the report as pretty JSON with sorted keys and floats at 10
// significant digits. On success writes a heap string to `out`; free it
// with `tailineq_string_free`.
//
// # Safety
// `report` must be a live handle and `out` a valid location for one
// pointer.
enum TailineqStatus tailineq_report_json(const struct TailineqReport *report, char **out);

// Read one cell of the measure matrix. `measure` is one of "gini",
// "ge0", "a1", "qsr"; `method` one of "np", "sp-gpd", "sp-pa", "sp-ppd"
// (whichever the report contains). A cell that holds a typed failure
// returns that failure's status and message instead of a value.
//
// # Safety
// `report` must be a live handle; `measure` and `method` NUL-terminated;
// `out` a valid location for one double.
enum TailineqStatus tailineq_report_value(const struct TailineqReport *report,
                                          const char *measure,
                                          const char *method,
                                          double *out);

// Free a report handle. Null is accepted and ignored.
//
// # Safety
// `report` must be null or a live handle, and must not be used again.
void tailineq_report_free(struct TailineqReport *report);

// Free a string produced by this library. Null is accepted and ignored.
//
// # Safety
// `s` must be null or a string returned by this library, and must not
// be used again.
void tailineq_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TAILINEQ_H */
