#ifndef CQUAL_H
#define CQUAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Number of style counters: 20 rules, each with two alternatives.
 */
#define CQ_STYLE_COUNTERS 40

/*
 Result of every fallible call.
 */
typedef enum CqStatus {
  CQ_STATUS_OK = 0,
  CQ_STATUS_NULL_POINTER = 1,
  CQ_STATUS_INVALID_ARGUMENT = 2,
  /*
   The series has no variance, so its autocorrelation is undefined.
   */
  CQ_STATUS_CONSTANT_SERIES = 3,
  CQ_STATUS_TOO_SHORT = 4,
  CQ_STATUS_EMPTY_SAMPLE = 5,
  CQ_STATUS_BUFFER_TOO_SMALL = 6,
  /*
   A Rust panic was caught at the boundary.
   */
  CQ_STATUS_INTERNAL = 7,
} CqStatus;

/*
 The eleven per-file quality metrics.
 */
typedef enum CqMetric {
  CQ_METRIC_CD = 0,
  CQ_METRIC_CS,
  CQ_METRIC_FN,
  CQ_METRIC_FS,
  CQ_METRIC_GD,
  CQ_METRIC_IL,
  CQ_METRIC_LL,
  CQ_METRIC_LN,
  CQ_METRIC_QD,
  CQ_METRIC_SI,
  CQ_METRIC_SN,
} CqMetric;

/*
 Raw counts behind the metrics, in timeline column order.
 */
typedef enum CqCount {
  CQ_COUNT_STATEMENTS = 0,
  CQ_COUNT_CHARS,
  CQ_COUNT_COMMENT_CHARS,
  CQ_COUNT_COMMENTS,
  CQ_COUNT_FUNCTIONS,
  CQ_COUNT_LINES,
  CQ_COUNT_GOTOS,
  CQ_COUNT_QUESTIONABLE_WORDS,
  CQ_COUNT_IDENTIFIERS_UNIQUE,
  CQ_COUNT_SUM_UNIQUE_IDENTIFIER_LEN,
  CQ_COUNT_SUM_NESTING,
  CQ_COUNT_NESTED_LINES,
} CqCount;

/*
 Opaque measurement of one source file.
 */
typedef struct CqMeasurement CqMeasurement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *cq_version(void);

/*
 Message of the last failed call on this thread, or NULL. The pointer
 stays valid until the next call into the library on this thread.
 */
const char *cq_last_error(void);

/*
 Measures `len` bytes of C source. On success `*out` owns a new handle.

 # Safety
 `src` must point to `len` readable bytes (or be NULL when `len` is 0);
 `out` must be a valid pointer.
 */
enum CqStatus cq_measure(const uint8_t *src, size_t len, struct CqMeasurement **out);

/*
 Releases a handle from [`cq_measure`]. NULL is ignored.

 # Safety
 `m` must be NULL or a handle not yet freed.
 */
void cq_measurement_free(struct CqMeasurement *m);

/*
 One of the eleven metrics. Ratios with a zero denominator are 0.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum CqStatus cq_measurement_metric(const struct CqMeasurement *m,
                                    enum CqMetric which,
                                    double *out);

/*
 One of the raw counts.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum CqStatus cq_measurement_count(const struct CqMeasurement *m,
                                   enum CqCount which,
                                   uint64_t *out);

/*
 Copies the 40 style counters (rule by rule, alternative a then b).

 # Safety
 `m` must be a live handle; `out` must hold `out_len` values.
 */
enum CqStatus cq_measurement_style(const struct CqMeasurement *m, uint64_t *out, size_t out_len);

/*
 Style inconsistency of 40 counters laid out as by [`cq_measurement_style`].

 # Safety
 `counts` must hold `len` values and `out` be a valid pointer.
 */
enum CqStatus cq_style_inconsistency(const uint64_t *counts, size_t len, double *out);

/*
 Sample autocorrelation at lags 1..=max_lag, written to `out[0..max_lag]`.

 # Safety
 `x` must hold `n` values and `out` `out_len` values.
 */
enum CqStatus cq_acf(const double *x, size_t n, size_t max_lag, double *out, size_t out_len);

/*
 Ljung-Box statistic over the first `h` autocorrelations `rho` of a series
 of length `n`, and its chi-square p-value.

 # Safety
 `rho` must hold `rho_len` values; `q` and `p` must be valid pointers.
 */
enum CqStatus cq_ljung_box(const double *rho,
                           size_t rho_len,
                           size_t n,
                           size_t h,
                           double *q,
                           double *p);

/*
 Two-sample Kolmogorov-Smirnov test: statistic `d` and asymptotic p-value.

 # Safety
 `x` and `y` must hold `nx` and `ny` values; `d` and `p` must be valid.
 */
enum CqStatus cq_ks_two_sample(const double *x,
                               size_t nx,
                               const double *y,
                               size_t ny,
                               double *d,
                               double *p);

/*
 Benjamini-Hochberg adjusted p-values, in input order. `out` may alias `p`.

 # Safety
 `p` and `out` must each hold `n` values.
 */
enum CqStatus cq_bh_adjust(const double *p, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CQUAL_H */
