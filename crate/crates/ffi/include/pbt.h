#ifndef PBT_H
#define PBT_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PbtStatus {
  PBT_STATUS_OK = 0,
  PBT_STATUS_NULL_POINTER = 1,
  PBT_STATUS_INVALID_ARGUMENT = 2,
  PBT_STATUS_INVALID_COEFFICIENTS = 3,
  PBT_STATUS_SIZE_CAP = 4,
  PBT_STATUS_NUMERICAL = 5,
  PBT_STATUS_PANIC = 6,
} PbtStatus;

typedef enum PbtMode {
  PBT_MODE_STANDARD = 0,
  PBT_MODE_GIVEN_COEFFICIENTS = 1,
  PBT_MODE_OPTIMIZED = 2,
} PbtMode;

/**
 * Opaque fidelity report.
 */
typedef struct PbtReport PbtReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fidelity of the standard protocol. On success `*out` holds a new report.
 */
enum PbtStatus pbt_fidelity_standard(uint32_t d, uint32_t n, struct PbtReport **out);

/**
 * Optimal fidelity over symmetric port states, with the maximizing
 * coefficients attached to the report.
 */
enum PbtStatus pbt_fidelity_optimized(uint32_t d, uint32_t n, struct PbtReport **out);

/**
 * Fidelity for given coefficients.
 *
 * Partition `k` has `row_counts[k]` rows taken consecutively from `rows`,
 * and coefficient `values[k]`. Partitions not listed are zero. With
 * `renormalize` false a violated normalization is rejected.
 *
 * # Safety
 *
 * `row_counts` and `values` must point to `count` elements and `rows` to
 * their sum.
 */
enum PbtStatus pbt_fidelity_given(uint32_t d,
                                  uint32_t n,
                                  const uint32_t *rows,
                                  const size_t *row_counts,
                                  const double *values,
                                  size_t count,
                                  bool renormalize,
                                  struct PbtReport **out);

/**
 * Entanglement fidelity `F`, or NaN for a null handle.
 */
double pbt_report_fidelity(const struct PbtReport *r);

/**
 * Success probability `d^2 F / N`, or NaN for a null handle.
 */
double pbt_report_success_probability(const struct PbtReport *r);

uint32_t pbt_report_d(const struct PbtReport *r);

uint32_t pbt_report_n(const struct PbtReport *r);

enum PbtMode pbt_report_mode(const struct PbtReport *r);

/**
 * Whether the top eigenvalue behind an optimized report was degenerate.
 */
bool pbt_report_degenerate(const struct PbtReport *r);

/**
 * Number of coefficients attached to the report; zero for the standard
 * protocol.
 */
size_t pbt_report_coefficient_count(const struct PbtReport *r);

/**
 * Coefficient `index` in canonical partition order. Writes its value and
 * up to `rows_capacity` row lengths; `*rows_len` receives the full row
 * count.
 *
 * # Safety
 *
 * `rows` must have room for `rows_capacity` elements; `value` and
 * `rows_len` must be valid for writes.
 */
enum PbtStatus pbt_report_coefficient(const struct PbtReport *r,
                                      size_t index,
                                      double *value,
                                      uint32_t *rows,
                                      size_t rows_capacity,
                                      size_t *rows_len);

/**
 * The report as a JSON object. The string is owned by the report.
 */
const char *pbt_report_json(const struct PbtReport *r);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 *
 * `r` must come from this library and not be used afterwards.
 */
void pbt_report_free(struct PbtReport *r);

/**
 * `1 - (d^2 - 1) / (4N)`.
 */
double pbt_asymptote_standard(uint32_t d, uint32_t n);

/**
 * `max(0, 1 - (d^2 - 1) / N)`.
 */
double pbt_lower_bound_standard(uint32_t d, uint32_t n);

/**
 * Runs the dense oracle checks for the standard or optimized protocol.
 * `*passed` tells whether all checks held; `*margin` receives the worst
 * certificate slack.
 *
 * # Safety
 *
 * `passed` and `margin` must be valid for writes.
 */
enum PbtStatus pbt_verify(uint32_t d, uint32_t n, enum PbtMode mode, bool *passed, double *margin);

/**
 * Message of the last failure on this thread; empty when none. Valid
 * until the next failing call on the same thread.
 */
const char *pbt_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *pbt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PBT_H */
