/* SPDX-License-Identifier: MIT OR Apache-2.0 */

#ifndef LINTHRESH_H
#define LINTHRESH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum LtStatus {
  LT_STATUS_OK = 0,
  LT_STATUS_NULL_POINTER = 1,
  LT_STATUS_INVALID_ARGUMENT = 2,
  LT_STATUS_INVALID_SAMPLE = 3,
  LT_STATUS_DEGENERATE_DESIGN = 4,
  LT_STATUS_INSUFFICIENT_SUFFIX = 5,
  LT_STATUS_NO_CANDIDATES = 6,
  LT_STATUS_IO = 7,
  LT_STATUS_PARSE = 8,
  LT_STATUS_OUT_OF_RANGE = 9,
  LT_STATUS_PANIC = 99,
} LtStatus;

typedef enum LtPenaltyKind {
  // f(u) = max(u - shift, 0)
  LT_PENALTY_KIND_POSITIVE_PART = 0,
  // f(u) = max(arctan(u - shift), 0)
  LT_PENALTY_KIND_ARCTAN = 1,
} LtPenaltyKind;

// Opaque loss profile.
typedef struct LtProfile LtProfile;

// Opaque validated sample.
typedef struct LtSample LtSample;

typedef struct LtPenaltyConfig {
  double c;
  double xi;
  double eta1;
  enum LtPenaltyKind kind;
  // When false the smallest observed covariate is used as the shift.
  bool has_shift;
  double shift;
  // 0 selects the default max(3, ceil(eta1 * n)).
  size_t min_suffix;
} LtPenaltyConfig;

typedef struct LtProfileEntry {
  double u;
  size_t n_suffix;
  double alpha;
  double beta;
  double loss;
  double penalty;
  double penalized;
} LtProfileEntry;

typedef struct LtFit {
  double alpha;
  double beta;
  size_t n_used;
  double rss;
  double mean_x;
  double mean_y;
  double ss_x;
} LtFit;

typedef struct LtRefit {
  double psi;
  double cutoff;
  struct LtFit fit;
  double sigma2_hat;
  // Row-major 2x2 covariance of (alpha, beta).
  double covariance[4];
  double se_alpha;
  double se_beta;
  double z_alpha;
  double z_beta;
  double p_alpha;
  double p_beta;
} LtRefit;

typedef struct LtEstimate {
  double u_hat;
  size_t candidate_index;
  double loss;
  double penalized;
  double lambda_n;
  double gamma_n;
  size_t n;
  struct LtFit fit;
  bool has_refit;
  // Zeroed unless `has_refit`.
  struct LtRefit refit;
} LtEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *lt_version(void);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next `lt_*` call on the same thread.
const char *lt_last_error_message(void);

// Static name of a status code, e.g. "LT_STATUS_NO_CANDIDATES".
const char *lt_status_name(enum LtStatus status);

// Defaults: c = 0, xi = 0.4, eta1 = 0.05, positive-part penalty shifted to
// the smallest covariate.
struct LtPenaltyConfig lt_penalty_config_default(void);

// Copies `len` paired observations into a new sample.
//
// # Safety
// `x` and `y` must point to `len` readable doubles; `out` must be writable.
enum LtStatus lt_sample_new(const double *x, const double *y, size_t len, struct LtSample **out);

// Reads two columns of a CSV file; `NA` and empty fields mark missing rows,
// which are dropped.
//
// # Safety
// String arguments must be valid NUL-terminated UTF-8; `out` must be writable.
enum LtStatus lt_sample_read_csv(const char *path,
                                 const char *x_column,
                                 const char *y_column,
                                 struct LtSample **out);

// Number of observations, or 0 for a null handle.
//
// # Safety
// `sample` must be null or a live handle from `lt_sample_new`.
size_t lt_sample_len(const struct LtSample *sample);

// # Safety
// `sample` must be null or a handle not yet freed.
void lt_sample_free(struct LtSample *sample);

// Builds the loss profile of `sample` under `config`.
//
// # Safety
// `sample` must be a live handle, `config` readable and `out` writable.
enum LtStatus lt_profile_new(const struct LtSample *sample,
                             const struct LtPenaltyConfig *config,
                             struct LtProfile **out);

// Number of candidates, or 0 for a null handle.
//
// # Safety
// `profile` must be null or a live handle.
size_t lt_profile_len(const struct LtProfile *profile);

// Search cutoff gamma_n, or NaN for a null handle.
//
// # Safety
// `profile` must be null or a live handle.
double lt_profile_gamma_n(const struct LtProfile *profile);

// Penalty weight lambda_n, or NaN for a null handle.
//
// # Safety
// `profile` must be null or a live handle.
double lt_profile_lambda_n(const struct LtProfile *profile);

// # Safety
// `profile` must be a live handle and `out` writable.
enum LtStatus lt_profile_entry(const struct LtProfile *profile,
                               size_t index,
                               struct LtProfileEntry *out);

// Penalized argmin of a profile (no refit).
//
// # Safety
// `profile` must be a live handle and `out` writable.
enum LtStatus lt_profile_estimate(const struct LtProfile *profile, struct LtEstimate *out);

// # Safety
// `profile` must be null or a handle not yet freed.
void lt_profile_free(struct LtProfile *profile);

// Estimates the threshold; when `with_refit` is true also refits on
// x >= u_hat + psi.
//
// # Safety
// `sample` must be a live handle, `config` readable and `out` writable.
enum LtStatus lt_estimate(const struct LtSample *sample,
                          const struct LtPenaltyConfig *config,
                          bool with_refit,
                          double psi,
                          struct LtEstimate *out);

// Least-squares refit on x >= u_hat + psi with Wald statistics.
//
// # Safety
// `sample` must be a live handle and `out` writable.
enum LtStatus lt_refit(const struct LtSample *sample,
                       double u_hat,
                       double psi,
                       struct LtRefit *out);

// Writes u_hat(c) for each of the `len` values of a non-decreasing grid into
// `out_u_hat`. The `c` field of `config` is ignored.
//
// # Safety
// `grid` must hold `len` readable doubles and `out_u_hat` room for `len`.
enum LtStatus lt_c_sweep(const struct LtSample *sample,
                         const struct LtPenaltyConfig *config,
                         const double *grid,
                         size_t len,
                         double *out_u_hat);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINTHRESH_H */
