#ifndef PSEUDOHEAT_H
#define PSEUDOHEAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result code of every fallible call.
 */
typedef enum PhStatus {
  PH_STATUS_OK = 0,
  PH_STATUS_NULL_POINTER = 1,
  PH_STATUS_INVALID_ORDER = 2,
  PH_STATUS_INVALID_TIME = 3,
  PH_STATUS_INVALID_PARAMETER = 4,
  PH_STATUS_POLE = 5,
  PH_STATUS_RANGE = 6,
  PH_STATUS_METHOD_RANGE = 7,
  PH_STATUS_METHOD_MISMATCH = 8,
  PH_STATUS_ORACLE_FAILURE = 9,
  PH_STATUS_QUADRATURE = 10,
  PH_STATUS_NUMERIC = 11,
  PH_STATUS_NON_FINITE = 12,
  PH_STATUS_PANIC = 13,
} PhStatus;

/*
 Evaluation method for [`ph_eval`].
 */
typedef enum PhMethod {
  PH_METHOD_AUTO = 0,
  PH_METHOD_SERIES = 1,
  PH_METHOD_DAMPED = 2,
  PH_METHOD_FOURIER = 3,
  PH_METHOD_AIRY = 4,
  PH_METHOD_CONTOUR = 5,
} PhMethod;

/*
 Opaque numeric settings.
 */
typedef struct PhControls PhControls;

/*
 Opaque seeded random stream.
 */
typedef struct PhSampler PhSampler;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static, NUL-terminated description of `status`. Never null.
 */
const char *ph_status_message(enum PhStatus status);

/*
 Library version as a static NUL-terminated string.
 */
const char *ph_version(void);

/*
 New settings with default values. Free with [`ph_controls_free`].
 */
struct PhControls *ph_controls_new(void);

/*
 # Safety
 `controls` must come from [`ph_controls_new`] and not be freed already, or be null.
 */
void ph_controls_free(struct PhControls *controls);

/*
 Sets both the series relative tolerance and the quadrature absolute tolerance.

 # Safety
 `controls` must be a live handle.
 */
enum PhStatus ph_controls_set_tolerance(struct PhControls *controls, double tol);

/*
 # Safety
 `controls` must be a live handle.
 */
enum PhStatus ph_controls_set_max_terms(struct PhControls *controls, uintptr_t terms);

/*
 Fundamental solution `u_m(x, t)`. `mirrored` selects the opposite sign of
 an odd-order equation. `out_abs_err` may be null.

 # Safety
 `controls` must be null or a live handle; `out_value` must be writable.
 */
enum PhStatus ph_eval(const struct PhControls *controls,
                      uint32_t m,
                      bool mirrored,
                      enum PhMethod method,
                      double x,
                      double t,
                      double *out_value,
                      double *out_abs_err);

/*
 Airy function `Ai(w)`.

 # Safety
 `out` must be writable.
 */
enum PhStatus ph_airy_ai(double w, double *out);

/*
 Gamma function.

 # Safety
 `out` must be writable.
 */
enum PhStatus ph_gamma(double x, double *out);

/*
 Two-parameter Mittag-Leffler function `E_{alpha,beta}(z)`.

 # Safety
 `out` must be writable.
 */
enum PhStatus ph_mittag_leffler(double alpha, double beta, double z, double *out);

/*
 Characteristic function of the stable law with index `alpha`, skewness
 parameter `nu` and time `t`, at `beta`.

 # Safety
 `out_re` and `out_im` must be writable.
 */
enum PhStatus ph_stable_cf(double alpha,
                           double nu,
                           double t,
                           double beta,
                           double *out_re,
                           double *out_im);

/*
 Characteristic function of the depth-`depth` composition `Z_depth(t)` at `beta`.

 # Safety
 `out_re` and `out_im` must be writable.
 */
enum PhStatus ph_zn_cf(uint32_t depth, double t, double beta, double *out_re, double *out_im);

/*
 Density of the time-fractional solution `q_alpha(x, t)`, `0 < alpha < 1`.

 # Safety
 `out` must be writable.
 */
enum PhStatus ph_q_alpha(double alpha, double x, double t, double *out);

/*
 New random stream seeded with `seed`. Free with [`ph_sampler_free`].
 */
struct PhSampler *ph_sampler_new(uint64_t seed);

/*
 # Safety
 `sampler` must come from [`ph_sampler_new`] and not be freed already, or be null.
 */
void ph_sampler_free(struct PhSampler *sampler);

/*
 Draws `count` values of the positive stable subordinator `T_alpha(t)` into `out`.

 # Safety
 `sampler` must be a live handle and `out` must hold `count` doubles.
 */
enum PhStatus ph_sample_subordinator(struct PhSampler *sampler,
                                     double alpha,
                                     double t,
                                     uintptr_t count,
                                     double *out);

/*
 Draws `count` values of `Z_depth(t)` into `out`.

 # Safety
 `sampler` must be a live handle and `out` must hold `count` doubles.
 */
enum PhStatus ph_sample_zn(struct PhSampler *sampler,
                           uint32_t depth,
                           double t,
                           uintptr_t count,
                           double *out);

/*
 Draws `count` values of the generalized gamma law with shape `gamma` at time `t`.

 # Safety
 `sampler` must be a live handle and `out` must hold `count` doubles.
 */
enum PhStatus ph_sample_gen_gamma(struct PhSampler *sampler,
                                  double gamma,
                                  double t,
                                  uintptr_t count,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSEUDOHEAT_H */
