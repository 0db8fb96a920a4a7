#ifndef SUBDIFF_H
#define SUBDIFF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an FFI call.
 */
typedef enum SubdiffStatus {
  SUBDIFF_STATUS_OK = 0,
  SUBDIFF_STATUS_INVALID_PARAMETER = 1,
  SUBDIFF_STATUS_DOMAIN = 2,
  SUBDIFF_STATUS_POLE = 3,
  SUBDIFF_STATUS_SERIES_NON_CONVERGENCE = 4,
  SUBDIFF_STATUS_QUADRATURE = 5,
  SUBDIFF_STATUS_PATH_BUDGET = 6,
  SUBDIFF_STATUS_INSTABILITY = 7,
  SUBDIFF_STATUS_NULL_POINTER = 8,
  SUBDIFF_STATUS_BUFFER_TOO_SMALL = 9,
  SUBDIFF_STATUS_PANIC = 10,
} SubdiffStatus;

/**
 * A solved fractional Fokker-Planck run.
 */
typedef struct SubdiffFfpe SubdiffFfpe;

/**
 * Seeded sampler of the subordinator `T` and its inverse `S`.
 */
typedef struct SubdiffSampler SubdiffSampler;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Length in bytes (without the terminating nul) of the last error message on
 * this thread, or 0 if there is none.
 */
size_t subdiff_last_error_length(void);

/**
 * Copies the last error message on this thread into `buf` as a nul-terminated
 * string, truncating to `len - 1` bytes. Returns the number of bytes written
 * without the nul.
 *
 * # Safety
 * `buf` must be valid for `len` bytes of writes, or null when `len` is 0.
 */
size_t subdiff_last_error_message(char *buf, size_t len);

/**
 * Clears the last error message on this thread.
 */
void subdiff_clear_error(void);

/**
 * `Gamma(z)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum SubdiffStatus subdiff_gamma(double z, double *out);

/**
 * `E_alpha(-x)` for `x >= 0`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum SubdiffStatus subdiff_mittag_leffler_neg(double alpha, double x, double *out);

/**
 * `F_alpha(z)` for `0 < alpha < 1`, `z >= 0`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum SubdiffStatus subdiff_f_alpha(double alpha, double z, double *out);

/**
 * Density of the inverse subordinator `S(t)` at `x`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum SubdiffStatus subdiff_inverse_density(double alpha, double t, double x, double *out);

/**
 * Density of `B_{S(t)}` at `x` with diffusion coefficient `d`, to absolute
 * tolerance `tol`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum SubdiffStatus subdiff_density(double alpha,
                                   double d,
                                   double t,
                                   double x,
                                   double tol,
                                   double *out);

/**
 * Subordinated call price by quadrature in dimensionless units
 * (`beta = 2 r / sigma^2`, `t = sigma^2 t_real / 2`).
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum SubdiffStatus subdiff_price_quadrature(double alpha,
                                            double t,
                                            double spot,
                                            double strike,
                                            double beta,
                                            double tol,
                                            double *out);

/**
 * Monte Carlo subordinated call price with its standard error.
 *
 * # Safety
 * `price` and `std_error` must each be valid for one write.
 */
enum SubdiffStatus subdiff_price_mc(double alpha,
                                    double t,
                                    double spot,
                                    double strike,
                                    double beta,
                                    uint64_t seed,
                                    size_t n_paths,
                                    double dtau,
                                    double *price,
                                    double *std_error);

/**
 * Creates a sampler. Draws of `S(t)` need `t <= t_max`.
 *
 * # Safety
 * `out` must be valid for one write. The handle must be released with
 * [`subdiff_sampler_free`].
 */
enum SubdiffStatus subdiff_sampler_new(double alpha,
                                       uint64_t seed,
                                       double dtau,
                                       double t_max,
                                       struct SubdiffSampler **out);

/**
 * Releases a sampler; null is ignored.
 *
 * # Safety
 * `sampler` must come from [`subdiff_sampler_new`] and not be used afterwards.
 */
void subdiff_sampler_free(struct SubdiffSampler *sampler);

/**
 * Fills `out[0..n]` with independent draws of `S(t)`. The draws depend only
 * on the sampler's seed and `n`, never on the worker count.
 *
 * # Safety
 * `sampler` must be a live handle and `out` valid for `n` writes.
 */
enum SubdiffStatus subdiff_sampler_inverse(const struct SubdiffSampler *sampler,
                                           double t,
                                           size_t n,
                                           double *out);

/**
 * Fills `out[0..n]` with independent draws of `T(tau)`.
 *
 * # Safety
 * `sampler` must be a live handle and `out` valid for `n` writes.
 */
enum SubdiffStatus subdiff_sampler_stable(const struct SubdiffSampler *sampler,
                                          double tau,
                                          size_t n,
                                          double *out);

/**
 * Solves the fractional Fokker-Planck equation on `[-x_max, x_max]` with step
 * `dx`, from a Gaussian of operational age `tau0`, up to `t_end`. The time
 * step is `safety` times the largest stable step.
 *
 * # Safety
 * `out` must be valid for one write. The handle must be released with
 * [`subdiff_ffpe_free`].
 */
enum SubdiffStatus subdiff_ffpe_solve(double alpha,
                                      double d,
                                      double x_max,
                                      double dx,
                                      double t_end,
                                      double tau0,
                                      double safety,
                                      struct SubdiffFfpe **out);

/**
 * Releases a solution; null is ignored.
 *
 * # Safety
 * `ffpe` must come from [`subdiff_ffpe_solve`] and not be used afterwards.
 */
void subdiff_ffpe_free(struct SubdiffFfpe *ffpe);

/**
 * Number of spatial points and of time points (including `t = 0`).
 *
 * # Safety
 * `ffpe` must be a live handle; `nx` and `nt` valid for one write each.
 */
enum SubdiffStatus subdiff_ffpe_shape(const struct SubdiffFfpe *ffpe, size_t *nx, size_t *nt);

/**
 * Copies the spatial grid into `out`, which holds `len` values.
 *
 * # Safety
 * `ffpe` must be a live handle and `out` valid for `len` writes.
 */
enum SubdiffStatus subdiff_ffpe_x_grid(const struct SubdiffFfpe *ffpe, double *out, size_t len);

/**
 * Copies the density at time index `n` into `out` and its time into `t`.
 *
 * # Safety
 * `ffpe` must be a live handle, `out` valid for `len` writes and `t` for one.
 */
enum SubdiffStatus subdiff_ffpe_profile(const struct SubdiffFfpe *ffpe,
                                        size_t n,
                                        double *t,
                                        double *out,
                                        size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBDIFF_H */
