#ifndef PAINLEVE_H
#define PAINLEVE_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PiiStatus {
  PII_STATUS_OK = 0,
  PII_STATUS_NULL_POINTER = 1,
  PII_STATUS_DOMAIN = 2,
  PII_STATUS_VALIDATION = 3,
  PII_STATUS_CONTRACT = 4,
  PII_STATUS_CONVERGENCE = 5,
  PII_STATUS_DEGENERATE_BASIS = 6,
  PII_STATUS_CLASSIFICATION = 7,
  PII_STATUS_INVALID_CONVERSION = 8,
  /**
   * Output buffer length does not match what the call produces.
   */
  PII_STATUS_BUFFER_SIZE = 9,
  PII_STATUS_PANIC = 10,
} PiiStatus;

typedef enum PiiSolutionType {
  PII_SOLUTION_TYPE_A = 0,
  PII_SOLUTION_TYPE_B = 1,
  PII_SOLUTION_TYPE_NULL = 2,
} PiiSolutionType;

typedef enum PiiVerdict {
  PII_VERDICT_UNDETERMINED = 0,
  PII_VERDICT_CONVERGENT = 1,
  PII_VERDICT_DIVERGENT = 2,
} PiiVerdict;

/**
 * Converged solution of the supplementary problem.
 */
typedef struct PiiReference PiiReference;

/**
 * Perturbation series, extended on demand.
 */
typedef struct PiiSeries PiiSeries;

typedef struct PiiAiryQuad {
  double ai;
  double bi;
  double ai_prime;
  double bi_prime;
} PiiAiryQuad;

typedef struct PiiParameters {
  double sigma;
  double tau;
  double nu;
  double mu;
} PiiParameters;

/**
 * Painlevé II data: interval `[a, b]`, constant `c`, and the scale and
 * shift of `z = beta * x + gamma`.
 */
typedef struct PiiInstance {
  double a;
  double b;
  double c;
  double beta;
  double gamma;
} PiiInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *pii_last_error_message(void);

/**
 * `Ai`, `Bi` and derivatives at `t`, `|t| <= 30`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `PiiAiryQuad`.
 */
enum PiiStatus pii_airy_eval(double t, struct PiiAiryQuad *out);

/**
 * Solves the supplementary problem on a uniform grid of `grid_size` nodes
 * (odd, at least 257). On success `*out` owns a new handle.
 *
 * # Safety
 * `p` must point to a `PiiParameters`; `out` to writable handle storage.
 */
enum PiiStatus pii_reference_solve(const struct PiiParameters *p,
                                   size_t grid_size,
                                   double tol,
                                   struct PiiReference **out);

/**
 * # Safety
 * `h` must be null or a handle from `pii_reference_solve` not yet freed.
 */
void pii_reference_free(struct PiiReference *h);

/**
 * # Safety
 * `h` must be a live handle; the out pointers may be null.
 */
enum PiiStatus pii_reference_endpoints(const struct PiiReference *h,
                                       double *e0,
                                       double *e1,
                                       enum PiiSolutionType *kind);

/**
 * Node count of the solution grid.
 *
 * # Safety
 * `h` must be a live handle; `len` writable.
 */
enum PiiStatus pii_reference_len(const struct PiiReference *h, size_t *len);

/**
 * Copies nodes, values and derivatives. Each non-null buffer must hold
 * exactly `len` doubles, the grid node count.
 *
 * # Safety
 * `h` must be a live handle; non-null buffers must be writable for `len` doubles.
 */
enum PiiStatus pii_reference_profile(const struct PiiReference *h,
                                     double *x,
                                     double *e,
                                     double *e_prime,
                                     size_t len);

/**
 * Maps endpoint values to Painlevé II data.
 *
 * # Safety
 * `p` and `out` must be valid pointers.
 */
enum PiiStatus pii_convert(double e0,
                           double e1,
                           const struct PiiParameters *p,
                           struct PiiInstance *out);

/**
 * Creates an empty series on a grid of `grid_size` nodes.
 *
 * # Safety
 * `p` must point to a `PiiParameters`; `out` to writable handle storage.
 */
enum PiiStatus pii_series_new(const struct PiiParameters *p,
                              size_t grid_size,
                              struct PiiSeries **out);

/**
 * # Safety
 * `h` must be null or a handle from `pii_series_new` not yet freed.
 */
void pii_series_free(struct PiiSeries *h);

/**
 * Builds terms up to order `up_to` (at most 500).
 *
 * # Safety
 * `h` must be a live handle.
 */
enum PiiStatus pii_series_extend(struct PiiSeries *h, size_t up_to);

/**
 * Number of terms built so far.
 *
 * # Safety
 * `h` must be a live handle; `len` writable.
 */
enum PiiStatus pii_series_len(const struct PiiSeries *h, size_t *len);

/**
 * Discrepancy `max |S_n - E| + max |S_n' - E'|` of the order-`n` partial sum
 * against a reference solved on the same grid.
 *
 * # Safety
 * `h` and `r` must be live handles; `out` writable.
 */
enum PiiStatus pii_series_delta(const struct PiiSeries *h,
                                const struct PiiReference *r,
                                size_t n,
                                double *out);

/**
 * Painlevé II data of the order-`n` approximant. `*valid` is false when the
 * partial sums give no real interval; `*out` is then left untouched.
 *
 * # Safety
 * `h` must be a live handle; `out` and `valid` writable.
 */
enum PiiStatus pii_series_approximant(const struct PiiSeries *h,
                                      size_t n,
                                      struct PiiInstance *out,
                                      bool *valid);

/**
 * Runs the direct Painlevé II series for the instance converted from `r`
 * through order `len`, writing one discrepancy and verdict per order.
 *
 * # Safety
 * `r` must be a live handle; `discrepancies` and `verdicts` must be
 * writable for `len` elements (either may be null).
 */
enum PiiStatus pii_direct_run(const struct PiiReference *r,
                              double *discrepancies,
                              enum PiiVerdict *verdicts,
                              size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAINLEVE_H */
