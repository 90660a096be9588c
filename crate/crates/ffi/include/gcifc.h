#ifndef GCIFC_H
#define GCIFC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GcifcStatus {
  GCIFC_STATUS_OK = 0,
  GCIFC_STATUS_NULL_POINTER = 1,
  /**
   * An argument lies outside the domain of the operation.
   */
  GCIFC_STATUS_DOMAIN = 2,
  /**
   * An index is out of range.
   */
  GCIFC_STATUS_OUT_OF_RANGE = 3,
  /**
   * A Rust panic was caught at the boundary.
   */
  GCIFC_STATUS_PANIC = 4,
} GcifcStatus;

/**
 * Opaque channel handle.
 */
typedef struct GcifcChannel GcifcChannel;

/**
 * Opaque region handle: a convex polygon with counterclockwise vertices
 * starting at the origin.
 */
typedef struct GcifcRegion GcifcRegion;

/**
 * Pentagon caps `R1 <= r1_max`, `R2 <= r2_max`, `R1 + R2 <= sum_max`.
 */
typedef struct GcifcConstraints {
  double r1_max;
  double r2_max;
  double sum_max;
} GcifcConstraints;

typedef struct GcifcRatePair {
  double r1;
  double r2;
} GcifcRatePair;

typedef struct GcifcRegime {
  bool weak;
  bool very_strong;
  bool primary_decodes_cognitive;
  bool degraded;
  bool gap_condition_a;
} GcifcRegime;

typedef struct GcifcCorners {
  struct GcifcRatePair a;
  struct GcifcRatePair b;
  struct GcifcRatePair c;
} GcifcCorners;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *gcifc_status_message(enum GcifcStatus status);

/**
 * Message for the last failure on this thread, or null if there was none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *gcifc_last_error(void);

/**
 * `log2(1 + x)` for `x >= 0`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum GcifcStatus gcifc_cap_c(double x, double *out);

/**
 * Creates a channel with cross gains `a = a_re + i a_im`, `|b|` and powers
 * `P1`, `P2`.
 *
 * # Safety
 * `out` must be null or valid for writes. On success `*out` owns a handle
 * that must be released with [`gcifc_channel_free`].
 */
enum GcifcStatus gcifc_channel_new(double a_re,
                                   double a_im,
                                   double b_mag,
                                   double p1,
                                   double p2,
                                   struct GcifcChannel **out);

/**
 * # Safety
 * `ch` must be null or a handle from [`gcifc_channel_new`] not yet freed.
 */
void gcifc_channel_free(struct GcifcChannel *ch);

/**
 * Outer bound caps at power split `alpha`.
 *
 * # Safety
 * `ch` must be null or a live channel handle; `out` null or valid for writes.
 */
enum GcifcStatus gcifc_outer_constraints(const struct GcifcChannel *ch,
                                         double alpha,
                                         struct GcifcConstraints *out);

/**
 * Caps achieved by the scheme at `(alpha, lambda)`, clamped at zero.
 *
 * # Safety
 * `ch` must be null or a live channel handle; `out` null or valid for writes.
 */
enum GcifcStatus gcifc_achievable_constraints(const struct GcifcChannel *ch,
                                              double alpha,
                                              double lambda_re,
                                              double lambda_im,
                                              struct GcifcConstraints *out);

/**
 * Outer bound region over a uniform grid of `alpha_grid` power splits.
 *
 * # Safety
 * `ch` must be null or a live channel handle; `out` null or valid for
 * writes. On success `*out` must be released with [`gcifc_region_free`].
 */
enum GcifcStatus gcifc_outer_region(const struct GcifcChannel *ch,
                                    size_t alpha_grid,
                                    struct GcifcRegion **out);

/**
 * Achievable region with `lambda` swept over `[0, lambda_span * lambda_Costa1]`.
 *
 * # Safety
 * As for [`gcifc_outer_region`].
 */
enum GcifcStatus gcifc_achievable_region(const struct GcifcChannel *ch,
                                         size_t alpha_grid,
                                         size_t lambda_grid,
                                         double lambda_span,
                                         struct GcifcRegion **out);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live region handle.
 */
size_t gcifc_region_len(const struct GcifcRegion *r);

/**
 * # Safety
 * `r` must be null or a live region handle; `out` null or valid for writes.
 */
enum GcifcStatus gcifc_region_vertex(const struct GcifcRegion *r,
                                     size_t index,
                                     struct GcifcRatePair *out);

/**
 * # Safety
 * `r` must be null or a region handle not yet freed.
 */
void gcifc_region_free(struct GcifcRegion *r);

/**
 * # Safety
 * `ch` must be null or a live channel handle; `out` null or valid for writes.
 */
enum GcifcStatus gcifc_classify(const struct GcifcChannel *ch, struct GcifcRegime *out);

/**
 * Corner points `A`, `B`, `C`; requires `|b| > 1`.
 *
 * # Safety
 * `ch` must be null or a live channel handle; `out` null or valid for writes.
 */
enum GcifcStatus gcifc_corner_points(const struct GcifcChannel *ch, struct GcifcCorners *out);

/**
 * Additive gap in bits; requires `|b| > 1`.
 *
 * # Safety
 * `ch` must be null or a live channel handle; `out` null or valid for writes.
 */
enum GcifcStatus gcifc_additive_gap(const struct GcifcChannel *ch, double *out);

/**
 * Real sum-rate-optimal `lambda` values at `alpha`, in increasing order.
 * Writes at most two roots to `roots` and their number to `count`.
 *
 * # Safety
 * `ch` must be null or a live channel handle; `roots` null or valid for
 * two writes; `count` null or valid for writes.
 */
enum GcifcStatus gcifc_sum_rate_roots(const struct GcifcChannel *ch,
                                      double alpha,
                                      double *roots,
                                      size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCIFC_H */
