#ifndef BALLBODY_H
#define BALLBODY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BbStatus {
  BB_STATUS_OK = 0,
  BB_STATUS_INVALID_ARGUMENT = 1,
  BB_STATUS_NULL_POINTER = 2,
  BB_STATUS_DIMENSION_MISMATCH = 3,
  BB_STATUS_HULL_EMPTY = 4,
  BB_STATUS_EMPTY_BODY = 5,
  BB_STATUS_NO_CONVERGENCE = 6,
  BB_STATUS_PARSE = 7,
  BB_STATUS_IO = 8,
  BB_STATUS_PANIC = 9,
} BbStatus;

typedef enum BbBodyStatus {
  BB_BODY_STATUS_EMPTY = 0,
  BB_BODY_STATUS_POINT = 1,
  BB_BODY_STATUS_FULL_DIM = 2,
} BbBodyStatus;

typedef enum BbMethod {
  BB_METHOD_EXACT = 0,
  BB_METHOD_ARC_POLYGON = 1,
  BB_METHOD_MONTE_CARLO_VOLUME = 2,
  BB_METHOD_MEAN_WIDTH = 3,
  BB_METHOD_KUBOTA = 4,
} BbMethod;

typedef enum BbThresholdMode {
  BB_THRESHOLD_MODE_MAIN_I = 0,
  BB_THRESHOLD_MODE_MAIN_II = 1,
  BB_THRESHOLD_MODE_PACKING = 2,
  BB_THRESHOLD_MODE_JUNG_B = 3,
  BB_THRESHOLD_MODE_REFINED_A = 4,
  BB_THRESHOLD_MODE_REFINED_B = 5,
} BbThresholdMode;

typedef enum BbBoundCase {
  BB_BOUND_CASE_TRIVIAL_EMPTY = 0,
  BB_BOUND_CASE_PACKING_EMPTY_NAIVE = 1,
  BB_BOUND_CASE_PACKING_EMPTY_SAUSAGE = 2,
  BB_BOUND_CASE_JUNG_CHAIN_NAIVE = 3,
  BB_BOUND_CASE_JUNG_CHAIN_REFINED = 4,
  BB_BOUND_CASE_NOT_COVERED = 5,
} BbBoundCase;

/**
 * Opaque r-ball body.
 */
typedef struct BbBallBody BbBallBody;

/**
 * Opaque point set.
 */
typedef struct BbPointSet BbPointSet;

typedef struct BbEstimatorConfig {
  uint64_t samples;
  uint64_t seed;
  double confidence_z;
  double feasibility_tolerance;
  uint64_t max_projection_iters;
  uint64_t directions;
} BbEstimatorConfig;

typedef struct BbEstimate {
  double value;
  double std_error;
  uint64_t samples_used;
  enum BbMethod method;
  uint64_t flagged;
} BbEstimate;

typedef struct BbThreshold {
  double value;
  double minimal_n;
  bool applicable;
} BbThreshold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *bb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bb_version(void);

/**
 * Builds a point set from `n` points of dimension `dim`, stored row-major.
 *
 * # Safety
 * `coords` must point to `n * dim` readable doubles; `out` must be writable.
 */
enum BbStatus bb_point_set_new(size_t dim,
                               const double *coords_ptr,
                               size_t n,
                               struct BbPointSet **out);

/**
 * # Safety
 * `ps` must be null or a handle from `bb_point_set_new`, not yet freed.
 */
void bb_point_set_free(struct BbPointSet *ps);

/**
 * # Safety
 * `ps` must be a live handle.
 */
size_t bb_point_set_len(const struct BbPointSet *ps);

/**
 * # Safety
 * `ps` must be a live handle.
 */
size_t bb_point_set_dim(const struct BbPointSet *ps);

/**
 * Radius of the minimal enclosing ball; its center is written to
 * `out_center` (`dim` doubles) unless that is null.
 *
 * # Safety
 * `ps` must be a live handle; `out_radius` writable; `out_center` null or
 * writable for `dim` doubles.
 */
enum BbStatus bb_circumradius(const struct BbPointSet *ps, double *out_radius, double *out_center);

/**
 * `X^r`, the intersection of the radius-`r` balls centered at the points.
 *
 * # Safety
 * `ps` must be a live handle; `out` writable.
 */
enum BbStatus bb_dual(const struct BbPointSet *ps, double radius, struct BbBallBody **out);

/**
 * # Safety
 * `body` must be null or a handle from `bb_dual`, not yet freed.
 */
void bb_ball_body_free(struct BbBallBody *body);

/**
 * # Safety
 * `body` must be a live handle; `out` writable.
 */
enum BbStatus bb_ball_body_status(const struct BbBallBody *body, enum BbBodyStatus *out);

/**
 * Exact membership of a `dim`-vector.
 *
 * # Safety
 * `body` must be a live handle; `q` readable for `dim` doubles; `out` writable.
 */
enum BbStatus bb_ball_body_contains(const struct BbBallBody *body,
                                    const double *q,
                                    size_t dim,
                                    bool *out);

struct BbEstimatorConfig bb_estimator_config_default(void);

/**
 * `V_k` of the body: exact in the plane, estimated otherwise. A null
 * `cfg` uses the defaults.
 *
 * # Safety
 * `body` must be a live handle; `cfg` null or readable; `out` writable.
 */
enum BbStatus bb_ball_body_intrinsic_volume(const struct BbBallBody *body,
                                            size_t k,
                                            const struct BbEstimatorConfig *cfg,
                                            struct BbEstimate *out);

/**
 * `V_k` of a `d`-ball of the given radius.
 *
 * # Safety
 * `out` must be writable.
 */
enum BbStatus bb_ball_intrinsic_volume(size_t d, size_t k, double radius, double *out);

/**
 * Area and `V_1` (half the perimeter) of a planar `X^r`.
 *
 * # Safety
 * `ps` must be a live planar handle; outputs writable.
 */
enum BbStatus bb_disk_intersection_metrics(const struct BbPointSet *ps,
                                           double radius,
                                           double *out_area,
                                           double *out_v1);

/**
 * Area and `V_1` of the planar ball hull of the points.
 *
 * # Safety
 * `ps` must be a live planar handle; outputs writable.
 */
enum BbStatus bb_spindle_hull_metrics(const struct BbPointSet *ps,
                                      double radius,
                                      double *out_area,
                                      double *out_v1);

/**
 * Threshold on `N`. `r` and `lambda` are read only by the packing modes.
 *
 * # Safety
 * `out` must be writable.
 */
enum BbStatus bb_threshold_n(size_t d,
                             enum BbThresholdMode mode,
                             double r,
                             double lambda,
                             struct BbThreshold *out);

/**
 * Which argument settles the comparison for `(d, N, λ, r)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BbStatus bb_classify_instance(size_t d,
                                   uint64_t n,
                                   double lambda,
                                   double r,
                                   enum BbBoundCase *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLBODY_H */
