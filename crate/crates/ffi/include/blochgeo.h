#ifndef BLOCHGEO_H
#define BLOCHGEO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum BgStatus {
  BG_STATUS_OK = 0,
  BG_STATUS_NULL_POINTER = 1,
  // A string argument is not valid UTF-8.
  BG_STATUS_INVALID_STRING = 2,
  BG_STATUS_UNKNOWN_ID = 3,
  BG_STATUS_DOMAIN = 4,
  BG_STATUS_INVALID_SPEC = 5,
  BG_STATUS_QUADRATURE_FAILURE = 6,
  BG_STATUS_NON_NORMALIZABLE = 7,
  BG_STATUS_DIVERGENT = 8,
  BG_STATUS_NOT_CONSTANT_CURVATURE = 9,
  BG_STATUS_INTERNAL = 10,
  // The library panicked; this is a bug.
  BG_STATUS_PANIC = 11,
} BgStatus;

// A rotationally symmetric Riemannian metric on the Bloch ball.
typedef struct BgMetric BgMetric;

// A normalized prior density on the Bloch ball.
typedef struct BgPrior BgPrior;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failing call on this thread, or an empty
// string. Valid until the next call into the library on this thread.
const char *bg_last_error(void);

// Library version as a static NUL-terminated string.
const char *bg_version(void);

// Creates a metric from its identifier, e.g. `"bures"` or `"fisher-hus"`.
// `q` is the escort index; pass NaN when the identifier does not use one.
//
// # Safety
// `id` must be a NUL-terminated string and `out` a valid pointer.
enum BgStatus bg_metric_new(const char *id, double q, struct BgMetric **out);

// Releases a metric. Null is ignored.
//
// # Safety
// `m` must come from [`bg_metric_new`] and not be used afterwards.
void bg_metric_free(struct BgMetric *m);

// Radial and tangential components `A(r)`, `B(r)` of
// `ds² = A dr² + B r² dΩ²`.
//
// # Safety
// `m` must be a live handle; `a` and `b` valid pointers.
enum BgStatus bg_metric_components(const struct BgMetric *m, double r, double *a, double *b);

// Scalar curvature at radius `0 ≤ r < 1`.
//
// # Safety
// `m` must be a live handle; `out` a valid pointer.
enum BgStatus bg_metric_scalar_curvature(const struct BgMetric *m, double r, double *out);

// Distance from the fully mixed state to radius `r` along a radius.
//
// # Safety
// `m` must be a live handle; `out` a valid pointer.
enum BgStatus bg_metric_radial_distance(const struct BgMetric *m, double r, double *out);

// Creates a prior from its identifier, e.g. `"bures"`, `"hus"`, `"wigner"`.
// Fails with `NON_NORMALIZABLE` when the volume element cannot be normalized.
//
// # Safety
// `id` must be a NUL-terminated string and `out` a valid pointer.
enum BgStatus bg_prior_new(const char *id, struct BgPrior **out);

// Releases a prior. Null is ignored.
//
// # Safety
// `p` must come from [`bg_prior_new`] and not be used afterwards.
void bg_prior_free(struct BgPrior *p);

// Constant dividing the unnormalized density (the volume, for metric priors).
//
// # Safety
// `p` must be a live handle; `out` a valid pointer.
enum BgStatus bg_prior_normalizer(const struct BgPrior *p, double *out);

// Density with respect to Lebesgue measure at the Bloch vector `(x, y, z)`.
//
// # Safety
// `p` must be a live handle; `out` a valid pointer.
enum BgStatus bg_prior_density(const struct BgPrior *p, double x, double y, double z, double *out);

// Relative entropy `S(p || q)` in nats.
//
// # Safety
// `p`, `q` must be live handles; `out` a valid pointer.
enum BgStatus bg_kl_divergence(const struct BgPrior *p, const struct BgPrior *q, double *out);

// Constant `c` of the quantum redundancy `1.5 log N + c` under a
// rotationally symmetric prior.
//
// # Safety
// `p` must be a live handle; `out` a valid pointer.
enum BgStatus bg_redundancy_constant(const struct BgPrior *p, double *out);

// Classical redundancy constant for a three-parameter family of the given
// Fisher volume. Returns NaN for a non-positive volume.
double bg_classical_redundancy_constant(double volume);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCHGEO_H */
