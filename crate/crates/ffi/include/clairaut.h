#ifndef CLAIRAUT_H
#define CLAIRAUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ClairautCausal {
  CLAIRAUT_CAUSAL_SPACELIKE = 0,
  CLAIRAUT_CAUSAL_TIMELIKE = 1,
  CLAIRAUT_CAUSAL_NULL = 2,
} ClairautCausal;

typedef enum ClairautFamily {
  CLAIRAUT_FAMILY_HYPERBOLIC14 = 0,
  CLAIRAUT_FAMILY_HYPERBOLIC23 = 1,
  CLAIRAUT_FAMILY_ELLIPTIC56 = 2,
} ClairautFamily;

typedef enum ClairautStatus {
  CLAIRAUT_STATUS_OK = 0,
  CLAIRAUT_STATUS_NULL_POINTER = 1,
  CLAIRAUT_STATUS_INVALID_ARGUMENT = 2,
  CLAIRAUT_STATUS_PARSE_ERROR = 3,
  CLAIRAUT_STATUS_OUTSIDE_DOMAIN = 4,
  CLAIRAUT_STATUS_DEGENERATE_METRIC = 5,
  CLAIRAUT_STATUS_NOT_TIMELIKE = 6,
  CLAIRAUT_STATUS_NUMERICAL = 7,
  CLAIRAUT_STATUS_UNSUPPORTED = 8,
  CLAIRAUT_STATUS_PANIC = 9,
} ClairautStatus;

typedef enum ClairautTermination {
  CLAIRAUT_TERMINATION_COMPLETED = 0,
  CLAIRAUT_TERMINATION_DOMAIN_EXIT = 1,
  CLAIRAUT_TERMINATION_DEGENERATE = 2,
  CLAIRAUT_TERMINATION_NON_FINITE = 3,
} ClairautTermination;

typedef enum ClairautVariant {
  CLAIRAUT_VARIANT_A = 0,
  CLAIRAUT_VARIANT_B = 1,
} ClairautVariant;

/*
 Opaque rotational surface.
 */
typedef struct ClairautSurface ClairautSurface;

/*
 Opaque integrated trajectory.
 */
typedef struct ClairautTrajectory ClairautTrajectory;

/*
 Conserved quantities and angle decomposition at one state.
 */
typedef struct ClairautReport {
  double lagrangian;
  double p_u;
  double p_v;
  double invariant1;
  double invariant2;
  double phi;
  double theta;
  double residual;
  bool angles_defined;
} ClairautReport;

typedef struct ClairautSample {
  double s;
  double state[6];
  double lagrangian;
  double p_u;
  double p_v;
  double invariant1;
  double invariant2;
} ClairautSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL if the most
 recent status-returning call succeeded. The pointer stays valid until the next call into the
 library on the same thread.
 */
const char *clairaut_last_error(void);

/*
 Index-2 inner product of two `double[4]`.

 # Safety
 `v` and `w` must point to 4 readable doubles.
 */
double clairaut_inner(const double *v, const double *w);

/*
 # Safety
 `v` must point to 4 readable doubles and `out` to a writable enum.
 */
enum ClairautStatus clairaut_classify(const double *v, double tol, enum ClairautCausal *out);

/*
 Triple cross product of three `double[4]` into `out`.

 # Safety
 `x`, `y`, `z` must point to 4 readable doubles and `out` to 4 writable ones.
 */
enum ClairautStatus clairaut_cross(const double *x, const double *y, const double *z, double *out);

/*
 Largest entry of the Lie-derivative residual of the Killing field with
 coefficients `params = {a, b, c, d, e, f}`.

 # Safety
 `params` must point to 6 readable doubles and `out_max` to a writable double.
 */
enum ClairautStatus clairaut_killing_residual(const double *params, double *out_max);

/*
 Row-major 4×4 rotation of generator `generator` (1..=6) through `s`.

 # Safety
 `out` must point to 16 writable doubles.
 */
enum ClairautStatus clairaut_rotation_matrix(uint32_t generator, double s, double *out);

/*
 Parses the two profile expressions over `[t_min, t_max]` and returns a
 new surface in `*out`. `family` and `variant` take the values of
 [`ClairautFamily`] and [`ClairautVariant`].

 # Safety
 `fa` and `fb` must be NUL-terminated strings; `out` must be writable.
 */
enum ClairautStatus clairaut_surface_new(uint32_t family,
                                         uint32_t variant,
                                         const char *fa,
                                         const char *fb,
                                         double t_min,
                                         double t_max,
                                         struct ClairautSurface **out);

/*
 # Safety
 `surface` must come from [`clairaut_surface_new`] and not be used again.
 */
void clairaut_surface_free(struct ClairautSurface *surface);

/*
 Metric coefficients `{E, G, N}` at `t`.

 # Safety
 `surface` must be a live handle and `out` must point to 3 writable doubles.
 */
enum ClairautStatus clairaut_surface_metric(const struct ClairautSurface *surface,
                                            double t,
                                            double *out);

/*
 Ambient point of `(u, v, t)`.

 # Safety
 `surface` must be a live handle and `out` must point to 4 writable doubles.
 */
enum ClairautStatus clairaut_surface_immerse(const struct ClairautSurface *surface,
                                             double u,
                                             double v,
                                             double t,
                                             double *out);

/*
 Right-hand side of the geodesic system at `state`.

 # Safety
 `surface` must be a live handle, `state` must point to 6 readable doubles
 and `out` to 6 writable ones.
 */
enum ClairautStatus clairaut_geodesic_rhs(const struct ClairautSurface *surface,
                                          const double *state,
                                          double *out);

/*
 Conjugate momenta `{p_u, p_v}` at `state`.

 # Safety
 As for [`clairaut_geodesic_rhs`], with `out` pointing to 2 doubles.
 */
enum ClairautStatus clairaut_momenta(const struct ClairautSurface *surface,
                                     const double *state,
                                     double *out);

/*
 Lagrangian, momenta, Clairaut invariants and angles at `state`.

 # Safety
 `surface` must be a live handle, `state` must point to 6 readable doubles
 and `out` must be writable.
 */
enum ClairautStatus clairaut_report(const struct ClairautSurface *surface,
                                    const double *state,
                                    struct ClairautReport *out);

/*
 Integrates from `state` over arclength `length` with fixed step `step`
 and returns the trajectory in `*out`. An early stop (domain exit,
 degeneracy) still returns `CLAIRAUT_STATUS_OK`; inspect
 [`clairaut_trajectory_termination`].

 # Safety
 `surface` must be a live handle, `state` must point to 6 readable doubles
 and `out` must be writable.
 */
enum ClairautStatus clairaut_integrate(const struct ClairautSurface *surface,
                                       const double *state,
                                       double length,
                                       double step,
                                       struct ClairautTrajectory **out);

/*
 Number of samples, or 0 for a null handle.

 # Safety
 `traj` must be null or a live handle.
 */
size_t clairaut_trajectory_len(const struct ClairautTrajectory *traj);

/*
 # Safety
 `traj` must be a live handle.
 */
enum ClairautTermination clairaut_trajectory_termination(const struct ClairautTrajectory *traj);

/*
 Copies sample `index` into `*out`.

 # Safety
 `traj` must be a live handle and `out` writable.
 */
enum ClairautStatus clairaut_trajectory_sample(const struct ClairautTrajectory *traj,
                                               size_t index,
                                               struct ClairautSample *out);

/*
 # Safety
 `traj` must come from [`clairaut_integrate`] and not be used again.
 */
void clairaut_trajectory_free(struct ClairautTrajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLAIRAUT_H */
