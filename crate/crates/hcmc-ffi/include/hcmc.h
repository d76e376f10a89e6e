#ifndef HCMC_H
#define HCMC_H

/* Generated by cbindgen from the hcmc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  HCMC_STATUS_OK = 0,
  HCMC_STATUS_NULL_POINTER = 1,
  HCMC_STATUS_INVALID_ARGUMENT = 2,
  HCMC_STATUS_NOT_CONVEX = 3,
  HCMC_STATUS_MESH = 4,
  HCMC_STATUS_NO_CAP = 5,
  HCMC_STATUS_BOUND_UNDEFINED = 6,
  HCMC_STATUS_NO_CONVERGENCE = 7,
  HCMC_STATUS_ANALYSIS = 8,
  HCMC_STATUS_BUFFER_TOO_SMALL = 9,
  HCMC_STATUS_INTERNAL = 10,
  /**
   * All verification checks ran; at least one applicable check failed.
   */
  HCMC_STATUS_CHECKS_FAILED = 11,
} HcmcStatus;

/**
 * Opaque strictly convex planar domain.
 */
typedef struct HcmcDomain HcmcDomain;

/**
 * Opaque converged solution field.
 */
typedef struct HcmcSolution HcmcSolution;

/**
 * Closed-form spherical cap over a disc, by value.
 */
typedef struct {
  double mean_curvature;
  double radius;
  double boundary_height;
  double sphere_radius;
  double center_height;
  double max_height;
} HcmcRadialCap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Detail message for the most recent failure on this thread, or NULL.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *hcmc_last_error_message(void);

/**
 * Disc of radius `radius` centred at `(cx, cy)`.
 */
HcmcStatus hcmc_domain_new_disc(double radius, double cx, double cy, HcmcDomain **out);

/**
 * Axis-aligned ellipse with semi-axes `(semi_x, semi_y)` centred at `(cx, cy)`.
 */
HcmcStatus hcmc_domain_new_ellipse(double semi_x,
                                   double semi_y,
                                   double cx,
                                   double cy,
                                   HcmcDomain **out);

/**
 * Domain bounded by a closed curve through `n` points given as interleaved
 * `x0, y0, x1, y1, …` (2n doubles), splined periodically.
 *
 * # Safety
 * `xy` must point to `2 * n` readable doubles.
 */
HcmcStatus hcmc_domain_new_curve(const double *xy, uintptr_t n, HcmcDomain **out);

/**
 * # Safety
 * `domain` must have been returned by a `hcmc_domain_new_*` call and not
 * freed yet; NULL is allowed and ignored.
 */
void hcmc_domain_free(HcmcDomain *domain);

/**
 * Radius of the minimum enclosing circle of the boundary.
 *
 * # Safety
 * `domain` must be a live handle; `out` must be writable.
 */
HcmcStatus hcmc_domain_circumradius(const HcmcDomain *domain, double *out);

/**
 * Minimum and maximum boundary curvature.
 *
 * # Safety
 * `domain` must be a live handle; outputs must be writable.
 */
HcmcStatus hcmc_domain_curvature_extrema(const HcmcDomain *domain,
                                         double *kappa_min,
                                         double *kappa_max);

/**
 * Exact radial cap for mean curvature `< 1` over a disc of radius `radius`.
 *
 * # Safety
 * `out` must be writable.
 */
HcmcStatus hcmc_radial_cap(double mean_curvature,
                           double radius,
                           double boundary_height,
                           HcmcRadialCap *out);

/**
 * Solvability window for `−1 ≤ H < 0`: solutions exist whenever the squared
 * circumradius is below the returned value.
 *
 * # Safety
 * `out` must be writable.
 */
HcmcStatus hcmc_existence_window(double mean_curvature, double *out);

/**
 * Gradient bound from the solution maximum (`NaN`-free: errors instead).
 *
 * # Safety
 * `out` must be writable.
 */
HcmcStatus hcmc_gradient_bound(double mean_curvature,
                               double u_max,
                               double boundary_height,
                               double *out);

/**
 * Solve the Dirichlet problem with default solver settings.
 *
 * # Safety
 * `domain` must be a live handle; `out` must be writable.
 */
HcmcStatus hcmc_solve(const HcmcDomain *domain,
                      double mean_curvature,
                      double boundary_height,
                      double mesh_size,
                      HcmcSolution **out);

/**
 * # Safety
 * `solution` must have been returned by [`hcmc_solve`] and not freed yet;
 * NULL is allowed and ignored.
 */
void hcmc_solution_free(HcmcSolution *solution);

/**
 * Number of mesh vertices (0 for NULL).
 *
 * # Safety
 * `solution` must be a live handle or NULL.
 */
uintptr_t hcmc_solution_vertex_count(const HcmcSolution *solution);

/**
 * Copy vertex coordinates as interleaved `x0, y0, x1, y1, …` (needs
 * `2 * vertex_count` doubles).
 *
 * # Safety
 * `solution` must be a live handle; `xy` must point to `len` writable doubles.
 */
HcmcStatus hcmc_solution_copy_vertices(const HcmcSolution *solution, double *xy, uintptr_t len);

/**
 * Copy the solution heights (needs `vertex_count` doubles).
 *
 * # Safety
 * `solution` must be a live handle; `u` must point to `len` writable doubles.
 */
HcmcStatus hcmc_solution_copy_heights(const HcmcSolution *solution, double *u, uintptr_t len);

/**
 * Maximum height and maximum gradient norm of the solution.
 *
 * # Safety
 * `solution` must be a live handle; outputs must be writable.
 */
HcmcStatus hcmc_solution_extrema(const HcmcSolution *solution, double *u_max, double *grad_max);

/**
 * Run every theorem check and return the JSON report (free it with
 * [`hcmc_string_free`]). `HCMC_STATUS_CHECKS_FAILED` means the report was
 * produced but an applicable check failed.
 *
 * # Safety
 * Both handles must be live; `json_out` must be writable.
 */
HcmcStatus hcmc_verify_json(const HcmcSolution *solution,
                            const HcmcDomain *domain,
                            char **json_out);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by an hcmc function and not freed yet; NULL is
 * allowed and ignored.
 */
void hcmc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HCMC_H */
