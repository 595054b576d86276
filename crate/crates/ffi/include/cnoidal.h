#ifndef CNOIDAL_H
#define CNOIDAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CNOIDAL_KDV_KDV 0

#define CNOIDAL_BBM_BBM 1

#define CNOIDAL_KDV_BBM 2

#define CNOIDAL_BBM_KDV 3

/**
 * Result of every fallible call.
 */
typedef enum CnoidalStatus {
  CNOIDAL_STATUS_OK = 0,
  CNOIDAL_STATUS_NULL_POINTER = 1,
  CNOIDAL_STATUS_INVALID_ARGUMENT = 2,
  CNOIDAL_STATUS_DOMAIN = 3,
  CNOIDAL_STATUS_NUMERICAL = 4,
  CNOIDAL_STATUS_CONSTRAINT = 5,
  CNOIDAL_STATUS_STENCIL = 6,
  CNOIDAL_STATUS_DEGENERATE = 7,
  CNOIDAL_STATUS_CONFIG = 8,
  CNOIDAL_STATUS_STABILITY = 9,
  CNOIDAL_STATUS_PANIC = 10,
} CnoidalStatus;

/**
 * Opaque solution handle.
 */
typedef struct CnoidalSolution CnoidalSolution;

typedef struct CnoidalPhysical {
  double mu0;
  double mu1;
  double a;
  double b;
  double c;
} CnoidalPhysical;

/**
 * Free parameters of the semi-trivial families.
 */
typedef struct CnoidalFree {
  double h0;
  double d0;
  double h2;
  double shift;
  double omega;
  double m;
  double sigma;
} CnoidalFree;

/**
 * Parameter vector of a solution. `r` is NaN for semi-trivial families.
 */
typedef struct CnoidalParams {
  int system;
  double shift;
  double omega;
  double sigma;
  double lambda;
  double m;
  double r;
  double d0;
  double d1;
  double d2;
  double h0;
  double h1;
  double h2;
} CnoidalParams;

typedef struct CnoidalReport {
  bool passed;
  double max_abs;
  double rms;
  double tolerance;
  double worst_location;
} CnoidalReport;

typedef struct CnoidalPropagation {
  double linf_error_u;
  double linf_error_v;
  double conserved_drift;
  uint64_t steps;
} CnoidalPropagation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a [`CnoidalStatus`] value.
 */
const char *cnoidal_status_message(int status);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`) and returns the length the full message needs,
 * including the terminator; 0 when there is no message.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t cnoidal_last_error(char *buf, size_t len);

/**
 * Complete elliptic integral `K(m)` for modulus `m`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum CnoidalStatus cnoidal_complete_k(double m, double *out_k);

/**
 * `sn`, `cn`, `dn` at argument `u` and modulus `m`.
 *
 * # Safety
 * Output pointers must be null or valid for writes.
 */
enum CnoidalStatus cnoidal_jacobi(double u, double m, double *sn, double *cn, double *dn);

/**
 * Cnoidal member of `system` on the `R` branch `sign` (+1 or −1).
 *
 * # Safety
 * `phys` must point to a valid struct and `out_sol` must be valid for writes.
 */
enum CnoidalStatus cnoidal_solution_cnoidal(int system_kind,
                                            const struct CnoidalPhysical *phys,
                                            double sigma,
                                            double m,
                                            int r_sign,
                                            struct CnoidalSolution **out_sol);

/**
 * Solitary limit; `r_sign` +1 selects `m = R = 1`, −1 selects `m = −R = 1`.
 *
 * # Safety
 * As for [`cnoidal_solution_cnoidal`].
 */
enum CnoidalStatus cnoidal_solution_solitary(int system_kind,
                                             const struct CnoidalPhysical *phys,
                                             double sigma,
                                             int r_sign,
                                             struct CnoidalSolution **out_sol);

/**
 * Semi-trivial family `family` (numbered from 1).
 *
 * # Safety
 * `phys` and `free` must point to valid structs; `out_sol` must be valid for writes.
 */
enum CnoidalStatus cnoidal_solution_semi_trivial(int system_kind,
                                                 const struct CnoidalPhysical *phys,
                                                 uint32_t family,
                                                 const struct CnoidalFree *free,
                                                 struct CnoidalSolution **out_sol);

/**
 * Default free parameters of the semi-trivial families.
 */
struct CnoidalFree cnoidal_free_default(void);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sol` must be null or a handle returned by a constructor and not yet freed.
 */
void cnoidal_solution_free(struct CnoidalSolution *sol);

/**
 * # Safety
 * `sol` must be a live handle; `out_params` must be valid for writes.
 */
enum CnoidalStatus cnoidal_solution_params(const struct CnoidalSolution *sol,
                                           struct CnoidalParams *out_params);

/**
 * Profiles `f(ξ)`, `g(ξ)`.
 *
 * # Safety
 * `sol` must be a live handle; outputs must be valid for writes.
 */
enum CnoidalStatus cnoidal_solution_profiles(const struct CnoidalSolution *sol,
                                             double xi,
                                             double *f,
                                             double *g);

/**
 * Fields `u(x, t)` (real and imaginary parts) and `v(x, t)`.
 *
 * # Safety
 * `sol` must be a live handle; outputs must be valid for writes.
 */
enum CnoidalStatus cnoidal_solution_fields(const struct CnoidalSolution *sol,
                                           double x,
                                           double t,
                                           double *u_re,
                                           double *u_im,
                                           double *v);

/**
 * Scaled coefficient residuals.
 *
 * # Safety
 * `sol` must be a live handle; `out_report` must be valid for writes.
 */
enum CnoidalStatus cnoidal_verify_coefficients(const struct CnoidalSolution *sol,
                                               double tolerance,
                                               struct CnoidalReport *out_report);

/**
 * Scaled ODE residuals at `n_points` points over one period.
 *
 * # Safety
 * `sol` must be a live handle; `out_report` must be valid for writes.
 */
enum CnoidalStatus cnoidal_verify_ode(const struct CnoidalSolution *sol,
                                      size_t n_points,
                                      double tolerance,
                                      struct CnoidalReport *out_report);

/**
 * Propagates the solution over one period with `n_modes` Fourier modes.
 *
 * # Safety
 * `sol` must be a live handle; `out_result` must be valid for writes.
 */
enum CnoidalStatus cnoidal_simulate(const struct CnoidalSolution *sol,
                                    size_t n_modes,
                                    double dt,
                                    double t_end,
                                    bool dealias,
                                    struct CnoidalPropagation *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CNOIDAL_H */
