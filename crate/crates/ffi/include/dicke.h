#ifndef DICKE_H
#define DICKE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum DkCaseTag {
  DK_CASE_TAG_FULL = 0,
  DK_CASE_TAG_NO_THETA = 1,
  DK_CASE_TAG_NO_GAMMA_DELTA = 2,
  DK_CASE_TAG_NO_ALPHA_BETA = 3,
  DK_CASE_TAG_BOSON_ONLY = 4,
  DK_CASE_TAG_HERMITIAN = 5,
} DkCaseTag;

typedef enum DkOperator {
  // The pseudo-hermitian Hamiltonian, general solver.
  DK_OPERATOR_HAMILTONIAN = 0,
  // Its hermitian image, hermitian solver.
  DK_OPERATOR_IMAGE = 1,
} DkOperator;

typedef enum DkRoute {
  DK_ROUTE_IMAGE = 0,
  DK_ROUTE_DIRECT = 1,
} DkRoute;

// Status codes. 2, 3 and 4 coincide with the command-line exit codes.
typedef enum DkStatus {
  DK_STATUS_OK = 0,
  DK_STATUS_NULL_POINTER = 1,
  DK_STATUS_INVALID_CONFIG = 2,
  DK_STATUS_INVALID_PARAMETERS = 3,
  DK_STATUS_NUMERICAL = 4,
  DK_STATUS_OUT_OF_RANGE = 5,
  DK_STATUS_PANIC = 6,
} DkStatus;

// Opaque model parameters.
typedef struct DkParams DkParams;

// Opaque eigenvalue list.
typedef struct DkSpectrum DkSpectrum;

// One finite-j ground-state record.
typedef struct DkScanPoint {
  double coupling;
  size_t cutoff;
  double jz_over_j;
  double n_over_j;
  double e0_over_j;
  double analytic_jz;
  double analytic_n;
  bool converged;
} DkScanPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// New parameter set with ω = ω₀ = 1, all couplings zero, j = 1/2, cutoff 16.
//
// # Safety
// `out` must be null or valid for writes.
enum DkStatus dk_params_new(struct DkParams **out);

// # Safety
// `params` must be null or come from [`dk_params_new`] and not be freed twice.
void dk_params_free(struct DkParams *params);

// Sets `omega`, `omega0`, `theta1`, `theta2`, `alpha`, `beta`, `gamma`,
// `delta`, `xi1`, `xi2`, `xi3`, `j` (a half-integer) or `cutoff`.
//
// # Safety
// `params` must be a live handle; `key` a NUL-terminated string.
enum DkStatus dk_params_set(struct DkParams *params, const char *key, double value);

// Reads one key, as accepted by [`dk_params_set`].
//
// # Safety
// `params` must be a live handle; `key` a NUL-terminated string; `out`
// valid for writes.
enum DkStatus dk_params_get(const struct DkParams *params, const char *key, double *out);

// Checks quasi-hermiticity. Returns `DK_STATUS_OK` either way; when the
// set is invalid `*quasi_hermitian` is false and [`dk_last_error`] lists
// the violated conditions.
//
// # Safety
// `params` must be a live handle; outputs valid for writes.
enum DkStatus dk_validate(const struct DkParams *params,
                          bool *quasi_hermitian,
                          enum DkCaseTag *case_tag);

// Eigenvalues of H or of its image, sorted by real part.
//
// # Safety
// `params` must be a live handle; `out` valid for writes.
enum DkStatus dk_spectrum_new(const struct DkParams *params,
                              enum DkOperator operator_,
                              struct DkSpectrum **out);

// # Safety
// `spectrum` must be a live handle; `out` valid for writes.
enum DkStatus dk_spectrum_len(const struct DkSpectrum *spectrum, size_t *out);

// # Safety
// `spectrum` must be a live handle; `re` and `im` valid for writes.
enum DkStatus dk_spectrum_eigenvalue(const struct DkSpectrum *spectrum,
                                     size_t index,
                                     double *re,
                                     double *im);

// Whether every |Im λ| is within the spectrum's reality tolerance.
//
// # Safety
// `spectrum` must be a live handle; `out` valid for writes.
enum DkStatus dk_spectrum_is_real(const struct DkSpectrum *spectrum, bool *out);

// # Safety
// `spectrum` must be null or come from [`dk_spectrum_new`] and not be freed twice.
void dk_spectrum_free(struct DkSpectrum *spectrum);

// Relative distance between the spectra of H and its image, and the
// relative imaginary-part defect of H. Invalid sets are compared against
// a formal image rather than rejected.
//
// # Safety
// `params` must be a live handle; outputs valid for writes.
enum DkStatus dk_compare_spectra(const struct DkParams *params,
                                 double *relative_gap,
                                 double *relative_reality_defect);

// ‖ηH − H†η‖ / ‖ηH‖ for the metric of a valid set.
//
// # Safety
// `params` must be a live handle; `out` valid for writes.
enum DkStatus dk_pseudo_hermiticity_residual(const struct DkParams *params, double *out);

// Ground-state order parameters at the handle's j, doubling the cutoff
// from `cutoff_start` to at most `cutoff_cap` until e0/j moves by less
// than `tolerance`.
//
// # Safety
// `params` must be a live handle; `out` valid for writes.
enum DkStatus dk_finite_j_order_params(const struct DkParams *params,
                                       size_t cutoff_start,
                                       size_t cutoff_cap,
                                       double tolerance,
                                       enum DkRoute route,
                                       struct DkScanPoint *out);

// Thermodynamic-limit ⟨Jz⟩/j, ⟨a†a⟩/j and the control ratio μ (infinite
// when the spin couplings vanish).
//
// # Safety
// `params` must be a live handle; outputs valid for writes.
enum DkStatus dk_analytic_order_params(const struct DkParams *params,
                                       double *jz_over_j,
                                       double *n_over_j,
                                       double *mu);

// Exact levels E₀..E_{len−1} of the single-mode squeezed oscillator,
// written to `out[0..len]`.
//
// # Safety
// `out` must be valid for `len` writes.
enum DkStatus dk_swanson_spectrum(double omega,
                                  double theta1,
                                  double theta2,
                                  double *out,
                                  size_t len);

// Message of the last failed call on this thread, or an empty string.
// Valid until the next call on this thread.
const char *dk_last_error(void);

// Library version, static storage.
const char *dk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DICKE_H */
