#ifndef ENTANGLE_TELEPORT_H
#define ENTANGLE_TELEPORT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call. `ET_STATUS_OK` is zero.
 */
typedef enum EtStatus {
  ET_STATUS_OK = 0,
  ET_STATUS_NULL_POINTER = 1,
  ET_STATUS_DIMENSION_MISMATCH = 2,
  ET_STATUS_INVALID_SUBSYSTEM = 3,
  ET_STATUS_CONTRACT_VIOLATION = 4,
  ET_STATUS_DOMAIN = 5,
  ET_STATUS_INVALID_STATE = 6,
  ET_STATUS_NO_CONVERGENCE = 7,
  ET_STATUS_BUFFER_TOO_SMALL = 8,
  ET_STATUS_PANIC = 9,
} EtStatus;

/**
 * Opaque two-qubit density matrix.
 */
typedef struct EtDensity EtDensity;

/**
 * Bloch form of a two-qubit state: `c` is row-major, `c[3 * n + k]` pairs
 * sigma_n on the first qubit with sigma_k on the second.
 */
typedef struct EtBloch {
  double a[3];
  double b[3];
  double c[9];
} EtBloch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` as a
 * NUL-terminated string, truncating if needed. Returns the full message
 * length in bytes (without the terminator), or 0 if there is none.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t et_last_error(char *buf, size_t len);

/**
 * Builds a state from a row-major 4 x 4 matrix given as separate real and
 * imaginary parts. The matrix must be Hermitian, unit trace and PSD.
 *
 * # Safety
 * `re` and `im` must each point to 16 readable doubles; `out` must be writable.
 */
enum EtStatus et_density_from_parts(const double *re, const double *im, struct EtDensity **out);

/**
 * Projector onto the normalized pure state with the given four amplitudes.
 *
 * # Safety
 * `re` and `im` must each point to 4 readable doubles; `out` must be writable.
 */
enum EtStatus et_density_pure(const double *re, const double *im, struct EtDensity **out);

/**
 * Werner state with singlet weight parameter `phi` in [-1, 1].
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_werner(double phi, struct EtDensity **out);

/**
 * cos(theta)|00> + sin(theta)|11>.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_schmidt_pure(double theta, struct EtDensity **out);

/**
 * Haar-random pure state, reproducible from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_random_pure(uint64_t seed, struct EtDensity **out);

/**
 * Random mixed state, reproducible from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_random_mixed(uint64_t seed, struct EtDensity **out);

/**
 * # Safety
 * `rho` must be a live handle or null; `out` must be writable.
 */
enum EtStatus et_density_clone(const struct EtDensity *rho, struct EtDensity **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `rho` must be null or a handle not yet freed.
 */
void et_density_free(struct EtDensity *rho);

/**
 * Copies the row-major 4 x 4 matrix into `re` and `im`.
 *
 * # Safety
 * `re` and `im` must each point to 16 writable doubles.
 */
enum EtStatus et_density_parts(const struct EtDensity *rho, double *re, double *im);

/**
 * Negativity-based entanglement in [0, 1].
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_entanglement(const struct EtDensity *rho, double *out);

/**
 * Tr(rho^2).
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_purity(const struct EtDensity *rho, double *out);

/**
 * Overlap with the singlet.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_singlet_fraction(const struct EtDensity *rho, double *out);

/**
 * Total information content, in [0, 2] for two qubits.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_total_information(const struct EtDensity *rho, double *out);

/**
 * Information held in correlations beyond the local parts.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_correlation_information(const struct EtDensity *rho, double *out);

/**
 * Information of one particle (1 or 2) alone.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_individual_information(const struct EtDensity *rho,
                                        uint32_t particle,
                                        double *out);

/**
 * Fidelity <psi|rho|psi> against the pure state with amplitudes `re + i im`.
 *
 * # Safety
 * `re` and `im` must each point to 4 readable doubles; `rho` must be a live
 * handle; `out` must be writable.
 */
enum EtStatus et_fidelity(const double *re,
                          const double *im,
                          const struct EtDensity *rho,
                          double *out);

/**
 * Teleports particle 1 or 2 through a Werner channel of parameter `phi`
 * and returns the outcome-averaged state.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_teleport_one(const struct EtDensity *rho,
                              uint32_t particle,
                              double phi,
                              struct EtDensity **out);

/**
 * Teleports both particles, the first through a channel of parameter `phi1`
 * and the second through `phi2`.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_teleport_two(const struct EtDensity *rho,
                              double phi1,
                              double phi2,
                              struct EtDensity **out);

/**
 * Probabilities of the 16 joint Bell outcomes of a double teleportation,
 * ordered by first-measurement index then second.
 *
 * # Safety
 * `rho` must be a live handle; `probs` must point to `len` writable doubles.
 */
enum EtStatus et_teleport_two_probabilities(const struct EtDensity *rho,
                                            double phi1,
                                            double phi2,
                                            double *probs,
                                            size_t len);

/**
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum EtStatus et_bloch_decompose(const struct EtDensity *rho, struct EtBloch *out);

/**
 * Rebuilds a state from its Bloch form; fails if the result is not a state.
 *
 * # Safety
 * `rep` must be readable; `out` must be writable.
 */
enum EtStatus et_bloch_compose(const struct EtBloch *rep, struct EtDensity **out);

/**
 * Fidelity of a pure input of entanglement `e12` after both particles
 * cross channels of entanglement `ew`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_fidelity_formula(double e12, double ew, double *out);

/**
 * Entanglement of the replica for a pure input of entanglement `e12`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_replica_entanglement(double e12, double ew, double *out);

/**
 * Channel entanglement below which the replica of a pure `e12` input is separable.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_critical_channel_entanglement(double e12, double *out);

/**
 * Correlation information left after teleporting both particles.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_correlation_transfer(double ic12, double ew, double *out);

/**
 * Entanglement after teleporting one particle of a pure `e12` input.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_intermediate_entanglement(double e12, double ew, double *out);

/**
 * Channel contraction factor (2 ew + 1) / 3.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtStatus et_kappa(double ew, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTANGLE_TELEPORT_H */
