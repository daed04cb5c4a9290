#ifndef WITNESSKIT_H
#define WITNESSKIT_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WkKind {
  WK_KIND_GHZ = 0,
  WK_KIND_W = 1,
} WkKind;

/**
 * Result codes.
 */
typedef enum WkStatus {
  WK_STATUS_OK = 0,
  WK_STATUS_NULL_POINTER = 1,
  WK_STATUS_INVALID_ARGUMENT = 2,
  WK_STATUS_NOT_HERMITIAN = 3,
  WK_STATUS_DIMENSION_MISMATCH = 4,
  WK_STATUS_NO_CONVERGENCE = 5,
  WK_STATUS_NO_DETECTION = 6,
  WK_STATUS_FORMAT = 7,
  WK_STATUS_PANIC = 8,
} WkStatus;

/**
 * Opaque pure state.
 */
typedef struct WkState WkState;

/**
 * Opaque witness operator.
 */
typedef struct WkWitness WkWitness;

/**
 * Certification summary. `converged` is false when the see-saw budget ran out.
 */
typedef struct WkCertification {
  double min_product_expectation;
  double detection_value;
  bool is_valid_witness;
  bool detects_target;
  bool converged;
  size_t sweeps_used;
  size_t restarts_agreeing;
  size_t restarts;
} WkCertification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call on the same thread.
 */
const char *wk_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void wk_string_free(char *s);

/**
 * # Safety
 * `out` must be writable.
 */
enum WkStatus wk_state_ghz(size_t qubits, struct WkState **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum WkStatus wk_state_w(size_t qubits, struct WkState **out);

/**
 * Parses a state document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum WkStatus wk_state_from_json(const char *json, struct WkState **out);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum WkStatus wk_state_to_json(const struct WkState *state, char **out);

/**
 * # Safety
 * `state` must be NULL or a handle not yet freed.
 */
void wk_state_free(struct WkState *state);

/**
 * Squared concurrence of a qubit state under the default normalization.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum WkStatus wk_concurrence_squared(const struct WkState *state, double *out);

/**
 * `gamma I - |psi><psi|`; `gamma` is ignored unless `has_gamma`, in which
 * case the squared concurrence is used.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum WkStatus wk_witness_canonical(const struct WkState *state,
                                   bool has_gamma,
                                   double gamma,
                                   struct WkWitness **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum WkStatus wk_witness_operator_form(enum WkKind kind, size_t qubits, struct WkWitness **out);

/**
 * `(W + W^dagger) / 2` as a new handle.
 *
 * # Safety
 * `witness` must be a live handle; `out` must be writable.
 */
enum WkStatus wk_witness_hermitize(const struct WkWitness *witness, struct WkWitness **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum WkStatus wk_witness_from_json(const char *json, struct WkWitness **out);

/**
 * # Safety
 * `witness` must be a live handle; `out` must be writable.
 */
enum WkStatus wk_witness_to_json(const struct WkWitness *witness, char **out);

/**
 * # Safety
 * `witness` must be NULL or a handle not yet freed.
 */
void wk_witness_free(struct WkWitness *witness);

/**
 * Real part of `<psi|W|psi>`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum WkStatus wk_witness_expectation(const struct WkWitness *witness,
                                     const struct WkState *state,
                                     double *out);

/**
 * Runs the see-saw certification. The report is filled even when the
 * budget runs out; the status is then `NO_CONVERGENCE`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum WkStatus wk_certify(const struct WkWitness *witness,
                         const struct WkState *target,
                         size_t restarts,
                         uint64_t seed,
                         struct WkCertification *out);

/**
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum WkStatus wk_noise_threshold(const struct WkWitness *witness,
                                 const struct WkState *target,
                                 double *out);

/**
 * Signed W- or GHZ-class operator on `qubits` qubits with the quarter-turn
 * phase at 1-based positions `r1 < r2`, as JSON with its sign signature.
 *
 * # Safety
 * `out` must be writable.
 */
enum WkStatus wk_class_operator_json(enum WkKind kind,
                                     size_t qubits,
                                     size_t r1,
                                     size_t r2,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WITNESSKIT_H */
