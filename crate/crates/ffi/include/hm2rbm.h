/* C interface for the hm2rbm library. */

#ifndef HM2RBM_H
#define HM2RBM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum Hm2RbmStatus {
  /**
   * Success.
   */
  HM2_RBM_STATUS_OK = 0,
  /**
   * Invalid input: malformed JSON, out-of-range argument, mismatched sizes.
   */
  HM2_RBM_STATUS_INPUT_ERROR = 2,
  /**
   * Synthesis could not reach the requested precision or cover the targets.
   */
  HM2_RBM_STATUS_PRECISION_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  HM2_RBM_STATUS_NULL_POINTER = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  HM2_RBM_STATUS_UTF8_ERROR = 5,
} Hm2RbmStatus;

/**
 * Opaque handle to a hierarchical-model energy specification.
 */
typedef struct Hm2RbmModel Hm2RbmModel;

/**
 * Opaque handle to a set of RBM parameters.
 */
typedef struct Hm2RbmRbm Hm2RbmRbm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread.
 *
 * The pointer stays valid until the next failing call on the same thread.
 * Never null; the message is empty if nothing has failed yet.
 */
const char *hm2rbm_last_error_message(void);

/**
 * Parses a model JSON document into a handle.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable storage
 * for one pointer. On success `*out` owns the model and must be released with
 * [`hm2rbm_model_free`].
 */
enum Hm2RbmStatus hm2rbm_model_parse(const char *json, struct Hm2RbmModel **out);

/**
 * Releases a model handle. Passing null is a no-op.
 *
 * # Safety
 * `model` must be null or a pointer previously returned by
 * [`hm2rbm_model_parse`] that has not been freed yet.
 */
void hm2rbm_model_free(struct Hm2RbmModel *model);

/**
 * Serializes a model handle canonically (sorted keys, %.17g floats).
 *
 * # Safety
 * `model` must be a live handle; `out` must point to writable storage for one
 * pointer. The returned string must be released with [`hm2rbm_string_free`].
 */
enum Hm2RbmStatus hm2rbm_model_to_json(const struct Hm2RbmModel *model, char **out);

/**
 * Number of visible variables of a model handle.
 *
 * # Safety
 * `model` must be a live handle.
 */
uint32_t hm2rbm_model_vars(const struct Hm2RbmModel *model);

/**
 * Parses an RBM JSON document into a handle.
 *
 * # Safety
 * As [`hm2rbm_model_parse`]; release with [`hm2rbm_rbm_free`].
 */
enum Hm2RbmStatus hm2rbm_rbm_parse(const char *json, struct Hm2RbmRbm **out);

/**
 * Releases an RBM handle. Passing null is a no-op.
 *
 * # Safety
 * `rbm` must be null or a pointer previously returned by a successful call
 * that produced an RBM handle, not yet freed.
 */
void hm2rbm_rbm_free(struct Hm2RbmRbm *rbm);

/**
 * Serializes an RBM handle canonically.
 *
 * # Safety
 * As [`hm2rbm_model_to_json`].
 */
enum Hm2RbmStatus hm2rbm_rbm_to_json(const struct Hm2RbmRbm *rbm, char **out);

/**
 * Number of hidden units of an RBM handle.
 *
 * # Safety
 * `rbm` must be a live handle.
 */
uint32_t hm2rbm_rbm_hidden_count(const struct Hm2RbmRbm *rbm);

/**
 * Compiles a model into RBM parameters along the default cover plan.
 *
 * `omega` is the shared scale (escalated per unit when needed) and `tol` the
 * largest acceptable residual coefficient magnitude.
 *
 * # Safety
 * `model` must be a live handle and `out` writable storage for one pointer.
 * On success `*out` must be released with [`hm2rbm_rbm_free`].
 */
enum Hm2RbmStatus hm2rbm_synthesize(const struct Hm2RbmModel *model,
                                    double omega,
                                    double tol,
                                    struct Hm2RbmRbm **out);

/**
 * Compares a model's distribution against an RBM's visible marginal by exact
 * enumeration, writing the KL divergence, total variation distance, and the
 * largest coefficient residual over sets of size >= 2.
 *
 * # Safety
 * `model` and `rbm` must be live handles; the three out-pointers must each be
 * null or point to writable doubles.
 */
enum Hm2RbmStatus hm2rbm_verify(const struct Hm2RbmModel *model,
                                const struct Hm2RbmRbm *rbm,
                                double *kl_out,
                                double *tv_out,
                                double *max_residual_out);

/**
 * Emits the hidden-unit bound table for `2 <= k <= v <= v_max` as CSV.
 *
 * # Safety
 * `out` must point to writable storage for one pointer; release the string
 * with [`hm2rbm_string_free`].
 */
enum Hm2RbmStatus hm2rbm_bounds_csv(uint32_t v_max, bool use_oracle, char **out);

/**
 * Hidden-unit upper bound `U(v, k)`; see the library documentation.
 *
 * # Safety
 * `out` must be null or point to a writable u64.
 */
enum Hm2RbmStatus hm2rbm_u_bound(uint32_t v, uint32_t k, bool use_oracle, uint64_t *out);

/**
 * Parameter-counting lower bound on universal hidden-unit counts.
 */
uint64_t hm2rbm_param_lower_bound(uint32_t v);

/**
 * Releases a string returned by this library. Passing null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer previously returned through one of this
 * library's out-parameters, not yet freed.
 */
void hm2rbm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HM2RBM_H */
