#ifndef PADIC_DYN_H
#define PADIC_DYN_H

#include <stdbool.h>
#include <stdint.h>

typedef enum PdBasis {
  PD_BASIS_MAHLER = 0,
  PD_BASIS_VAN_DER_PUT = 1,
} PdBasis;

typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_NULL_POINTER = 1,
  PD_STATUS_INVALID_UTF8 = 2,
  PD_STATUS_NOT_PRIME = 3,
  PD_STATUS_PARSE = 4,
  PD_STATUS_DOMAIN = 5,
  PD_STATUS_PRECONDITION = 6,
  PD_STATUS_NOT_LIPSCHITZ = 7,
  PD_STATUS_NOT_UD1 = 8,
  PD_STATUS_LIMIT = 9,
  PD_STATUS_INVARIANT = 10,
  PD_STATUS_PANIC = 11,
} PdStatus;

/**
 * Opaque handle to a function on Z_p known modulo p^depth.
 */
typedef struct PdFunction PdFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an integer polynomial such as "1+3*x+2*x^3". `depth` 0 selects
 * the default depth for `p`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum PdStatus pd_function_from_polynomial(const char *text,
                                          uint64_t p,
                                          uint32_t depth,
                                          struct PdFunction **out);

/**
 * Reads a JSON coefficient series or value table. `depth` 0 lets the
 * document decide.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum PdStatus pd_function_from_json(const char *json, uint32_t depth, struct PdFunction **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void pd_function_free(struct PdFunction *f);

/**
 * The prime of `f`, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint64_t pd_function_prime(const struct PdFunction *f);

/**
 * The depth of `f`, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint32_t pd_function_depth(const struct PdFunction *f);

/**
 * f(x) mod p^k for k ≤ depth.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum PdStatus pd_function_eval(const struct PdFunction *f, uint64_t x, uint32_t k, uint64_t *out);

/**
 * Whether f permutes Z/p^n in a single cycle.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum PdStatus pd_transitive_mod(const struct PdFunction *f, uint32_t n, bool *out);

/**
 * Ergodicity of a 1-Lipschitz, uniformly differentiable f. Fails with
 * `NotLipschitz` or `NotUd1` outside that class.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum PdStatus pd_ergodic(const struct PdFunction *f, bool *out);

/**
 * Full verdict chain as JSON (the `classify` report). `exit_code` in the
 * report is 0 for ergodic, 1 for not ergodic, 2 when undecided.
 *
 * # Safety
 * `f` must be a live handle and `out` writable; free the result with
 * `pd_string_free`.
 */
enum PdStatus pd_classify_json(const struct PdFunction *f, char **out);

/**
 * The first `count` coefficients mod p^k in the basis given by a
 * `PdBasis` value, as a series document accepted by `pd_function_from_json`.
 *
 * # Safety
 * `f` must be a live handle and `out` writable; free the result with
 * `pd_string_free`.
 */
enum PdStatus pd_expand_json(const struct PdFunction *f,
                             uint32_t basis,
                             uint64_t count,
                             uint32_t k,
                             char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pd_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *pd_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *pd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_DYN_H */
