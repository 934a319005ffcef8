#ifndef EHPCERT_H
#define EHPCERT_H

/* Generated by cbindgen from the ehpcert-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EhpStatus {
  EHP_STATUS_OK = 0,
  EHP_STATUS_NULL_POINTER = 1,
  EHP_STATUS_INVALID_UTF8 = 2,
  EHP_STATUS_PARSE = 3,
  EHP_STATUS_VALIDATION = 4,
  EHP_STATUS_RESOURCE_CAP = 5,
  EHP_STATUS_ENGINE = 6,
  EHP_STATUS_PANIC = 7,
} EhpStatus;

/**
 * Opaque algebra handle.
 */
typedef struct EhpAlgebra EhpAlgebra;

/**
 * Evaluation mode for the nilpotency entry points. A null pointer means
 * exact arithmetic.
 */
typedef struct EhpNilOptions {
  /**
   * Nonzero selects randomized evaluation modulo a large prime.
   */
  uint8_t modular;
  uint32_t trials;
  uint64_t seed;
} EhpNilOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an algebra from JSON: a structure-constant manifest (with
 * `"basis"`) or a zoo spec such as `{"zoo": "so", "n": 3}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum EhpStatus ehp_algebra_from_json(const char *json, struct EhpAlgebra **out);

/**
 * Builds a zoo algebra by name. `params_json` may be null or a JSON object
 * of parameters, e.g. `{"n": 3}`.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `params_json` null or one; `out`
 * must be writable.
 */
enum EhpStatus ehp_algebra_from_zoo(const char *name,
                                    const char *params_json,
                                    struct EhpAlgebra **out);

/**
 * # Safety
 * `a` must come from this library and not have been freed.
 */
enum EhpStatus ehp_algebra_dim(const struct EhpAlgebra *a, size_t *out);

/**
 * Flags, grading and fingerprint as JSON. Free with [`ehp_string_free`].
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum EhpStatus ehp_algebra_describe_json(const struct EhpAlgebra *a, char **out);

/**
 * # Safety
 * `a` must be null or a handle from this library, freed at most once.
 */
void ehp_algebra_free(struct EhpAlgebra *a);

/**
 * Checks that every product of `s` generic `k`-forms vanishes on the whole
 * algebra. `certified` receives 1 or 0; `cert_json` (nullable) receives the
 * certificate.
 *
 * # Safety
 * `a` must be a live handle; `opts` null or valid; outputs null or writable.
 */
enum EhpStatus ehp_nil_bound(const struct EhpAlgebra *a,
                             uint32_t k,
                             uint32_t s,
                             const struct EhpNilOptions *opts,
                             int32_t *certified,
                             char **cert_json);

/**
 * Smallest `s <= s_max` with the whole algebra `(k,s)`-nil; `degree`
 * receives 0 when there is none.
 *
 * # Safety
 * As for [`ehp_nil_bound`].
 */
enum EhpStatus ehp_nil_degree(const struct EhpAlgebra *a,
                              uint32_t k,
                              uint32_t s_max,
                              const struct EhpNilOptions *opts,
                              uint32_t *degree,
                              char **cert_json);

/**
 * Runs a manifest given as JSON text. Relative algebra files resolve
 * against the working directory. When `out_dir` is non-null the bundle is
 * written there. `exit_code` follows the command-line convention.
 *
 * # Safety
 * String arguments must be NUL-terminated (or null where allowed); outputs
 * null or writable.
 */
enum EhpStatus ehp_run_manifest(const char *manifest_json,
                                const char *out_dir,
                                int32_t *exit_code,
                                char **summary_json);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *ehp_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void ehp_string_free(char *s);

/**
 * Engine version, statically allocated.
 */
const char *ehp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EHPCERT_H */
