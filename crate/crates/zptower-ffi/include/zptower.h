#ifndef ZPTOWER_H
#define ZPTOWER_H

/* This header is generated by cbindgen from zptower-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status of a binding call. Nonzero values follow the CLI exit-code map.
 */
typedef enum ZptStatus {
  ZPT_STATUS_OK = 0,
  ZPT_STATUS_INTERNAL = 1,
  ZPT_STATUS_PARSE_ERROR = 2,
  ZPT_STATUS_DISCONNECTED = 3,
  ZPT_STATUS_NON_TORSION = 4,
  ZPT_STATUS_INCONSISTENT = 5,
  ZPT_STATUS_DUAL_FAILURE = 6,
  ZPT_STATUS_INVALID_ARGUMENT = 7,
} ZptStatus;

/*
 Opaque handle for a parsed tower spec.
 */
typedef struct ZptSpec ZptSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a JSON tower spec. On success `*out` owns the handle; release it
 with `zpt_spec_free`.

 # Safety
 `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum ZptStatus zpt_spec_parse(const char *json, struct ZptSpec **out);

/*
 Releases a spec handle.

 # Safety
 `spec` must come from `zpt_spec_parse` and not be used afterwards.
 */
void zpt_spec_free(struct ZptSpec *spec);

/*
 Number of vertices of X_n, computed without materializing the layer.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_vertex_count(const struct ZptSpec *spec, uint32_t n, uint64_t *out);

/*
 Layer shape and labels as JSON.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_layer_json(const struct ZptSpec *spec, uint32_t n, char **out);

/*
 Spanning-tree count of X_n with its p-adic valuation, as JSON.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_kappa_json(const struct ZptSpec *spec, uint32_t n, char **out);

/*
 Invariant factors of Jac(X_n), as JSON.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_jacobian_json(const struct ZptSpec *spec, uint32_t n, char **out);

/*
 Characteristic element det(D - B), as JSON.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_char_json(const struct ZptSpec *spec, char **out);

/*
 Characteristic elements of Pic and Jac with (mu, lambda), as JSON.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_invariants_json(const struct ZptSpec *spec, char **out);

/*
 Growth series and consistency verdict, as JSON. A negative slack selects
 the automatic constant. Inconsistency is reported in the JSON and, for a
 fixed slack or d = 1, also as the Inconsistent status.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_growth_json(const struct ZptSpec *spec,
                               uint32_t max_n,
                               int64_t slack,
                               char **out);

/*
 Dual layer and dual-tower report, as JSON. A failing tower yields
 DualFailure with the JSON still written.

 # Safety
 `spec` must be a live handle and `out` a valid pointer.
 */
enum ZptStatus zpt_dual_json(const struct ZptSpec *spec, uint32_t n, char **out);

/*
 Copies the last error message into `buf` (NUL-terminated, truncated to
 `len`). Returns the full message length in bytes, or 0 when there is none.

 # Safety
 `buf` must point to `len` writable bytes, or be null to query the length.
 */
uintptr_t zpt_last_error(char *buf, uintptr_t len);

/*
 Releases a string returned by any of the *_json functions.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void zpt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZPTOWER_H */
