/* SPDX-License-Identifier: Apache-2.0 */

#ifndef DNFLAT_H
#define DNFLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Connection family selector.
typedef enum DnFamily {
  // The flat combinations `G[s]`.
  DN_FAMILY_FLAT = 0,
  // The standard connections `G(s)`.
  DN_FAMILY_STANDARD = 1,
} DnFamily;

// Result codes of the C interface.
typedef enum DnStatus {
  // Success; for check runs, every check passed.
  DN_STATUS_OK = 0,
  // The run completed and at least one check failed.
  DN_STATUS_CHECKS_FAILED = 1,
  // A document or expression could not be parsed or validated.
  DN_STATUS_INVALID_INPUT = 2,
  // A required pointer argument was null.
  DN_STATUS_NULL_POINTER = 3,
  // A string argument was not valid UTF-8.
  DN_STATUS_INVALID_UTF8 = 4,
  // The operation does not apply to this bracket or map.
  DN_STATUS_PRECONDITION = 5,
  // An unexpected internal failure.
  DN_STATUS_INTERNAL = 6,
} DnStatus;

// A loaded bracket.
typedef struct DnBracket DnBracket;

// An invertible coordinate change.
typedef struct DnMap DnMap;

// Options for `dn_run`.
typedef struct DnOptions {
  // Family inspected by `curvature`.
  enum DnFamily which;
  // Connection index inspected by `curvature`.
  uint32_t s;
  // Seed for randomized spot checks.
  uint64_t seed;
  // Maximal `deg_u` of random monomials in spot checks.
  uint32_t max_degu;
} DnOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default options: flat family, `s = 0`, seed 0, `max_degu = 3`.
struct DnOptions dn_options_default(void);

// Parse a bracket document. On success `*out` receives a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum DnStatus dn_bracket_parse(const char *json, struct DnBracket **out);

// Release a bracket handle. Null is ignored.
//
// # Safety
// `b` must come from this library and not be used afterwards.
void dn_bracket_free(struct DnBracket *b);

// Number of components `n`, or 0 for a null handle.
//
// # Safety
// `b` must be null or a live handle.
size_t dn_bracket_dim(const struct DnBracket *b);

// Degree `k`, or 0 for a null handle.
//
// # Safety
// `b` must be null or a live handle.
uint32_t dn_bracket_degree(const struct DnBracket *b);

// Serialize a bracket as a raw-entry document.
//
// # Safety
// `b` must be a live handle and `out` a valid pointer.
enum DnStatus dn_bracket_to_json(const struct DnBracket *b, char **out);

// Whether the bracket is skew-symmetric and satisfies the Jacobi identity.
//
// # Safety
// `b` must be a live handle and `out` a valid pointer.
enum DnStatus dn_bracket_is_poisson(const struct DnBracket *b, bool *out);

// Parse a coordinate-map document. On success `*out` receives a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum DnStatus dn_map_parse(const char *json, struct DnMap **out);

// Release a map handle. Null is ignored.
//
// # Safety
// `m` must come from this library and not be used afterwards.
void dn_map_free(struct DnMap *m);

// Express a bracket in new coordinates. On success `*out` receives a new handle.
//
// # Safety
// `b` and `m` must be live handles and `out` a valid pointer.
enum DnStatus dn_bracket_transform(const struct DnBracket *b,
                                   const struct DnMap *m,
                                   struct DnBracket **out);

// Run a command (`validate`, `jacobi`, `connections`, `curvature`,
// `flatness`, `transform`, `lowdegree`, `spectral` or `report`) and write the
// JSON report to `*report_json`. Returns `Ok` when every check passed and
// `ChecksFailed` when the report records a failure. `opts` may be null for
// defaults; `map` is required by `transform` and optional for `report`.
//
// # Safety
// `b` must be a live handle, `command` a NUL-terminated string, `opts` and
// `map` null or valid, and `report_json` a valid pointer.
enum DnStatus dn_run(const struct DnBracket *b,
                     const char *command,
                     const struct DnOptions *opts,
                     const struct DnMap *map,
                     char **report_json);

// Description of the last failure on this thread, or an empty string. The
// pointer stays valid until the next call into this library on the same thread.
const char *dn_last_error(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dn_string_free(char *s);

// Library version as a static NUL-terminated string.
const char *dn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNFLAT_H */
