#ifndef SYMDYN_H
#define SYMDYN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every exported call.
 */
typedef enum SymdynStatus {
  SYMDYN_STATUS_OK = 0,
  SYMDYN_STATUS_NULL_POINTER = 1,
  SYMDYN_STATUS_INVALID_UTF8 = 2,
  SYMDYN_STATUS_INVALID_JSON = 3,
  SYMDYN_STATUS_INVALID_ARGUMENT = 4,
  SYMDYN_STATUS_BUDGET = 5,
  SYMDYN_STATUS_NOT_FINITE_TYPE = 6,
  SYMDYN_STATUS_UNSUPPORTED = 7,
  SYMDYN_STATUS_PANIC = 8,
} SymdynStatus;

/**
 * A shift space.
 */
typedef struct SymdynSpace SymdynSpace;

/**
 * A space together with commuting factor maps.
 */
typedef struct SymdynSystem SymdynSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *symdyn_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void symdyn_string_free(char *s);

/**
 * Parses a space description such as `{"alphabet_size":2}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SymdynStatus symdyn_space_from_json(const char *json, struct SymdynSpace **out);

/**
 * # Safety
 * `space` must come from `symdyn_space_from_json` and not have been freed.
 */
void symdyn_space_free(struct SymdynSpace *space);

/**
 * Whether `symbols[0..len]` is an admissible word.
 *
 * # Safety
 * `space` must be a live handle, `symbols` readable for `len` bytes and
 * `out` writable.
 */
enum SymdynStatus symdyn_space_admissible(const struct SymdynSpace *space,
                                          const uint8_t *symbols,
                                          uintptr_t len,
                                          bool *out);

/**
 * Number of points with `σ^k x = x`.
 *
 * # Safety
 * `space` must be a live handle and `out` writable.
 */
enum SymdynStatus symdyn_space_periodic_count(const struct SymdynSpace *space,
                                              uintptr_t k,
                                              uint64_t *out);

/**
 * Builds a system on a copy of `space` from `{"factors":[...]}`.
 *
 * # Safety
 * `space` must be a live handle, `json` NUL-terminated and `out` writable.
 */
enum SymdynStatus symdyn_system_from_json(const struct SymdynSpace *space,
                                          const char *json,
                                          struct SymdynSystem **out);

/**
 * # Safety
 * `system` must come from `symdyn_system_from_json` and not have been freed.
 */
void symdyn_system_free(struct SymdynSystem *system);

/**
 * Common-time certification over all cylinder tuples of `depth`.
 * `*satisfied` is set when every tuple has a time `n ≤ n_max`.
 *
 * # Safety
 * `system` must be a live handle; `satisfied` may be null; `out_json` must
 * be writable.
 */
enum SymdynStatus symdyn_certify_delta(const struct SymdynSystem *system,
                                       uintptr_t depth,
                                       uintptr_t n_max,
                                       bool *satisfied,
                                       char **out_json);

/**
 * Checks the gap-excluded shift for `powers[0..len]` up to `n_max`.
 *
 * # Safety
 * `powers` must be readable for `len` entries; `verified` may be null;
 * `out_json` must be writable.
 */
enum SymdynStatus symdyn_counterexample(const uintptr_t *powers,
                                        uintptr_t len,
                                        uintptr_t n_max,
                                        bool *verified,
                                        char **out_json);

/**
 * Runs the four-statement experiment for the functions file `functions_json`
 * (the same format the command-line tool reads).
 *
 * # Safety
 * `system` must be a live handle, `functions_json` NUL-terminated and
 * `out_json` writable.
 */
enum SymdynStatus symdyn_livsic(const struct SymdynSystem *system,
                                const char *functions_json,
                                uintptr_t horizon,
                                uintptr_t k_max,
                                uintptr_t samples,
                                uint64_t seed,
                                char **out_json);

/**
 * Exhaustive closing-property sweep with the default configuration.
 *
 * # Safety
 * `violations` may be null; `out_json` must be writable.
 */
enum SymdynStatus symdyn_validate_closing(uint64_t *violations, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMDYN_H */
