#ifndef SELFSIM_H
#define SELFSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome codes; the values match the command-line exit codes.
 */
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_REFUTED = 1,
  SF_STATUS_UNKNOWN = 2,
  SF_STATUS_PRECONDITION = 3,
  SF_STATUS_COUNTEREVIDENCE = 4,
  SF_STATUS_INVALID_ARGUMENT = 64,
  SF_STATUS_NULL_POINTER = 65,
  SF_STATUS_PANIC = 70,
} SfStatus;

/**
 * An iterated function system.
 */
typedef struct SfIfs SfIfs;

/**
 * A single similitude.
 */
typedef struct SfMap SfMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an IFS document. On success `*out` receives a handle to release
 * with `sf_ifs_free`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SfStatus sf_ifs_from_json(const char *json, struct SfIfs **out);

/**
 * # Safety
 * `ifs` must come from `sf_ifs_from_json` and not be freed twice; null is
 * ignored.
 */
void sf_ifs_free(struct SfIfs *ifs);

/**
 * Number of maps, or 0 for a null handle.
 *
 * # Safety
 * `ifs` must be null or a live handle.
 */
size_t sf_ifs_len(const struct SfIfs *ifs);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `ifs` must be null or a live handle.
 */
size_t sf_ifs_dim(const struct SfIfs *ifs);

/**
 * Parses a single-map document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SfStatus sf_map_from_json(const char *json, struct SfMap **out);

/**
 * # Safety
 * `map` must come from `sf_map_from_json` and not be freed twice; null is
 * ignored.
 */
void sf_map_free(struct SfMap *map);

/**
 * Strong separation: `SF_STATUS_OK` certified, `SF_STATUS_REFUTED`
 * violated, `SF_STATUS_UNKNOWN` undecided at `depth`.
 *
 * # Safety
 * `ifs` must be a live handle and `out_json` a valid pointer.
 */
enum SfStatus sf_check_ssc(const struct SfIfs *ifs, size_t depth, char **out_json);

/**
 * Chain decomposition at the chain level.
 *
 * # Safety
 * `ifs` must be a live handle and `out_json` a valid pointer.
 */
enum SfStatus sf_chains(const struct SfIfs *ifs, size_t depth, char **out_json);

/**
 * Embedding certificate for `map`, as a certificate document.
 * `SF_STATUS_UNKNOWN` when the search budget runs out.
 *
 * # Safety
 * Handles must be live and `out_json` a valid pointer.
 */
enum SfStatus sf_certify_embedding(const struct SfIfs *ifs,
                                   const struct SfMap *map,
                                   size_t max_word_len,
                                   char **out_json);

/**
 * Openness decision; searches its own embedding certificate.
 *
 * # Safety
 * Handles must be live and `out_json` a valid pointer.
 */
enum SfStatus sf_openness(const struct SfIfs *ifs,
                          const struct SfMap *map,
                          size_t depth,
                          size_t max_word_len,
                          char **out_json);

/**
 * Minimal `(k, p)` with `rf^k = r^p`; `SF_STATUS_REFUTED` when the
 * logarithms are incommensurable. Ratios are `"p/q"` strings.
 *
 * # Safety
 * Strings must be nul-terminated; `k` and `p` valid pointers.
 */
enum SfStatus sf_commensurability(const char *r, const char *rf, uint64_t *k, uint64_t *p);

/**
 * Symmetry decision for a problem document `{"phi": ..., "psi": ...}`.
 * `SF_STATUS_COUNTEREVIDENCE` comes with the failed check in the JSON.
 *
 * # Safety
 * `problem_json` must be nul-terminated and `out_json` a valid pointer.
 */
enum SfStatus sf_symmetry(const char *problem_json,
                          size_t depth,
                          size_t max_word_len,
                          char **out_json);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sf_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *sf_last_error(void);

/**
 * Library version, static storage.
 */
const char *sf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SELFSIM_H */
