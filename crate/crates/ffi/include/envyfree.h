/* C ABI for the envyfree fair-allocation solvers. */

#ifndef ENVYFREE_H
#define ENVYFREE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every FFI call.
 */
typedef enum EfStatus {
  EF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  EF_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  EF_STATUS_INVALID_UTF8 = 2,
  /**
   * Input text could not be parsed.
   */
  EF_STATUS_PARSE_ERROR = 3,
  /**
   * Input was well-formed but semantically invalid.
   */
  EF_STATUS_INVALID_INPUT = 4,
  /**
   * The instance exceeds the configured search budget.
   */
  EF_STATUS_TOO_LARGE = 5,
  /**
   * No house allocation shape exists (more agents than resources).
   */
  EF_STATUS_SHAPE_INFEASIBLE = 6,
  /**
   * The requested strategy does not apply to this problem.
   */
  EF_STATUS_UNSUPPORTED = 7,
  /**
   * An internal invariant failed; see ef_last_error.
   */
  EF_STATUS_INTERNAL = 8,
} EfStatus;

/**
 * Fairness concept selector.
 */
typedef enum EfConcept {
  EF_CONCEPT_SEF = 0,
  EF_CONCEPT_AEF = 1,
  EF_CONCEPT_SAEF = 2,
} EfConcept;

/**
 * Problem kind selector.
 */
typedef enum EfKind {
  EF_KIND_ALLOCATION = 0,
  EF_KIND_HOUSE = 1,
} EfKind;

/**
 * Solver strategy selector.
 */
typedef enum EfStrategy {
  EF_STRATEGY_AUTO = 0,
  EF_STRATEGY_EXACT = 1,
  EF_STRATEGY_DP = 2,
  EF_STRATEGY_ILP = 3,
  EF_STRATEGY_MATCHING = 4,
} EfStrategy;

/**
 * Opaque allocation handle.
 */
typedef struct EfAllocation EfAllocation;

/**
 * Opaque instance handle.
 */
typedef struct EfInstance EfInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The caller
 * owns the returned string and must free it with `ef_string_free`.
 */
char *ef_last_error(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void ef_string_free(char *s);

/**
 * Parses an instance from its JSON document (fields `n`, `m`, `weights`,
 * `utilities`, optional `meta`).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be valid for
 * writes.
 */
enum EfStatus ef_instance_parse_json(const char *json, struct EfInstance **out);

/**
 * Builds an instance from arrays: `weights` has `num_agents` entries and
 * `utilities` is row-major with `num_agents * num_resources` entries.
 *
 * # Safety
 * The arrays must be valid for the stated number of reads; `out` must be
 * valid for writes.
 */
enum EfStatus ef_instance_new(uintptr_t num_agents,
                              uintptr_t num_resources,
                              const uint64_t *weights,
                              const uint64_t *utilities,
                              struct EfInstance **out);

/**
 * # Safety
 * `instance` must be a live handle from this library (or NULL).
 */
void ef_instance_free(struct EfInstance *instance);

/**
 * # Safety
 * `instance` must be a live handle.
 */
uintptr_t ef_instance_num_agents(const struct EfInstance *instance);

/**
 * # Safety
 * `instance` must be a live handle.
 */
uintptr_t ef_instance_num_resources(const struct EfInstance *instance);

/**
 * Parses an allocation document (`{"bundles": [[...], ...]}`, 1-based
 * resource ids) against an instance.
 *
 * # Safety
 * `instance` must be a live handle; `json` a valid string; `out` writable.
 */
enum EfStatus ef_allocation_parse_json(const struct EfInstance *instance,
                                       const char *json,
                                       struct EfAllocation **out);

/**
 * Builds an allocation from a per-resource assignment array of length
 * `num_resources`: entry `r` is the 0-based agent receiving resource `r`,
 * or -1 to leave it unassigned.
 *
 * # Safety
 * `instance` must be a live handle; `assignment` valid for
 * `num_resources(instance)` reads; `out` writable.
 */
enum EfStatus ef_allocation_from_assignment(const struct EfInstance *instance,
                                            const int64_t *assignment,
                                            struct EfAllocation **out);

/**
 * # Safety
 * `allocation` must be a live handle (or NULL).
 */
void ef_allocation_free(struct EfAllocation *allocation);

/**
 * Serializes an allocation to its JSON document (1-based resource ids).
 *
 * # Safety
 * `allocation` must be a live handle; `out` writable.
 */
enum EfStatus ef_allocation_to_json(const struct EfAllocation *allocation, char **out);

/**
 * Whether the allocation is fair under the concept.
 *
 * # Safety
 * Both handles must be live; `out` writable.
 */
enum EfStatus ef_is_fair(const struct EfInstance *instance,
                         const struct EfAllocation *allocation,
                         enum EfConcept concept,
                         bool *out);

/**
 * Whether every resource is assigned.
 *
 * # Safety
 * Both handles must be live; `out` writable.
 */
enum EfStatus ef_is_complete(const struct EfInstance *instance,
                             const struct EfAllocation *allocation,
                             bool *out);

/**
 * Whether every agent holds exactly one resource.
 *
 * # Safety
 * Both handles must be live; `out` writable.
 */
enum EfStatus ef_is_house(const struct EfInstance *instance,
                          const struct EfAllocation *allocation,
                          bool *out);

/**
 * Envious ordered pairs with condition diagnostics as a JSON array of
 * `{envious, envied, sum_held, avg_held}` objects, agents 1-based.
 *
 * # Safety
 * Both handles must be live; `out` writable.
 */
enum EfStatus ef_envy_report_json(const struct EfInstance *instance,
                                  const struct EfAllocation *allocation,
                                  enum EfConcept concept,
                                  char **out);

/**
 * Finds a fair allocation. On success `*out_found` reports whether a
 * witness exists; when true, `*out_allocation` receives a new handle.
 * `leaf_budget` of 0 selects the default search budget.
 *
 * # Safety
 * `instance` must be a live handle; `out_allocation` and `out_found`
 * writable.
 */
enum EfStatus ef_solve(const struct EfInstance *instance,
                       enum EfConcept concept,
                       enum EfKind kind,
                       enum EfStrategy strategy,
                       uint64_t leaf_budget,
                       struct EfAllocation **out_allocation,
                       bool *out_found);

/**
 * All six existence flags of an instance as JSON:
 * `{"allocation": {"sef": bool, ...}, "house": {...}}`. `leaf_budget` of 0
 * selects the default budget.
 *
 * # Safety
 * `instance` must be a live handle; `out` writable.
 */
enum EfStatus ef_existence_profile_json(const struct EfInstance *instance,
                                        uint64_t leaf_budget,
                                        char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENVYFREE_H */
