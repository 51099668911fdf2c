#ifndef QHOARE_H
#define QHOARE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QhStatus {
  QH_STATUS_OK = 0,
  QH_STATUS_NULL_ARGUMENT = 1,
  QH_STATUS_INVALID_UTF8 = 2,
  QH_STATUS_PARSE = 3,
  QH_STATUS_INVALID = 4,
  QH_STATUS_BUDGET = 5,
  QH_STATUS_UNSUPPORTED = 6,
  /**
   * A simulated assertion or deallocation failed.
   */
  QH_STATUS_RUNTIME = 7,
  QH_STATUS_INTERNAL = 8,
} QhStatus;

/**
 * Opaque circuit handle.
 */
typedef struct QhCircuit QhCircuit;

typedef struct QhPassConfig {
  size_t window;
  bool enable_peephole;
  bool enable_single;
  bool enable_multi;
  uint64_t solver_budget;
} QhPassConfig;

typedef struct QhMetrics {
  size_t width;
  size_t dag_depth;
  size_t gates;
} QhMetrics;

typedef struct QhEquivalence {
  bool per_input;
  bool common_phase;
  size_t inputs_checked;
} QhEquivalence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qh_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qh_version(void);

struct QhPassConfig qh_pass_config_default(void);

/**
 * Parses circuit text into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QhStatus qh_circuit_parse(const char *text, struct QhCircuit **out);

/**
 * Serializes a circuit; release the result with `qh_string_free`.
 * Returns null if `c` is null.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
char *qh_circuit_serialize(const struct QhCircuit *c);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void qh_circuit_free(struct QhCircuit *c);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void qh_string_free(char *s);

/**
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_circuit_metrics(const struct QhCircuit *c, struct QhMetrics *out);

/**
 * Optimizes `c` into a new handle. `cfg` may be null for defaults.
 * When `log_out` is non-null it receives the removal log as JSON lines,
 * to be released with `qh_string_free`.
 *
 * # Safety
 * Pointers must be valid or null where allowed.
 */
enum QhStatus qh_optimize(const struct QhCircuit *c,
                          const struct QhPassConfig *cfg,
                          struct QhCircuit **out,
                          char **log_out);

/**
 * Lowers every gate to CNOT, X, H, S, T and Tdg.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum QhStatus qh_decompose(const struct QhCircuit *c, struct QhCircuit **out);

/**
 * Compares two circuits on every basis input by simulation.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum QhStatus qh_verify(const struct QhCircuit *a,
                        const struct QhCircuit *b,
                        struct QhEquivalence *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHOARE_H */
