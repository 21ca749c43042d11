#ifndef QROTLEARN_H
#define QROTLEARN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QrlStatus {
  QRL_STATUS_OK = 0,
  QRL_STATUS_NULL_POINTER = 1,
  /**
   * Spin, magnetic index, angle or problem number outside its domain.
   */
  QRL_STATUS_INVALID_ARGUMENT = 2,
  QRL_STATUS_INFEASIBLE = 3,
  QRL_STATUS_NUMERICAL = 4,
  QRL_STATUS_BUFFER_TOO_SMALL = 5,
  QRL_STATUS_PANIC = 6,
} QrlStatus;

/**
 * Regime tag of an optimal-fidelity report.
 */
typedef enum QrlRegime {
  QRL_REGIME_CASE1 = 0,
  QRL_REGIME_CASE2_MIXTURE = 1,
  QRL_REGIME_CASE3 = 2,
  QRL_REGIME_J1_ANOMALOUS_PROBLEM2 = 3,
  QRL_REGIME_MEASURE_AND_OPERATE = 4,
} QrlRegime;

/**
 * Recycling kernel selector.
 */
typedef enum QrlKernel {
  QRL_KERNEL_LEADING_ORDER = 0,
  QRL_KERNEL_EXACT = 1,
} QrlKernel;

/**
 * Opaque memory population vector, ordered `m = j … −j`.
 */
typedef struct QrlMemory QrlMemory;

/**
 * Opaque optimal-fidelity report.
 */
typedef struct QrlReport QrlReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *qrl_status_string(enum QrlStatus status);

/**
 * Message of the last failed call on this thread, or null if none. Valid until
 * the next failing call on the same thread.
 */
const char *qrl_last_error_message(void);

/**
 * Optimal learning strategy with a quantum memory. `problem` is 1 or 2.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QrlStatus qrl_optimal_fidelity(uint32_t two_j,
                                    double theta,
                                    uint8_t problem_index,
                                    struct QrlReport **out);

/**
 * Optimal measure-and-operate benchmark. `problem` is 1 or 2.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QrlStatus qrl_mo_optimal_fidelity(uint32_t two_j,
                                       double theta,
                                       uint8_t problem_index,
                                       struct QrlReport **out);

/**
 * Average fidelity over pure inputs; NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double qrl_report_fidelity(const struct QrlReport *report);

/**
 * Entanglement fidelity; NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double qrl_report_entanglement_fidelity(const struct QrlReport *report);

/**
 * Twice the optimal memory magnetic number.
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum QrlStatus qrl_report_optimal_two_m(const struct QrlReport *report, int32_t *out);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum QrlStatus qrl_report_regime(const struct QrlReport *report, enum QrlRegime *out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void qrl_report_free(struct QrlReport *report);

/**
 * Entanglement fidelity of the Heisenberg-coupling learner with the memory in `|j, j⟩`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QrlStatus qrl_heisenberg_fidelity(uint32_t two_j, double theta, double *out);

/**
 * Memory prepared in `|j, m⟩`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QrlStatus qrl_memory_new(uint32_t two_j, int32_t two_m, struct QrlMemory **out);

/**
 * Applies one use of the recycling channel in place.
 *
 * # Safety
 * `memory` must be a live handle not aliased elsewhere during the call.
 */
enum QrlStatus qrl_memory_step(struct QrlMemory *memory, double theta, enum QrlKernel kernel);

/**
 * Number of populations, `2j + 1`; zero for a null handle.
 *
 * # Safety
 * `memory` must be null or a live handle.
 */
size_t qrl_memory_len(const struct QrlMemory *memory);

/**
 * Copies the populations into `buf`, ordered `m = j … −j`.
 *
 * # Safety
 * `memory` must be a live handle and `buf` valid for `len` writes.
 */
enum QrlStatus qrl_memory_probabilities(const struct QrlMemory *memory, double *buf, size_t len);

/**
 * Releases a memory handle. Null is ignored.
 *
 * # Safety
 * `memory` must be null or a handle not yet freed.
 */
void qrl_memory_free(struct QrlMemory *memory);

/**
 * Number of recycled uses that stay above the measure-and-operate benchmark.
 * `capped` is set when the search reached `t_max`.
 *
 * # Safety
 * `steps` and `capped` must be writable.
 */
enum QrlStatus qrl_persistence(uint32_t two_j,
                               double theta,
                               size_t t_max,
                               size_t *steps,
                               bool *capped);

/**
 * Inverse temperature above which a thermal memory beats the benchmark.
 *
 * # Safety
 * `out` must be writable.
 */
enum QrlStatus qrl_thermal_threshold(uint32_t two_j, double theta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QROTLEARN_H */
