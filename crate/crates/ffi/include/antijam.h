#ifndef ANTIJAM_H
#define ANTIJAM_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum AjStatus {
  AJ_STATUS_OK = 0,
  AJ_STATUS_NULL_POINTER = 1,
  AJ_STATUS_INVALID_ARGUMENT = 2,
  AJ_STATUS_PARSE = 3,
  AJ_STATUS_VALIDATION = 4,
  AJ_STATUS_IO = 5,
  AJ_STATUS_ENUMERATION_CAP = 6,
  AJ_STATUS_OUT_OF_RANGE = 7,
  AJ_STATUS_NUMERIC = 8,
  AJ_STATUS_BUFFER_TOO_SMALL = 9,
  AJ_STATUS_PANIC = 10,
} AjStatus;

/**
 * Follower equilibrium anticipated by the leader.
 */
typedef enum AjSelector {
  AJ_SELECTOR_BEST_NE = 0,
  AJ_SELECTOR_WORST_NE = 1,
} AjSelector;

/**
 * Opaque learning result handle.
 */
typedef struct AjRunResult AjRunResult;

/**
 * Opaque scenario handle.
 */
typedef struct AjScenario AjScenario;

/**
 * Learning parameters. Obtain defaults from [`aj_learning_config_default`].
 */
typedef struct AjLearningConfig {
  double b1;
  double b2;
  double q_threshold;
  double inner_q_threshold;
  uintptr_t max_epochs;
  uintptr_t max_slots;
  uint64_t seed;
  bool reset_per_epoch;
} AjLearningConfig;

/**
 * Learned outcome of one period.
 */
typedef struct AjPeriodSummary {
  uintptr_t jammer_channel;
  double total_loss;
  double jammer_utility;
  uintptr_t epochs;
  uintptr_t slots;
  bool converged;
} AjPeriodSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *aj_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *aj_version(void);

/**
 * Loads and validates a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AjStatus aj_scenario_load(const char *path, struct AjScenario **out_scenario);

/**
 * Parses and validates scenario text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AjStatus aj_scenario_parse(const char *text, struct AjScenario **out_scenario);

/**
 * Frees a scenario. Null is ignored.
 *
 * # Safety
 * `scenario` must come from this library and not be used afterwards.
 */
void aj_scenario_free(struct AjScenario *scenario);

/**
 * Writes the UAV, channel and period counts.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AjStatus aj_scenario_dims(const struct AjScenario *scenario,
                               uintptr_t *n_uavs,
                               uintptr_t *n_channels,
                               uintptr_t *n_periods);

/**
 * Total loss of a joint action in `period`.
 *
 * # Safety
 * `uav_channels` must point to `n_uavs` values; other pointers valid.
 */
enum AjStatus aj_total_loss(const struct AjScenario *scenario,
                            uintptr_t period,
                            const uintptr_t *uav_channels,
                            uintptr_t n_uavs,
                            uintptr_t jammer_channel,
                            double *out_value);

/**
 * Jamming payoff of a joint action in `period`.
 *
 * # Safety
 * As for [`aj_total_loss`].
 */
enum AjStatus aj_jammer_utility(const struct AjScenario *scenario,
                                uintptr_t period,
                                const uintptr_t *uav_channels,
                                uintptr_t n_uavs,
                                uintptr_t jammer_channel,
                                double *out_value);

/**
 * Potential of the follower game at a joint action in `period`.
 *
 * # Safety
 * As for [`aj_total_loss`].
 */
enum AjStatus aj_potential(const struct AjScenario *scenario,
                           uintptr_t period,
                           const uintptr_t *uav_channels,
                           uintptr_t n_uavs,
                           uintptr_t jammer_channel,
                           double *out_value);

struct AjLearningConfig aj_learning_config_default(void);

/**
 * Learns every period of the scenario.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AjStatus aj_run(const struct AjScenario *scenario,
                     const struct AjLearningConfig *config,
                     struct AjRunResult **out_result);

/**
 * Frees a learning result. Null is ignored.
 *
 * # Safety
 * `result` must come from [`aj_run`] and not be used afterwards.
 */
void aj_run_result_free(struct AjRunResult *result);

/**
 * Total loss summed over periods.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AjStatus aj_run_result_total_loss(const struct AjRunResult *result, double *out_value);

/**
 * Learned outcome of one period. `uav_channels_out` receives one channel
 * per UAV and must hold at least `capacity` values.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AjStatus aj_run_result_period(const struct AjRunResult *result,
                                   uintptr_t period,
                                   uintptr_t *uav_channels_out,
                                   uintptr_t capacity,
                                   struct AjPeriodSummary *out_summary);

/**
 * Exhaustive leader/follower solution of one period.
 *
 * # Safety
 * All pointers must be valid; `uav_channels_out` holds `capacity` values.
 */
enum AjStatus aj_solve_stackelberg(const struct AjScenario *scenario,
                                   uintptr_t period,
                                   enum AjSelector selector,
                                   uint64_t enumeration_cap,
                                   uintptr_t *uav_channels_out,
                                   uintptr_t capacity,
                                   uintptr_t *out_jammer_channel,
                                   double *out_total_loss);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANTIJAM_H */
