#ifndef RIGIDFORM_H
#define RIGIDFORM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RfStatus {
  RF_STATUS_OK = 0,
  RF_STATUS_NULL_POINTER = 1,
  RF_STATUS_INVALID_UTF8 = 2,
  // The scenario or arguments were rejected; see `rf_last_error`.
  RF_STATUS_INPUT = 3,
  // A result does not fit the output type.
  RF_STATUS_OVERFLOW = 4,
  RF_STATUS_PANIC = 5,
} RfStatus;

typedef struct RfReport RfReport;

typedef struct RfScenario RfScenario;

// Size caps for `rf_scenario_generate`.
typedef struct RfBounds {
  uint32_t max_order;
  uint32_t max_rank;
  uint32_t max_places;
  uint64_t max_modulus;
  bool negative_control;
} RfBounds;

typedef struct RfRunOptions {
  uint64_t seed;
  // Zero keeps the scenario's own budget.
  uint64_t budget;
  bool fail_fast;
} RfRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failed call on this thread, or an empty string.
// The pointer stays valid until the next library call on the same thread.
const char *rf_last_error(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void rf_string_free(char *s);

// Parse a TOML scenario.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid place to store a handle.
enum RfStatus rf_scenario_parse(const char *text, struct RfScenario **out);

// Load a scenario shipped with the library, such as `c2-sign-torus`.
//
// # Safety
// `name` must be a nul-terminated string and `out` a valid place to store a handle.
enum RfStatus rf_scenario_bundled(const char *name, struct RfScenario **out);

struct RfBounds rf_bounds_default(void);

// Generate a random scenario. A null `bounds` means the defaults.
//
// # Safety
// `bounds` must be null or valid, and `out` a valid place to store a handle.
enum RfStatus rf_scenario_generate(uint64_t seed,
                                   const struct RfBounds *bounds,
                                   struct RfScenario **out);

// # Safety
// `scenario` must be a live handle and `out` a valid place to store a string.
enum RfStatus rf_scenario_to_toml(const struct RfScenario *scenario, char **out);

// # Safety
// `scenario` must be null or a handle not yet freed.
void rf_scenario_free(struct RfScenario *scenario);

// Run every operation of a scenario. A report is produced whether or not the
// checks pass; inspect it with `rf_report_passed`. A null `options` means
// seed 1 and the scenario's budget.
//
// # Safety
// `scenario` must be a live handle, `options` null or valid, and `out` a valid place to store a handle.
enum RfStatus rf_run(const struct RfScenario *scenario,
                     const struct RfRunOptions *options,
                     struct RfReport **out);

// Budget used when neither the scenario nor the options set one.
uint64_t rf_default_budget(void);

// # Safety
// `report` must be null or a live handle.
bool rf_report_passed(const struct RfReport *report);

// Number of operation results in the report.
//
// # Safety
// `report` must be null or a live handle.
size_t rf_report_len(const struct RfReport *report);

// # Safety
// `report` must be a live handle and `out` a valid place to store a string.
enum RfStatus rf_report_to_toml(const struct RfReport *report, char **out);

// # Safety
// `report` must be null or a handle not yet freed.
void rf_report_free(struct RfReport *report);

// Smith normal form diagonal of a row-major `rows × cols` matrix, written as
// `min(rows, cols)` entries to `diagonal`.
//
// # Safety
// `entries` must hold `rows * cols` values and `diagonal` room for `min(rows, cols)`.
enum RfStatus rf_smith_diagonal(const int64_t *entries,
                                size_t rows,
                                size_t cols,
                                int64_t *diagonal);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIGIDFORM_H */
