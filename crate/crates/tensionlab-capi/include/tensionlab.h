#ifndef TENSIONLAB_H
#define TENSIONLAB_H

/* Generated by cbindgen from the tensionlab-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status of every C API call.
typedef enum TlStatus {
  // Success.
  TL_STATUS_OK = 0,
  // Malformed input: bad document, unknown name, broken invariant.
  TL_STATUS_INVALID_INPUT = 1,
  // Numerical failure: eigensolver or LP did not converge.
  TL_STATUS_NUMERICAL_FAILURE = 2,
  // A required pointer argument was null.
  TL_STATUS_NULL_POINTER = 3,
  // A string argument was not valid UTF-8.
  TL_STATUS_INVALID_UTF8 = 4,
  // The library caught a panic; state is untouched.
  TL_STATUS_PANIC = 5,
} TlStatus;

// Opaque validated scenario handle.
typedef struct TlScenario TlScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *tl_version(void);

// Message of the most recent failure on this thread, or null if none.
// The caller owns the returned string and frees it with `tl_string_free`.
char *tl_last_error_message(void);

// Release a string allocated by this library.
//
// # Safety
// `ptr` must come from this library and must not be freed twice.
void tl_string_free(char *ptr);

// Parse and validate a scenario document. On success `*out` owns the
// handle; release it with `tl_scenario_free`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum TlStatus tl_scenario_parse(const char *json, struct TlScenario **out);

// Build one of the canonical demo scenarios (chsh, kcbs, leggett-garg,
// mermin-peres, ghz) as a handle.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid pointer.
enum TlStatus tl_scenario_demo(const char *name, struct TlScenario **out);

// Release a scenario handle.
//
// # Safety
// `scenario` must come from this library and must not be freed twice.
void tl_scenario_free(struct TlScenario *scenario);

// Quantum value of the scenario's inequality.
//
// # Safety
// `scenario` must be a live handle; `out` must be a valid pointer.
enum TlStatus tl_scenario_quantum_value(const struct TlScenario *scenario, double *out);

// Classical bound by exhaustive deterministic-strategy enumeration.
//
// # Safety
// `scenario` must be a live handle; `out` must be a valid pointer.
enum TlStatus tl_scenario_classical_bound(const struct TlScenario *scenario, double *out);

// Joint-distribution (Fine) feasibility of the scenario's quantum
// correlators: writes true iff a joint distribution exists.
//
// # Safety
// `scenario` must be a live handle; `out` must be a valid pointer.
enum TlStatus tl_scenario_fine_feasible(const struct TlScenario *scenario, bool *out);

// Full report (quantum value, classical bound, LP verdict, tension table)
// as a json-lines string. `violation_tol` is the margin for the violation
// flag; pass 1e-9 for the default.
//
// # Safety
// `scenario` must be a live handle; `out` must be a valid pointer.
enum TlStatus tl_scenario_report_json(const struct TlScenario *scenario,
                                      double violation_tol,
                                      char **out);

// Serialize a scenario handle back to its document form.
//
// # Safety
// `scenario` must be a live handle; `out` must be a valid pointer.
enum TlStatus tl_scenario_to_json(const struct TlScenario *scenario, char **out);

// Run any demo by name (including uncertainty and epr-choi) and return
// its json-lines report.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid pointer.
enum TlStatus tl_demo_report_json(const char *name, double violation_tol, char **out);

// Leggett-Garg K(θ) sweep. `thetas` and `ks` must point to `steps`
// doubles each; both are filled on success.
//
// # Safety
// `thetas` and `ks` must be valid for `steps` writes.
enum TlStatus tl_leggett_garg_sweep(double from,
                                    double to,
                                    uintptr_t steps,
                                    double *thetas,
                                    double *ks);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TENSIONLAB_H */
