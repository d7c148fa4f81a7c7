#ifndef CLIFGEO_H
#define CLIFGEO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Success; for `cg_run` and `cg_selftest` also "every check passed".
#define CG_OK 0

// The report was produced but at least one check failed.
#define CG_CHECKS_FAILED 1

#define CG_ERR_NULL -1

#define CG_ERR_UTF8 -2

// Malformed spec, field or options JSON, or a bad expression.
#define CG_ERR_SPEC -3

// The run itself failed (no admissible sample points, unsupported chart, ...).
#define CG_ERR_RUN -4

// Unknown command or missing command input.
#define CG_ERR_USAGE -5

#define CG_ERR_PANIC -6

// A parsed and compiled spacetime.
typedef struct CgSpec CgSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Open one of the builtin spacetimes by name.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
int32_t cg_spec_builtin(const char *name, struct CgSpec **out);

// Parse a spacetime spec from JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
int32_t cg_spec_from_json(const char *json, struct CgSpec **out);

// Override an existing parameter and recompile. On error the handle is unchanged.
//
// # Safety
// `spec` must come from `cg_spec_builtin` or `cg_spec_from_json`.
int32_t cg_spec_set_param(struct CgSpec *spec, const char *name, double value);

// The spec as JSON, in the same format `cg_spec_from_json` reads.
//
// # Safety
// `spec` must be a live handle and `out` a valid pointer.
int32_t cg_spec_to_json(const struct CgSpec *spec, char **out);

// # Safety
// `spec` must be null or a handle not yet freed.
void cg_spec_free(struct CgSpec *spec);

// Run `command` ("analyze", "killing", "em", "grav" or "mass") and return
// the JSON report in `*report_json`.
//
// `options_json` may be null; otherwise an object with any of `samples`,
// `seed`, `tol`, `verdict_tol`, `m2`, `radii` and `field` (an EM field
// object, required by "em"). Returns `CG_OK` or `CG_CHECKS_FAILED` when a
// report was written.
//
// # Safety
// `spec` must be a live handle, strings NUL-terminated, `report_json` valid.
int32_t cg_run(const struct CgSpec *spec,
               const char *command,
               const char *options_json,
               char **report_json);

// Algebra and expression property suite.
//
// # Safety
// `report_json` must be a valid pointer.
int32_t cg_selftest(uint64_t seed, char **report_json);

// Message for the last failure on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *cg_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void cg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLIFGEO_H */
