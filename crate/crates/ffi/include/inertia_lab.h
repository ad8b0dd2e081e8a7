#ifndef INERTIA_LAB_H
#define INERTIA_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define IL_OK 0

#define IL_ERR_NULL_POINTER -1

#define IL_ERR_INVALID_UTF8 -2

// Unknown preset, bad polynomial text, bad integer or bad arguments.
#define IL_ERR_USAGE -3

// The computation itself failed; a report handle may still be produced.
#define IL_ERR_COMPUTE -4

// A report was produced but one of its verdicts failed.
#define IL_ERR_VERDICT -5

#define IL_ERR_PANIC -99

// A one-parameter family `f(t, x)` with its gcd data computed.
typedef struct IlFamily IlFamily;

// A run report, as emitted by the command line tool.
typedef struct IlReport IlReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string.
const char *il_version(void);

// Message for the last failure on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *il_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void il_string_free(char *s);

// Builds a family from a preset name (`s3`, `a5`, `psl27`, `psl33`).
//
// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
int32_t il_family_from_preset(const char *name, struct IlFamily **out);

// Builds a family from polynomial text such as `x^3 + t*x + 1`.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
int32_t il_family_parse(const char *text, struct IlFamily **out);

// # Safety
// `fam` must be null or a handle from `il_family_*`, freed once.
void il_family_free(struct IlFamily *fam);

// The constant `N` as a decimal string.
//
// # Safety
// `fam` must be a live handle; `out` must be writable.
int32_t il_family_n(const struct IlFamily *fam, char **out);

// Runs the gate with default options and writes the certificate as JSON.
//
// # Safety
// `fam` must be a live handle; `out_json` must be writable.
int32_t il_family_gate(const struct IlFamily *fam, char **out_json);

// Certifies the specialization at `c` (a decimal integer) and writes the
// certificate as JSON. `all_certified` may be null.
//
// # Safety
// `fam` must be a live handle; `c` a nul-terminated string; `out_json`
// writable; `all_certified` null or writable.
int32_t il_family_certify(const struct IlFamily *fam,
                          const char *c,
                          char **out_json,
                          bool *all_certified);

// Runs one command line invocation, `argv[0]` excluded, and returns its
// report. On `IL_ERR_COMPUTE` and `IL_ERR_VERDICT` the report is still
// written to `out`; on other errors `out` is left untouched.
//
// # Safety
// `argv` must point to `argc` nul-terminated strings; `out` must be writable.
int32_t il_run(size_t argc, const char *const *argv, struct IlReport **out);

// # Safety
// `r` must be null or a handle from `il_run`, freed once.
void il_report_free(struct IlReport *r);

// # Safety
// `r` must be a live handle; `out_json` must be writable.
int32_t il_report_json(const struct IlReport *r, char **out_json);

// 1 when every verdict passed, 0 otherwise, negative on a null handle.
//
// # Safety
// `r` must be null or a live handle.
int32_t il_report_passed(const struct IlReport *r);

// Number of verdict lines in the report, or 0 on a null handle.
//
// # Safety
// `r` must be null or a live handle.
size_t il_report_verdict_count(const struct IlReport *r);

// Verdict `i` as one `PASS`/`FAIL` line.
//
// # Safety
// `r` must be a live handle; `out` must be writable.
int32_t il_report_verdict(const struct IlReport *r, size_t i, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INERTIA_LAB_H */
