#ifndef ORDALG_H
#define ORDALG_H

/* Generated by cbindgen from ordalg-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define ORDALG_OK 0

/**
 * A domain error (precondition violated, named clause in the message).
 */
#define ORDALG_ERR_DOMAIN 1

/**
 * Malformed input.
 */
#define ORDALG_ERR_PARSE 2

/**
 * A null pointer argument.
 */
#define ORDALG_ERR_NULL 3

/**
 * Trace verification failed; the clause is in the last error message.
 */
#define ORDALG_ERR_VERIFY 4

/**
 * An opaque step function handle.
 */
typedef struct OrdalgStep OrdalgStep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the most recent failure on this thread. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *ordalg_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by an `ordalg_*` function and
 * not yet freed; null is accepted and ignored.
 */
void ordalg_string_free(char *s);

/**
 * Parses a step function from JSON into an opaque handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string.
 */
struct OrdalgStep *ordalg_step_parse(const char *json);

/**
 * Serializes a handle back to JSON.
 *
 * # Safety
 * `h` must be a live handle from this library.
 */
char *ordalg_step_to_json(const struct OrdalgStep *h);

/**
 * Releases a step handle.
 *
 * # Safety
 * `h` must be a live handle from this library or null.
 */
void ordalg_step_free(struct OrdalgStep *h);

/**
 * Pointwise sum of two step functions.
 *
 * # Safety
 * Both handles must be live handles from this library.
 */
struct OrdalgStep *ordalg_step_add(const struct OrdalgStep *a, const struct OrdalgStep *b);

/**
 * Pointwise difference of two step functions.
 *
 * # Safety
 * Both handles must be live handles from this library.
 */
struct OrdalgStep *ordalg_step_sub(const struct OrdalgStep *a, const struct OrdalgStep *b);

/**
 * Pointwise product of two step functions.
 *
 * # Safety
 * Both handles must be live handles from this library.
 */
struct OrdalgStep *ordalg_step_mul(const struct OrdalgStep *a, const struct OrdalgStep *b);

/**
 * The squared sup norm as a rational string.
 *
 * # Safety
 * `h` must be a live handle from this library.
 */
char *ordalg_step_sup_norm_sq(const struct OrdalgStep *h);

/**
 * Kernel of a closed set: input `{"space":…, "set":…?}`, output the
 * canonical kernel presentation.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string.
 */
char *ordalg_kernel(const char *json);

/**
 * `JMP_eps` of a step function; `eps` is a rational string.
 *
 * # Safety
 * Both arguments must be valid NUL-terminated strings.
 */
char *ordalg_jmp(const char *f_json, const char *eps);

/**
 * Extracts the idempotent below level `b` (rational string); returns the
 * certificate JSON.
 *
 * # Safety
 * Both arguments must be valid NUL-terminated strings.
 */
char *ordalg_extract_idempotent(const char *h_json, const char *b);

/**
 * A separating level for the real parts of a step function's values, or
 * JSON `null` when no two-sided gap exists.
 *
 * # Safety
 * `h_json` must be a valid NUL-terminated string.
 */
char *ordalg_re_gap(const char *h_json);

/**
 * Runs the extraction pipeline; returns the full trace JSON.
 *
 * # Safety
 * All arguments must be valid NUL-terminated strings.
 */
char *ordalg_ntip_run(const char *oracle_json, const char *nice_json, const char *q);

/**
 * Replays a trace against an oracle. Returns `ORDALG_OK` when verified;
 * `ORDALG_ERR_VERIFY` puts the failing clause in the last error message.
 *
 * # Safety
 * Both arguments must be valid NUL-terminated strings.
 */
int ordalg_verify_trace(const char *trace_json, const char *oracle_json);

/**
 * Certified polynomial indicator witness on separated disc unions;
 * `tol_sq` is a rational string.
 *
 * # Safety
 * All arguments must be valid NUL-terminated strings.
 */
char *ordalg_indicator_poly(const char *k0_json,
                            const char *k1_json,
                            const char *tol_sq,
                            int max_degree);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDALG_H */
