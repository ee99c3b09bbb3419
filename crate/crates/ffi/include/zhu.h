#ifndef ZHU_H
#define ZHU_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum ZhuStatus {
  ZHU_STATUS_OK = 0,
  // The run completed and some check failed (or was inconclusive under the strict policy).
  ZHU_STATUS_CHECKS_FAILED = 1,
  // Invalid configuration or argument.
  ZHU_STATUS_USAGE = 2,
  // Internal invariant violated.
  ZHU_STATUS_INVARIANT = 3,
  ZHU_STATUS_NULL_POINTER = 4,
  ZHU_STATUS_INVALID_UTF8 = 5,
  // No run has completed on this session.
  ZHU_STATUS_NO_OUTCOME = 6,
  ZHU_STATUS_PANIC = 7,
} ZhuStatus;

typedef enum ZhuOutput {
  ZHU_OUTPUT_REPORT = 0,
  ZHU_OUTPUT_MANIFEST = 1,
  ZHU_OUTPUT_TEXT = 2,
} ZhuOutput;

// Opaque session handle.
typedef struct ZhuSession ZhuSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *zhu_version(void);

// New session with the default configuration (`all`).
struct ZhuSession *zhu_session_new(void);

// # Safety
// `s` must come from [`zhu_session_new`] and not be used afterwards.
void zhu_session_free(struct ZhuSession *s);

// Replaces the session configuration with a JSON config object. Missing keys take defaults.
//
// # Safety
// `s` must be a live session and `json` a NUL-terminated string.
enum ZhuStatus zhu_session_configure(struct ZhuSession *s, const char *json);

// Runs the configured command. Returns `ZHU_STATUS_OK` when every check passes.
//
// # Safety
// `s` must be a live session.
enum ZhuStatus zhu_session_run(struct ZhuSession *s);

// Writes a caller-owned string for the last outcome into `*out`.
//
// # Safety
// `s` must be a live session and `out` a valid pointer.
enum ZhuStatus zhu_session_output(struct ZhuSession *s, enum ZhuOutput kind, char **out);

// Process exit status the CLI would use for the last outcome, or -1.
//
// # Safety
// `s` must be a live session or null.
int32_t zhu_session_exit_status(const struct ZhuSession *s);

// Generalized binomial coefficient C(n, k) as caller-owned `p/q` text.
//
// # Safety
// `out` must be a valid pointer.
enum ZhuStatus zhu_binomial(int64_t n, int64_t k, char **out);

// Message for the last error on this thread as a caller-owned string, or null.
char *zhu_last_error(void);

// # Safety
// `p` must come from this library and not be used afterwards.
void zhu_string_free(char *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZHU_H */
