#ifndef TOWERLAB_H
#define TOWERLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum TowerlabStatus {
  TOWERLAB_STATUS_OK = 0,
  // A mathematical check or precondition failed.
  TOWERLAB_STATUS_CHECK_FAILED = 1,
  // Invalid parameters or a request outside the configured bounds.
  TOWERLAB_STATUS_CONFIG_ERROR = 2,
  // An internal consistency assertion fired.
  TOWERLAB_STATUS_INTERNAL = 3,
  // A required pointer argument was null.
  TOWERLAB_STATUS_NULL_POINTER = 4,
  // A string argument was not valid UTF-8.
  TOWERLAB_STATUS_INVALID_UTF8 = 5,
  // The library panicked; the call had no effect.
  TOWERLAB_STATUS_PANIC = 6,
} TowerlabStatus;

// Opaque handle to a tower spec.
typedef struct TowerlabSpec TowerlabSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *towerlab_last_error(void);

// The worked instance over `F_5`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum TowerlabStatus towerlab_spec_q5(struct TowerlabSpec **out);

// Member `(b, n)` of the `a = t = 0` family over `F_{p^ext}`; `b` and `n`
// are field elements in canonical text form.
//
// # Safety
// `b` and `n` must be NUL-terminated strings; `out` must be writable.
enum TowerlabStatus towerlab_spec_family(uint32_t p,
                                         uint32_t ext,
                                         const char *b,
                                         const char *n,
                                         struct TowerlabSpec **out);

// Loads a spec from its JSON document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TowerlabStatus towerlab_spec_from_json(const char *json, struct TowerlabSpec **out);

// Releases a handle; null is ignored.
//
// # Safety
// `spec` must be null or a handle returned by this library and not yet freed.
void towerlab_spec_free(struct TowerlabSpec *spec);

// Field size `q` behind the handle, or 0 for a null handle.
//
// # Safety
// `spec` must be null or a live handle.
uint64_t towerlab_spec_q(const struct TowerlabSpec *spec);

// JSON document for the handle.
//
// # Safety
// `spec` must be a live handle; `out` must be writable.
enum TowerlabStatus towerlab_spec_to_json(const struct TowerlabSpec *spec, char **out);

// Runs every named premise check. Returns `Ok` when all pass and
// `CheckFailed` otherwise; in both cases `out` receives the JSON object
// `{name: pass}`.
//
// # Safety
// `spec` must be a live handle; `out` must be writable.
enum TowerlabStatus towerlab_spec_validate(const struct TowerlabSpec *spec, char **out);

// Limit table for levels `0..=m_max` as JSON.
//
// # Safety
// `spec` must be a live handle; `out` must be writable.
enum TowerlabStatus towerlab_spec_analyze_json(const struct TowerlabSpec *spec,
                                               uint32_t m_max,
                                               char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void towerlab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOWERLAB_H */
