#ifndef GOGOUT_H
#define GOGOUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GogStatus {
  GogStatus_Ok = 0,
  GogStatus_NullPointer = 1,
  GogStatus_Utf8 = 2,
  GogStatus_Parse = 3,
  GogStatus_Invalid = 4,
  GogStatus_Resource = 5,
  GogStatus_Internal = 6,
} GogStatus;

/**
 * Opaque graph of finite groups together with the limits it was loaded under.
 */
typedef struct GogGraph GogGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a graph of groups in the text format.
 *
 * `max_group_order` overrides the file's option when nonzero.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GogStatus gog_parse(const char *text, uintptr_t max_group_order, struct GogGraph **out);

/**
 * # Safety
 * `g` must come from [`gog_parse`] and not be freed twice. Null is ignored.
 */
void gog_free(struct GogGraph *g);

/**
 * Decides whether Out(G) is finite and writes the JSON report to `out`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GogStatus gog_decide(const struct GogGraph *g, char **out);

/**
 * Writes finite presentability evidence as JSON to `out`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GogStatus gog_certify_fp(const struct GogGraph *g, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void gog_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null.
 *
 * The pointer stays valid until the next call on the same thread.
 */
const char *gog_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOGOUT_H */
