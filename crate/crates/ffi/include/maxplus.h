#ifndef MAXPLUS_H
#define MAXPLUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MaxplusStatus {
  MAXPLUS_STATUS_OK = 0,
  MAXPLUS_STATUS_NULL_POINTER = 1,
  MAXPLUS_STATUS_INVALID_UTF8 = 2,
  MAXPLUS_STATUS_PARSE_ERROR = 3,
  MAXPLUS_STATUS_INVALID_AUTOMATON = 4,
  MAXPLUS_STATUS_CAP_EXCEEDED = 5,
  MAXPLUS_STATUS_IO_ERROR = 6,
  MAXPLUS_STATUS_INTERNAL = 7,
  MAXPLUS_STATUS_PANIC = 8,
} MaxplusStatus;

typedef enum MaxplusMethod {
  MAXPLUS_METHOD_EXHAUSTIVE = 0,
  MAXPLUS_METHOD_TRACTABLE = 1,
} MaxplusMethod;

/*
 Opaque automaton handle.
 */
typedef struct MaxplusAutomaton MaxplusAutomaton;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer is
 valid until the next library call on the same thread.
 */
const char *maxplus_last_error(void);

/*
 Parses an automaton from its JSON description.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MaxplusStatus maxplus_automaton_from_json(const char *json, struct MaxplusAutomaton **out);

/*
 Loads an automaton from a JSON file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MaxplusStatus maxplus_automaton_load(const char *path, struct MaxplusAutomaton **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `aut` must come from this library and not be used afterwards.
 */
void maxplus_automaton_free(struct MaxplusAutomaton *aut);

/*
 Number of states, or 0 for a null handle.

 # Safety
 `aut` must be null or a live handle.
 */
size_t maxplus_automaton_num_states(const struct MaxplusAutomaton *aut);

/*
 Serialises an automaton back to JSON.

 # Safety
 `aut` must be a live handle and `out` a valid pointer.
 */
enum MaxplusStatus maxplus_automaton_to_json(const struct MaxplusAutomaton *aut, char **out);

/*
 Evaluates the automaton on a word in run-length syntax, e.g. `"(a^2 b)^3"`.
 The value is written as a decimal string, or `"-inf"` for rejected words.

 # Safety
 `aut` must be a live handle, `word` a NUL-terminated string and `out` a
 valid pointer.
 */
enum MaxplusStatus maxplus_eval(const struct MaxplusAutomaton *aut, const char *word, char **out);

/*
 Decides whether `a` is big-O of `b`; writes 1 (big-O) or 0 to `is_bigo`.

 # Safety
 `a`, `b` must be live handles and `is_bigo` a valid pointer.
 */
enum MaxplusStatus maxplus_check(const struct MaxplusAutomaton *a,
                                 const struct MaxplusAutomaton *b,
                                 enum MaxplusMethod method,
                                 int *is_bigo);

/*
 Like `maxplus_check`, but writes the full verdict as a JSON document.

 # Safety
 `a`, `b` must be live handles and `out` a valid pointer.
 */
enum MaxplusStatus maxplus_check_json(const struct MaxplusAutomaton *a,
                                      const struct MaxplusAutomaton *b,
                                      enum MaxplusMethod method,
                                      char **out);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void maxplus_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXPLUS_H */
