#ifndef PERFMATCH_H
#define PERFMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PmStatus {
  PM_OK = 0,
  /**
   * No perfect matching, or a construction's precondition failed.
   */
  PM_CONFLICT = 1,
  PM_PARSE = 2,
  PM_BUDGET = 3,
  PM_INVALID_ARGUMENT = 4,
  PM_PRECONDITION = 5,
  PM_INTERNAL = 6,
} PmStatus;

/**
 * A finite simple graph.
 */
typedef struct PmGraph PmGraph;

/**
 * A finite-state rooted tree.
 */
typedef struct PmTree PmTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Owned by the library
 * and valid until the next failing call on this thread.
 */
const char *pm_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void pm_string_free(char *s);

/**
 * Parses a graph file's contents.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_graph_parse(const char *text, struct PmGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from [`pm_graph_parse`], freed once.
 */
void pm_graph_free(struct PmGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t pm_graph_vertex_count(const struct PmGraph *g);

/**
 * Parses a tree file's contents.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_tree_parse(const char *text, struct PmTree **out);

/**
 * A built-in tree such as `three-regular` or `odd-comb`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_tree_preset(const char *name, struct PmTree **out);

/**
 * # Safety
 * `t` must be null or a handle from this library, freed once.
 */
void pm_tree_free(struct PmTree *t);

/**
 * Forced matching of the derivative as `m a b` lines. On a conflict the
 * status is `PM_CONFLICT`, `*out` stays untouched and the conflict is in
 * [`pm_last_error`].
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_derive(const struct PmGraph *g, char **out);

/**
 * Exhaustive check, for graphs the oracle accepts.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_has_perfect_matching(const struct PmGraph *g, bool *out);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_has_bad_ray(const struct PmTree *t, bool *out);

/**
 * Layered matching pairs meeting the window of depth `depth`.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_rooted_matching(const struct PmTree *t, size_t depth, size_t budget, char **out);

/**
 * End-guided matching. `ends` holds whitespace-separated descriptors such
 * as `|0 1|0`. The text starts with `b empty`, `b line` or
 * `b injective-part`, then the window's matching lines.
 *
 * # Safety
 * `t` must be a live handle, `ends` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum PmStatus pm_match_ends(const struct PmTree *t,
                            const char *ends,
                            size_t depth,
                            size_t budget,
                            char **out);

/**
 * Level dump of levels `0..=levels`, each checked on the way.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PmStatus pm_counterexample(size_t levels, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERFMATCH_H */
