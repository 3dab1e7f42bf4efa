#ifndef BSLOPE_H
#define BSLOPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first four match the exit codes of the command-line tool.
 */
typedef enum BslopeStatus {
  BSLOPE_STATUS_OK = 0,
  BSLOPE_STATUS_INVALID_INPUT = 1,
  BSLOPE_STATUS_BUDGET = 2,
  BSLOPE_STATUS_INTERNAL = 3,
  BSLOPE_STATUS_NULL_ARGUMENT = 4,
  BSLOPE_STATUS_INVALID_UTF8 = 5,
  BSLOPE_STATUS_PANIC = 6,
} BslopeStatus;

/**
 * An exponent matrix with peripheral curves, ready for evaluation.
 */
typedef struct BslopeProblem BslopeProblem;

/**
 * A parsed triangulation.
 */
typedef struct BslopeTriangulation BslopeTriangulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next bslope call on this thread.
 */
const char *bslope_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void bslope_string_free(char *s);

/**
 * Parses a face-gluing table.
 *
 * # Safety
 * `text_ptr` is a NUL-terminated string; `out` is valid for writes.
 */
enum BslopeStatus bslope_triangulation_parse(const char *text_ptr,
                                             struct BslopeTriangulation **out);

/**
 * # Safety
 * `tri` is null or a handle from [`bslope_triangulation_parse`] not yet freed.
 */
void bslope_triangulation_free(struct BslopeTriangulation *tri);

/**
 * Number of tetrahedra, or 0 for a null handle.
 *
 * # Safety
 * `tri` is null or a live handle.
 */
size_t bslope_triangulation_tets(const struct BslopeTriangulation *tri);

/**
 * Edge classes as `[{"id", "degree", "members": ["3(01)", ...]}, ...]`.
 *
 * # Safety
 * `tri` is a live handle; `out` is valid for writes.
 */
enum BslopeStatus bslope_triangulation_edges_json(const struct BslopeTriangulation *tri,
                                                  char **out);

/**
 * Builds the exponent matrix without the class selected by `omit_edge`
 * (`"tet:pair"` or a class id), rows in first-appearance order, and pairs
 * it with the curves in `curves_text` (`meridian:` and `longitude:` lines).
 *
 * # Safety
 * `tri` is a live handle; the strings are NUL-terminated; `out` is valid
 * for writes.
 */
enum BslopeStatus bslope_problem_new(const struct BslopeTriangulation *tri,
                                     const char *omit_edge,
                                     const char *curves_text,
                                     struct BslopeProblem **out);

/**
 * # Safety
 * `problem` is null or a handle from [`bslope_problem_new`] not yet freed.
 */
void bslope_problem_free(struct BslopeProblem *problem);

/**
 * Evaluates one index over `0`, `1`, `i`. The JSON record carries either a
 * slope or a `status` explaining why none was certified.
 *
 * # Safety
 * `problem` is a live handle; `index` is NUL-terminated; `out` is valid for
 * writes.
 */
enum BslopeStatus bslope_problem_evaluate(const struct BslopeProblem *problem,
                                          const char *index,
                                          char **out);

/**
 * Scans all `3^n` indices. `workers == 0` uses every core. Scans above 18
 * tetrahedra are refused unless `force` is set.
 *
 * # Safety
 * `problem` is a live handle; `out` is valid for writes.
 */
enum BslopeStatus bslope_problem_search(const struct BslopeProblem *problem,
                                        size_t workers,
                                        bool prune,
                                        bool force,
                                        char **out);

/**
 * Member reports for family `"K"` or `"J"` up to `max_n`. `data_dir` may be
 * null to use the default data directory.
 *
 * # Safety
 * `family` is NUL-terminated; `data_dir` is null or NUL-terminated; `out`
 * is valid for writes.
 */
enum BslopeStatus bslope_family_report(const char *family,
                                       size_t max_n,
                                       const char *data_dir,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BSLOPE_H */
