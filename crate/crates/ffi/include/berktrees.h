/* C interface to the berktrees library. Regenerated by the build script; do not edit. */

#ifndef BERKTREES_H
#define BERKTREES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a library call. Zero means success; every other value
 * corresponds to one failure mode and comes with a message retrievable
 * through [`bt_last_error_message`].
 */
typedef enum BtStatus {
  BT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BT_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  BT_STATUS_INVALID_UTF8 = 2,
  /**
   * An exact value does not fit the requested numeric out-parameter.
   */
  BT_STATUS_UNREPRESENTABLE = 3,
  /**
   * The library panicked; this is a bug in the library.
   */
  BT_STATUS_PANIC = 4,
  /**
   * More working precision is needed; retry with a larger budget.
   */
  BT_STATUS_PRECISION_EXHAUSTED = 10,
  BT_STATUS_DIVISION_BY_ZERO = 11,
  BT_STATUS_NOT_DISTINCT = 12,
  BT_STATUS_SAME_POINT = 13,
  BT_STATUS_TRIPLE_NOT_SEPARATED = 14,
  /**
   * The answer cannot be certified at the working precision.
   */
  BT_STATUS_INDETERMINATE = 15,
  BT_STATUS_CONSTANT_REDUCTION = 16,
  BT_STATUS_PORTRAIT_INVALID = 17,
  BT_STATUS_FAMILY_INCOMPATIBLE = 18,
  BT_STATUS_VERTEX_IMAGE_MISSING = 19,
  BT_STATUS_NOT_COMPATIBLE = 20,
  BT_STATUS_MARKING_MISMATCH = 21,
  /**
   * Parse error; the message names the byte offset.
   */
  BT_STATUS_SYNTAX = 22,
  /**
   * Malformed job input (missing keys, bad shapes, bad values).
   */
  BT_STATUS_JOB = 23,
} BtStatus;

/**
 * Opaque handle to a rational map over the Puiseux series field.
 */
typedef struct BtMap BtMap;

/**
 * Opaque handle to a type-II point of the Berkovich line, stored as its
 * canonical ball.
 */
typedef struct BtPoint BtPoint;

/**
 * Opaque handle to a truncated Puiseux series.
 */
typedef struct BtSeries BtSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Never freed.
 */
const char *bt_version(void);

/**
 * Message for the most recent failure on the calling thread, or null if
 * nothing failed yet. The pointer stays valid until the next failing
 * call on the same thread; copy it if you need to keep it.
 */
const char *bt_last_error_message(void);

/**
 * Release a string returned by the library. Accepts null.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by a `bt_*` function
 * that hands out strings, not yet freed.
 */
void bt_string_free(char *s);

/**
 * Parse a series from its textual form (for example `"1 - t^1/2 + O(t^3)"`).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum BtStatus bt_series_parse(const char *text, struct BtSeries **out);

/**
 * Print a series in the same grammar [`bt_series_parse`] accepts.
 * Returns null only on a null handle or internal failure.
 *
 * # Safety
 * `series` must be null or a live handle from this library.
 */
char *bt_series_print(const struct BtSeries *series);

/**
 * Sum of two series.
 *
 * # Safety
 * `a` and `b` must be live series handles; `out` must be a valid pointer.
 */
enum BtStatus bt_series_add(const struct BtSeries *a,
                            const struct BtSeries *b,
                            struct BtSeries **out);

/**
 * Product of two series.
 *
 * # Safety
 * `a` and `b` must be live series handles; `out` must be a valid pointer.
 */
enum BtStatus bt_series_mul(const struct BtSeries *a,
                            const struct BtSeries *b,
                            struct BtSeries **out);

/**
 * Quotient of two series. `window` bounds the relative precision of a
 * non-terminating expansion; zero or negative selects the default.
 *
 * # Safety
 * `a` and `b` must be live series handles; `out` must be a valid pointer.
 */
enum BtStatus bt_series_div(const struct BtSeries *a,
                            const struct BtSeries *b,
                            int64_t window,
                            struct BtSeries **out);

/**
 * Valuation (least exponent) of a series as an exact fraction.
 * `*out_is_finite` is false — with the fraction zeroed — for the zero
 * series; a valuation that is only known modulo the working precision
 * reports `BT_STATUS_PRECISION_EXHAUSTED`.
 *
 * # Safety
 * `series` must be a live handle; the out-pointers must be valid.
 */
enum BtStatus bt_series_valuation(const struct BtSeries *series,
                                  int64_t *out_num,
                                  int64_t *out_den,
                                  bool *out_is_finite);

/**
 * Release a series handle. Accepts null.
 *
 * # Safety
 * `series` must be null or a live handle, not yet freed.
 */
void bt_series_free(struct BtSeries *series);

/**
 * Parse a type-II point written as `"<center; radius>"`, for example
 * `"<1 + t; 3/2>"`. The stored ball is canonical: parsing `"<1 + t^3; 2>"`
 * yields the same handle content as `"<1; 2>"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum BtStatus bt_point_parse(const char *text, struct BtPoint **out);

/**
 * The Gauss point `<0; 0>`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BtStatus bt_point_gauss(struct BtPoint **out);

/**
 * Print a point in the same form [`bt_point_parse`] accepts.
 * Returns null only on a null handle or internal failure.
 *
 * # Safety
 * `point` must be null or a live handle from this library.
 */
char *bt_point_print(const struct BtPoint *point);

/**
 * Whether two points are equal. Because stored balls are canonical this
 * is plain structural equality. Null handles compare unequal.
 *
 * # Safety
 * `a` and `b` must each be null or a live handle.
 */
bool bt_point_eq(const struct BtPoint *a, const struct BtPoint *b);

/**
 * Radius parameter of a point, as the exact valuation of its radius.
 *
 * # Safety
 * `point` must be a live handle; the out-pointers must be valid.
 */
enum BtStatus bt_point_radius(const struct BtPoint *point, int64_t *out_num, int64_t *out_den);

/**
 * Release a point handle. Accepts null.
 *
 * # Safety
 * `point` must be null or a live handle, not yet freed.
 */
void bt_point_free(struct BtPoint *point);

/**
 * Parse a rational map from numerator and denominator polynomials in
 * `z`, for example `"t*z^2 + 1"` and `"z"`. Fails with
 * `BT_STATUS_INDETERMINATE` when coprimality of the two polynomials
 * cannot be certified at the working precision.
 *
 * # Safety
 * `num` and `den` must be NUL-terminated strings; `out` must be a valid
 * pointer.
 */
enum BtStatus bt_map_parse(const char *num, const char *den, struct BtMap **out);

/**
 * Print a map as `numerator/denominator` in the variable `z`.
 * Returns null only on a null handle or internal failure.
 *
 * # Safety
 * `map` must be null or a live handle from this library.
 */
char *bt_map_print(const struct BtMap *map);

/**
 * Degree of a map, or -1 for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
int64_t bt_map_degree(const struct BtMap *map);

/**
 * Image of a type-II point under a map. `budget` bounds the searched
 * exponent range; zero or negative selects the default.
 *
 * # Safety
 * `map` and `point` must be live handles; `out` must be a valid pointer.
 */
enum BtStatus bt_map_image(const struct BtMap *map,
                           const struct BtPoint *point,
                           int64_t budget,
                           struct BtPoint **out);

/**
 * Reduction of a map to the residue sphere at the Gauss point, printed
 * as a rational function of `u`.
 *
 * # Safety
 * `map` must be a live handle; `out` must be a valid pointer.
 */
enum BtStatus bt_map_reduction(const struct BtMap *map, char **out);

/**
 * Tangent map of `map` at `v` toward `w`, printed as a rational function
 * of `u`. Fails with `BT_STATUS_CONSTANT_REDUCTION` when `w` is not the
 * image of `v`.
 *
 * # Safety
 * `map`, `v`, and `w` must be live handles; `out` must be a valid
 * pointer.
 */
enum BtStatus bt_map_tangent(const struct BtMap *map,
                             const struct BtPoint *v,
                             const struct BtPoint *w,
                             char **out);

/**
 * Release a map handle. Accepts null.
 *
 * # Safety
 * `map` must be null or a live handle, not yet freed.
 */
void bt_map_free(struct BtMap *map);

/**
 * Run one job and return its JSON report, exactly as the CLI would print
 * it. `kind` is a subcommand name (`tree`, `cover`, `verify`,
 * `rescalings`, `orbit`, `reduce`, `eval`); `job_json` holds the job
 * object itself rather than a file path. `precision` counts orders of
 * `t`; zero or negative selects the default.
 *
 * # Safety
 * `kind` and `job_json` must be NUL-terminated strings; `out` must be a
 * valid pointer.
 */
enum BtStatus bt_run_job(const char *kind, const char *job_json, int64_t precision, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BERKTREES_H */
