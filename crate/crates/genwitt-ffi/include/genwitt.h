#ifndef GENWITT_H
#define GENWITT_H

/* Generated by cbindgen from the genwitt-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum GwStatus {
  GW_STATUS_OK = 0,
  GW_STATUS_NULL_ARGUMENT = 1,
  GW_STATUS_INVALID_UTF8 = 2,
  GW_STATUS_PARSE_ERROR = 3,
  GW_STATUS_INVALID_INPUT = 4,
  GW_STATUS_MATH_FAILURE = 5,
  GW_STATUS_INTERNAL_ERROR = 6,
} GwStatus;

/**
 * Opaque algebra configuration: rank plus slopes.
 */
typedef struct GwConfig GwConfig;

/**
 * Opaque element: a canonical rational combination of basis elements.
 */
typedef struct GwElement GwElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *gw_last_error_message(void);

/**
 * Creates a configuration of rank `n`. `slopes` is either null (all
 * slopes one) or a comma-separated list of `n` nonzero rationals such
 * as `"1,2/3,-5"`.
 *
 * # Safety
 * `slopes` must be null or a valid NUL-terminated string; `out` must be
 * a valid pointer.
 */
enum GwStatus gw_config_new(uintptr_t n, const char *slopes, struct GwConfig **out);

/**
 * # Safety
 * `cfg` must be null or a pointer from [`gw_config_new`], not yet freed.
 */
void gw_config_free(struct GwConfig *cfg);

/**
 * Rank of the configuration; 0 if `cfg` is null.
 *
 * # Safety
 * `cfg` must be null or a valid configuration handle.
 */
uintptr_t gw_config_rank(const struct GwConfig *cfg);

/**
 * Parses an element in the textual grammar, e.g.
 * `"3/2*(1,0|2,-1)_1 - (0,0|0,0)_2"`.
 *
 * # Safety
 * All pointers must be valid; `text` NUL-terminated.
 */
enum GwStatus gw_element_parse(const struct GwConfig *cfg,
                               const char *text,
                               struct GwElement **out);

/**
 * Formats an element canonically (terms lex-descending).
 *
 * # Safety
 * `el` must be a valid element handle; `out` a valid pointer. Free the
 * returned string with [`gw_string_free`].
 */
enum GwStatus gw_element_format(const struct GwElement *el, char **out);

/**
 * # Safety
 * `el` must be null or an element handle not yet freed.
 */
void gw_element_free(struct GwElement *el);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gw_string_free(char *s);

/**
 * Whether the element is zero.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GwStatus gw_element_is_zero(const struct GwElement *el, bool *out);

/**
 * Bracket `[x, y]`.
 *
 * # Safety
 * Pointers must be valid handles from this library.
 */
enum GwStatus gw_bracket(const struct GwConfig *cfg,
                         const struct GwElement *x,
                         const struct GwElement *y,
                         struct GwElement **out);

/**
 * String number: the count of distinct degrees in the support.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GwStatus gw_string_number(const struct GwElement *el, uintptr_t *out);

/**
 * Greatest lower index over all terms; fails on the zero element.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GwStatus gw_max_lower_index(const struct GwElement *el, int64_t *out);

/**
 * Finds `M = (0|j)_t` with `[M, l]` nonzero and all lower indices
 * positive; returns the multiplier's text and the bracket.
 *
 * # Safety
 * Pointers must be valid. Free the outputs with [`gw_string_free`] and
 * [`gw_element_free`].
 */
enum GwStatus gw_lemma1_multiplier(const struct GwConfig *cfg,
                                   const struct GwElement *l,
                                   char **multiplier_out,
                                   struct GwElement **product_out);

/**
 * Scans the box `|upper| ≤ box_upper`, `|lower| ≤ box_lower` for a basis
 * element that `ad l` fails to scale. On success `*counterexample_out`
 * holds its text, or null when every element of the box passes.
 *
 * # Safety
 * Pointers must be valid. Free the output with [`gw_string_free`].
 */
enum GwStatus gw_ad_diag_check(const struct GwConfig *cfg,
                               const struct GwElement *l,
                               int64_t box_upper,
                               int64_t box_lower,
                               char **counterexample_out);

/**
 * Breadth-first ideal closure of `l`. `reached_mask_out` gets bit `k−1`
 * set for every direction `k` whose target `(0,…,0|0,…,0)_k` was
 * reached.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GwStatus gw_ideal_witness(const struct GwConfig *cfg,
                               const struct GwElement *l,
                               int64_t mbox_upper,
                               int64_t mbox_lower,
                               int64_t rbox_upper,
                               int64_t rbox_lower,
                               uintptr_t max_iter,
                               uintptr_t *rank_out,
                               uintptr_t *iterations_out,
                               bool *saturated_out,
                               uint32_t *reached_mask_out);

/**
 * Antidifferentiates a rank-one function element given in the textual
 * grammar without direction suffixes, e.g. `"(1|1) - (0|2)"`, returning
 * `g` with `∂(g) = f` as text.
 *
 * # Safety
 * Pointers must be valid. Free the output with [`gw_string_free`].
 */
enum GwStatus gw_integrate(const struct GwConfig *cfg, const char *f_text, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GENWITT_H */
