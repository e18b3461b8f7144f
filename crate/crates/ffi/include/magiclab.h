#ifndef MAGICLAB_H
#define MAGICLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MLAB_OK 0

#define MLAB_ERR_NULL 1

#define MLAB_ERR_USAGE 2

#define MLAB_ERR_SCHEMA 3

#define MLAB_ERR_PRECONDITION 4

#define MLAB_ERR_INVARIANT 5

#define MLAB_ERR_PANIC 6

#define MLAB_MODE_EM 0

#define MLAB_MODE_SEM 1

typedef struct MlabDigraph MlabDigraph;

typedef struct MlabLabeling MlabLabeling;

typedef struct MlabValenceReport MlabValenceReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread; empty after a
 * success. Valid until the next call on the same thread.
 */
const char *mlab_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mlab_string_free(char *s);

/**
 * Builds a digraph on vertices `1..=n` from `arc_count` pairs stored flat in
 * `arcs` (`arcs[2i]` is the tail, `arcs[2i+1]` the head of arc `i`).
 *
 * # Safety
 * `arcs` must point to `2 * arc_count` readable values (may be null when
 * `arc_count` is 0); `out` must be writable.
 */
int32_t mlab_digraph_new(uint32_t n,
                         const uint32_t *arcs,
                         size_t arc_count,
                         struct MlabDigraph **out_graph);

/**
 * Builds `cycle:N`, `path:N` or `empty:N`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
int32_t mlab_digraph_builtin(const char *spec, struct MlabDigraph **out_graph);

/**
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void mlab_digraph_free(struct MlabDigraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
uint32_t mlab_digraph_order(const struct MlabDigraph *g);

/**
 * Number of arcs, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
uint32_t mlab_digraph_size(const struct MlabDigraph *g);

/**
 * Parses a labeling in the library's JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
int32_t mlab_labeling_from_json(const char *json, struct MlabLabeling **out_labeling);

/**
 * # Safety
 * `f` must be a live handle; the string written to `out` is released with
 * `mlab_string_free`.
 */
int32_t mlab_labeling_to_json(const struct MlabLabeling *f, char **out_json);

/**
 * # Safety
 * `f` must come from this library and not have been freed.
 */
void mlab_labeling_free(struct MlabLabeling *f);

/**
 * Writes the valence, or fails with `MLAB_ERR_PRECONDITION` when the
 * labeling is not edge-magic.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
int32_t mlab_labeling_valence(const struct MlabLabeling *f, uint32_t *out_valence);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
int32_t mlab_labeling_is_super(const struct MlabLabeling *f, bool *out_super);

/**
 * Applies `complement`, `sem-complement`, `odd` or `even`.
 *
 * # Safety
 * `f` must be a live handle, `op` a NUL-terminated string, `out` writable.
 */
int32_t mlab_labeling_transform(const struct MlabLabeling *f,
                                const char *op,
                                struct MlabLabeling **out_labeling);

/**
 * Exhaustive valence search. `mode` is `MLAB_MODE_EM` or `MLAB_MODE_SEM`;
 * `guard` caps `p + q`, with 0 meaning the environment or built-in default.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
int32_t mlab_oracle_run(const struct MlabDigraph *g,
                        int32_t mode,
                        uint32_t guard,
                        struct MlabValenceReport **out_report);

/**
 * # Safety
 * `r` must come from this library and not have been freed.
 */
void mlab_report_free(struct MlabValenceReport *r);

/**
 * Number of achieved valences, or 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t mlab_report_len(const struct MlabValenceReport *r);

/**
 * The `i`-th achieved valence in ascending order.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
int32_t mlab_report_valence(const struct MlabValenceReport *r, size_t i, uint32_t *out_valence);

/**
 * A fresh copy of the labeling that realizes the `i`-th valence.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
int32_t mlab_report_certificate(const struct MlabValenceReport *r,
                                size_t i,
                                struct MlabLabeling **out_labeling);

/**
 * Induced product labeling with inner factors from `S_p^k`. `h_json` is an
 * assignment file (`{"constant": member}` or `{"assignment": [...]}`); the
 * result is the labeled product as JSON.
 *
 * # Safety
 * `f` must be a live handle, `h_json` a NUL-terminated string, `out` writable.
 */
int32_t mlab_product_spk(const struct MlabLabeling *f, const char *h_json, char **out_json);

/**
 * Induced product labeling of an `S`-family outer factor (`d_json`) with
 * `T`-family inner factors (`h_json`).
 *
 * # Safety
 * Both inputs must be NUL-terminated strings; `out` must be writable.
 */
int32_t mlab_product_tqs(const char *d_json, const char *h_json, char **out_json);

/**
 * Component lengths of the product of `C_m` with copies of `C_n` oriented
 * so that the generator is `g`. Writes at most `capacity` lengths and the
 * true count to `out_len`; a short buffer fails with `MLAB_ERR_USAGE` after
 * setting `out_len`.
 *
 * # Safety
 * `lengths` must have room for `capacity` values (may be null when 0);
 * `out_len` must be writable.
 */
int32_t mlab_cycle_structure(uint32_t m,
                             uint32_t n,
                             uint32_t g,
                             uint32_t *lengths,
                             size_t capacity,
                             size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAGICLAB_H */
