#ifndef GDFV_H
#define GDFV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GdfvStatus {
  GDFV_STATUS_OK = 0,
  GDFV_STATUS_NULL_POINTER = 1,
  GDFV_STATUS_INVALID_ARGUMENT = 2,
  GDFV_STATUS_INVALID_MODEL = 3,
  GDFV_STATUS_PARSE = 4,
  GDFV_STATUS_IO = 5,
  GDFV_STATUS_BUDGET_EXCEEDED = 6,
  GDFV_STATUS_DIMENSION_MISMATCH = 7,
  GDFV_STATUS_UNKNOWN_SYMBOL = 8,
  GDFV_STATUS_TOO_LARGE = 9,
  GDFV_STATUS_INTERNAL = 10,
  GDFV_STATUS_PANIC = 11,
} GdfvStatus;

/**
 * A preprocessed GDFV decoder; owns a copy of its model.
 */
typedef struct GdfvDecoder GdfvDecoder;

/**
 * A validated hidden Markov model.
 */
typedef struct GdfvModel GdfvModel;

/**
 * A preprocessed (max,+) matrix for repeated matrix-vector products.
 */
typedef struct GdfvMultiplier GdfvMultiplier;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *gdfv_last_error(void);

/**
 * Builds a model from row-major probability arrays: `initial[n]`,
 * `transition[n*n]` (row = from-state) and `emission[n*k]`. Symbols are
 * named `a`, `b`, ... With `normalize`, rows are rescaled instead of
 * rejected.
 *
 * # Safety
 * The arrays must hold the stated number of doubles and `out` must be
 * writable.
 */
enum GdfvStatus gdfv_model_new(size_t n,
                               size_t k,
                               const double *initial,
                               const double *transition,
                               const double *emission,
                               bool normalize,
                               struct GdfvModel **out);

/**
 * Reads a model file in the text format of the `gdfv` command-line tool.
 *
 * # Safety
 * `path` must be a nul-terminated UTF-8 string and `out` writable.
 */
enum GdfvStatus gdfv_model_from_file(const char *path, bool normalize, struct GdfvModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void gdfv_model_free(struct GdfvModel *model);

/**
 * # Safety
 * `model` must be a live handle.
 */
size_t gdfv_model_states(const struct GdfvModel *model);

/**
 * # Safety
 * `model` must be a live handle.
 */
size_t gdfv_model_alphabet_size(const struct GdfvModel *model);

/**
 * Viterbi decoding. Writes `m` states to `path_out` and, if non-null, the
 * joint log-probability to `log_prob_out`.
 *
 * # Safety
 * `obs` holds `m` symbol indices, `path_out` has room for `m` states.
 */
enum GdfvStatus gdfv_viterbi(const struct GdfvModel *model,
                             const size_t *obs,
                             size_t m,
                             size_t *path_out,
                             double *log_prob_out);

/**
 * Preprocesses a decoder with block width `max(1, ⌊alpha·log₂ n⌋)`,
 * `alpha` in `(0, 0.5)`. A `mem_budget` of 0 selects the default.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum GdfvStatus gdfv_decoder_new(const struct GdfvModel *model,
                                 double alpha,
                                 uint64_t mem_budget,
                                 struct GdfvDecoder **out);

/**
 * Like [`gdfv_decoder_new`] with an explicit block width.
 *
 * # Safety
 * As [`gdfv_decoder_new`].
 */
enum GdfvStatus gdfv_decoder_new_with_width(const struct GdfvModel *model,
                                            size_t width,
                                            uint64_t mem_budget,
                                            struct GdfvDecoder **out);

/**
 * # Safety
 * `decoder` must be a live handle.
 */
size_t gdfv_decoder_width(const struct GdfvDecoder *decoder);

/**
 * As [`gdfv_viterbi`], using the preprocessed decoder.
 *
 * # Safety
 * As [`gdfv_viterbi`]; `decoder` must be a live handle.
 */
enum GdfvStatus gdfv_decoder_decode(const struct GdfvDecoder *decoder,
                                    const size_t *obs,
                                    size_t m,
                                    size_t *path_out,
                                    double *log_prob_out);

/**
 * # Safety
 * `decoder` must be null or a live handle.
 */
void gdfv_decoder_free(struct GdfvDecoder *decoder);

/**
 * Preprocesses a `rows × cols` row-major matrix in blocks of `width`
 * columns. A `mem_budget` of 0 selects the default.
 *
 * # Safety
 * `entries` holds `rows * cols` doubles and `out` is writable.
 */
enum GdfvStatus gdfv_multiplier_new(size_t rows,
                                    size_t cols,
                                    const double *entries,
                                    size_t width,
                                    uint64_t mem_budget,
                                    struct GdfvMultiplier **out);

/**
 * `values_out[i] = max_j A[i][j] + b[j]`, `argmax_out[i]` the largest such
 * `j` (or `cols - 1` when the row maximum is −∞). `argmax_out` may be null.
 *
 * # Safety
 * `b` holds `len` doubles, `values_out` (and `argmax_out` if non-null) have
 * room for `rows` entries.
 */
enum GdfvStatus gdfv_multiplier_multiply(const struct GdfvMultiplier *multiplier,
                                         const double *b,
                                         size_t len,
                                         double *values_out,
                                         size_t *argmax_out);

/**
 * # Safety
 * `multiplier` must be a live handle.
 */
size_t gdfv_multiplier_rows(const struct GdfvMultiplier *multiplier);

/**
 * # Safety
 * `multiplier` must be null or a live handle.
 */
void gdfv_multiplier_free(struct GdfvMultiplier *multiplier);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GDFV_H */
