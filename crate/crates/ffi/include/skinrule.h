#ifndef SKINRULE_H
#define SKINRULE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum SkinStatus {
  SKIN_STATUS_OK = 0,
  SKIN_STATUS_NULL_POINTER = 1,
  SKIN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Missing or unreadable file.
   */
  SKIN_STATUS_INPUT = 3,
  /**
   * Undecodable image, malformed CSV or LUT file.
   */
  SKIN_STATUS_FORMAT = 4,
  /**
   * Non-canonical mask pixel in strict mode.
   */
  SKIN_STATUS_ANNOTATION = 5,
  /**
   * Dataset directory layout problem or empty dataset.
   */
  SKIN_STATUS_LAYOUT = 6,
  /**
   * Image and mask sizes differ.
   */
  SKIN_STATUS_PAIRING = 7,
  /**
   * No skin or no non-skin records, or no records at all.
   */
  SKIN_STATUS_DEGENERATE = 8,
  SKIN_STATUS_IO = 9,
  SKIN_STATUS_PANIC = 10,
} SkinStatus;

/**
 * Opaque lookup table handle.
 */
typedef struct SkinLut SkinLut;

/**
 * Per-channel extent of a rule's skin region; bounds are meaningless when
 * `empty` is non-zero.
 */
typedef struct SkinChannelRanges {
  uint8_t r_min;
  uint8_t r_max;
  uint8_t g_min;
  uint8_t g_max;
  uint8_t b_min;
  uint8_t b_max;
  uint8_t empty;
} SkinChannelRanges;

/**
 * Raw confusion counts; rates are `i_pos / n_pos` and `i_neg / n_neg`.
 */
typedef struct SkinEvalCounts {
  uint64_t n_pos;
  uint64_t n_neg;
  uint64_t i_pos;
  uint64_t i_neg;
} SkinEvalCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *skin_last_error_message(void);

/**
 * Resolves a rule name such as `"rgb-ratio"` to its id.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_rule` must be writable.
 */
enum SkinStatus skin_rule_from_name(const char *name, uint32_t *out_rule);

/**
 * Classifies one pixel; writes 1 (skin) or 0 to `out_label`.
 *
 * # Safety
 * `out_label` must be writable.
 */
enum SkinStatus skin_classify(uint32_t rule, uint8_t r, uint8_t g, uint8_t b, uint8_t *out_label);

/**
 * Builds the full 2^24 table for a rule. Returns NULL on an unknown id.
 */
struct SkinLut *skin_lut_build(uint32_t rule);

/**
 * Releases a table from [`skin_lut_build`] or [`skin_lut_load`]. NULL is a no-op.
 *
 * # Safety
 * `lut` must be NULL or a live handle not freed before.
 */
void skin_lut_free(struct SkinLut *lut);

/**
 * Rule id the table was built for, or `u32::MAX` for NULL.
 *
 * # Safety
 * `lut` must be NULL or a live handle.
 */
uint32_t skin_lut_rule(const struct SkinLut *lut);

/**
 * Label of one colour: 1 skin, 0 non-skin. A NULL handle yields 0.
 *
 * # Safety
 * `lut` must be NULL or a live handle.
 */
uint8_t skin_lut_lookup(const struct SkinLut *lut, uint8_t r, uint8_t g, uint8_t b);

/**
 * Classifies `n_pixels` packed RGB8 pixels, writing 255 (skin) or 0 per
 * pixel into `out_mask`.
 *
 * # Safety
 * `rgb` must hold `3 * n_pixels` bytes and `out_mask` `n_pixels` bytes.
 */
enum SkinStatus skin_lut_classify_rgb8(const struct SkinLut *lut,
                                       const uint8_t *rgb,
                                       size_t n_pixels,
                                       uint8_t *out_mask);

/**
 * Writes the table in the `SKLUT001` cache format.
 *
 * # Safety
 * `lut` must be a live handle and `path` a NUL-terminated string.
 */
enum SkinStatus skin_lut_save(const struct SkinLut *lut, const char *path);

/**
 * Reads a `SKLUT001` cache file into a new handle stored in `*out_lut`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out_lut` writable.
 */
enum SkinStatus skin_lut_load(const char *path, struct SkinLut **out_lut);

/**
 * Exhaustive channel ranges of a rule's skin region.
 *
 * # Safety
 * `out` must be writable.
 */
enum SkinStatus skin_channel_ranges(uint32_t rule, struct SkinChannelRanges *out);

/**
 * Confusion counts for `n` records given as packed RGB8 pixels and one
 * label byte (0 or 1) each. Counts are written even when a class is
 * absent; the status then reports [`SkinStatus::Degenerate`].
 *
 * # Safety
 * `rgb` must hold `3 * n` bytes, `labels` `n` bytes, `out` must be writable.
 */
enum SkinStatus skin_evaluate_records(uint32_t rule,
                                      const uint8_t *rgb,
                                      const uint8_t *labels,
                                      size_t n,
                                      struct SkinEvalCounts *out);

/**
 * Confusion counts of a rule over a `images/` + `masks/` dataset directory.
 * `lenient` non-zero thresholds off-value mask pixels instead of failing.
 *
 * # Safety
 * `root` must be a NUL-terminated string and `out` writable.
 */
enum SkinStatus skin_evaluate_dataset(uint32_t rule,
                                      const char *root,
                                      int32_t lenient,
                                      struct SkinEvalCounts *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKINRULE_H */
