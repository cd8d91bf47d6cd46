#ifndef XORSHIFT_GF2_H
#define XORSHIFT_GF2_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum XsStatus {
  XS_STATUS_OK = 0,
  // Malformed input, out-of-range parameter or parse failure.
  XS_STATUS_INVALID = 1,
  XS_STATUS_NOT_PRIMITIVE = 2,
  XS_STATUS_NO_FACTORIZATION = 3,
  XS_STATUS_EXHAUSTED = 4,
  XS_STATUS_INTERNAL = 5,
  XS_STATUS_NULL_POINTER = 6,
} XsStatus;

// A running generator. It owns a copy of its spec.
typedef struct XsGenerator XsGenerator;

// A validated generator description.
typedef struct XsSpec XsSpec;

// Message for the most recent failure on this thread, or an empty string.
// The pointer stays valid until the next failing call on this thread.
const char *xs_last_error(void);

// Builds a spec from a primitive polynomial written as `hex:...` or
// `degs:...`, split into words of `word_size` bits.
//
// # Safety
// `poly` must be a NUL-terminated string and `out` a writable pointer.
enum XsStatus xs_spec_from_poly(const char *poly, size_t word_size, struct XsSpec **out);

// Parses the `m=`/`n=`/`vI=` text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum XsStatus xs_spec_parse(const char *text, struct XsSpec **out);

// Searches for a primitive spec with exactly `k` xorshift operations.
// `max_attempts == 0` selects the default budget of `64 * m * n`.
//
// # Safety
// `out` must be a writable pointer.
enum XsStatus xs_spec_sample(size_t m,
                             size_t n,
                             size_t k,
                             uint64_t search_seed,
                             size_t max_attempts,
                             struct XsSpec **out);

// # Safety
// `spec` must be null or a handle from this library not yet freed.
void xs_spec_free(struct XsSpec *spec);

// Word size `m`, or 0 for a null handle.
//
// # Safety
// `spec` must be null or a live handle.
size_t xs_spec_word_size(const struct XsSpec *spec);

// Number of stages `n`, or 0 for a null handle.
//
// # Safety
// `spec` must be null or a live handle.
size_t xs_spec_order(const struct XsSpec *spec);

// Right shift plus one XOR per nonzero tap word, or 0 for a null handle.
//
// # Safety
// `spec` must be null or a live handle.
size_t xs_spec_tap_count(const struct XsSpec *spec);

// Copies the `n` tap words into `taps`, which must hold `len >= n` words.
//
// # Safety
// `spec` must be a live handle and `taps` valid for `len` writes.
enum XsStatus xs_spec_taps(const struct XsSpec *spec, uint64_t *taps, size_t len);

// Serializes the spec; release the string with [`xs_string_free`].
//
// # Safety
// `spec` must be a live handle and `out` a writable pointer.
enum XsStatus xs_spec_to_text(const struct XsSpec *spec, char **out);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void xs_string_free(char *s);

// Writes whether the spec has period `2^{mn} - 1`.
//
// # Safety
// `spec` must be a live handle and `out` a writable pointer.
enum XsStatus xs_spec_verify_full_period(const struct XsSpec *spec, bool *out);

// Starts a generator from `len == n` seed words, oldest stage first.
// The all-zero seed is rejected.
//
// # Safety
// `spec` must be a live handle, `seed_words` valid for `len` reads and
// `out` a writable pointer.
enum XsStatus xs_generator_new(const struct XsSpec *spec,
                               const uint64_t *seed_words,
                               size_t len,
                               struct XsGenerator **out);

// Advances one step and writes the `m`-bit output word.
//
// # Safety
// `generator` must be a live handle and `out` a writable pointer.
enum XsStatus xs_generator_next(struct XsGenerator *generator, uint64_t *out);

// Fills `buf` with the next `8 * len` bits of the packed output stream.
// Each call starts on a fresh word, so splitting a fill into several calls
// yields the same bytes only when `m` is a multiple of 8.
//
// # Safety
// `generator` must be a live handle and `buf` valid for `len` writes.
enum XsStatus xs_generator_fill_bytes(struct XsGenerator *generator, uint8_t *buf, size_t len);

// # Safety
// `generator` must be null or a handle from this library not yet freed.
void xs_generator_free(struct XsGenerator *generator);

// Number of full-period generators of order `n` over `GF(2^m)`, as a
// decimal string; release it with [`xs_string_free`].
//
// # Safety
// `out` must be a writable pointer.
enum XsStatus xs_census(size_t m, size_t n, char **out);

#endif  /* XORSHIFT_GF2_H */
