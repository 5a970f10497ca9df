#ifndef HECKEALG_H
#define HECKEALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HkStatus {
  HK_STATUS_OK = 0,
  HK_STATUS_NULL_POINTER = 1,
  HK_STATUS_INVALID_ARGUMENT = 2,
  HK_STATUS_NOT_LOCAL = 3,
  HK_STATUS_INVARIANCE_VIOLATION = 4,
  HK_STATUS_UNSUPPORTED = 5,
  HK_STATUS_PARSE = 6,
  HK_STATUS_IO = 7,
  HK_STATUS_UTF8 = 8,
  HK_STATUS_OUT_OF_RANGE = 9,
  HK_STATUS_PANIC = 10,
} HkStatus;

// Opaque list of local factor records.
typedef struct HkResults HkResults;

// Numeric summary of one record.
typedef struct HkInvariants {
  uint64_t level;
  uint32_t weight;
  uint64_t characteristic;
  uint32_t residue_degree;
  size_t dimension;
  size_t embedding_dimension;
  size_t nilpotency_order;
  size_t gorenstein_defect;
  size_t number_gen_used;
  size_t sturm_prime_count;
  bool stop_certified;
} HkInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the next failing call.
const char *hk_last_error(void);

// Library version as a static string.
const char *hk_version(void);

// Number of primes up to the Sturm bound for weight `k` on Gamma0(`n`).
size_t hk_sturm_prime_count(uint64_t n, uint32_t k);

// Class number of the imaginary quadratic order of discriminant `d`.
//
// # Safety
// `out` must be valid for writes.
enum HkStatus hk_class_number(int64_t d, uint64_t *out);

// All local factors for level `n`, weight `k` and a trivial or Legendre character into GF(p^m).
//
// # Safety
// `out` must be valid for writes. On success `*out` owns a handle for [`hk_results_free`].
enum HkStatus hk_compute(uint64_t n,
                         uint32_t k,
                         uint64_t p,
                         uint32_t m,
                         bool legendre,
                         struct HkResults **out);

// Local factors of every dihedral form of level `n` in characteristic `p`.
//
// # Safety
// `out` must be valid for writes.
enum HkStatus hk_dihedral(uint64_t n, uint64_t p, bool completely_split, struct HkResults **out);

// Predicted level of the icosahedral form of the quintic "c0,...,c5".
//
// # Safety
// `poly` must be a NUL-terminated string and `out` valid for writes.
enum HkStatus hk_a5_level(const char *poly, uint64_t *out);

// Local factors of the icosahedral form of a quintic; `level` 0 predicts it.
//
// # Safety
// `poly` must be a NUL-terminated string and `out` valid for writes.
enum HkStatus hk_a5(const char *poly, uint64_t level, struct HkResults **out);

// Read a storage file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` valid for writes.
enum HkStatus hk_recover(const char *path, struct HkResults **out);

// Number of records; 0 for NULL.
//
// # Safety
// `r` must be NULL or a live handle.
size_t hk_results_len(const struct HkResults *r);

// # Safety
// `r` must be a live handle and `out` valid for writes.
enum HkStatus hk_results_get(const struct HkResults *r, size_t i, struct HkInvariants *out);

// Human readable summary; free with [`hk_string_free`]. NULL on error.
//
// # Safety
// `r` must be a live handle.
char *hk_results_summary(const struct HkResults *r);

// Append the records to a storage file.
//
// # Safety
// `r` must be a live handle and `path` a NUL-terminated string.
enum HkStatus hk_results_store(const struct HkResults *r, const char *path);

// Write the default LaTeX longtable.
//
// # Safety
// `r` must be a live handle and `path` a NUL-terminated string.
enum HkStatus hk_results_latex(const struct HkResults *r, const char *path);

// # Safety
// `r` must be NULL or a handle not yet freed.
void hk_results_free(struct HkResults *r);

// # Safety
// `s` must be NULL or a string returned by this library.
void hk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HECKEALG_H */
