/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ROABP_PIT_H
#define ROABP_PIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RoabpKind {
  ROABP_KIND_ROABP = 0,
  ROABP_KIND_COMMUTATIVE = 1,
  ROABP_KIND_SETML = 2,
} RoabpKind;

typedef enum RoabpStatus {
  ROABP_STATUS_OK = 0,
  ROABP_STATUS_NULL_POINTER = 1,
  ROABP_STATUS_INVALID_UTF8 = 2,
  ROABP_STATUS_PARSE = 3,
  ROABP_STATUS_SHAPE = 4,
  ROABP_STATUS_CHARACTERISTIC = 5,
  ROABP_STATUS_CAPACITY = 6,
  ROABP_STATUS_PRECONDITION = 7,
  ROABP_STATUS_INVALID_MODULUS = 8,
  ROABP_STATUS_BUFFER_TOO_SMALL = 9,
  ROABP_STATUS_PANIC = 10,
  ROABP_STATUS_OTHER = 11,
} RoabpStatus;

typedef enum RoabpVerdict {
  ROABP_VERDICT_ZERO = 0,
  ROABP_VERDICT_NONZERO = 1,
} RoabpVerdict;

// Opaque instance handle.
typedef struct RoabpInstance RoabpInstance;

typedef struct RoabpInfo {
  enum RoabpKind kind;
  uint64_t prime;
  size_t nvars;
  size_t degree;
  size_t width;
} RoabpInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *roabp_version(void);

// Copies the calling thread's last error message into `buf`. Returns the
// buffer size the full message needs, including the terminator; an empty
// message means the last call succeeded.
//
// # Safety
// `buf` must be null or valid for `cap` bytes.
size_t roabp_last_error_message(char *buf, size_t cap);

// Parses an instance file. `prime_override` replaces the header modulus
// unless it is 0.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum RoabpStatus roabp_instance_parse(const char *text,
                                      uint64_t prime_override,
                                      struct RoabpInstance **out);

// A reproducible random ROABP in identity order.
//
// # Safety
// `out` must be valid for writes.
enum RoabpStatus roabp_instance_random(uint64_t prime,
                                       size_t nvars,
                                       size_t degree,
                                       size_t width,
                                       uint64_t seed,
                                       bool nonzero,
                                       struct RoabpInstance **out);

// Releases a handle; null is ignored.
//
// # Safety
// `inst` must be null or a handle not yet freed.
void roabp_instance_free(struct RoabpInstance *inst);

// # Safety
// `inst` must be a live handle; `info` must be valid for writes.
enum RoabpStatus roabp_instance_info(const struct RoabpInstance *inst, struct RoabpInfo *info);

// Evaluates at `point[0..len]`; coordinates are reduced mod p.
//
// # Safety
// `inst` must be a live handle, `point` valid for `len` reads, `out` valid for writes.
enum RoabpStatus roabp_instance_eval(const struct RoabpInstance *inst,
                                     const uint64_t *point,
                                     size_t len,
                                     uint64_t *out);

// Writes the canonical text form.
//
// # Safety
// `inst` must be a live handle; `buf` null or valid for `cap` bytes; `needed` null or valid.
enum RoabpStatus roabp_instance_serialize(const struct RoabpInstance *inst,
                                          char *buf,
                                          size_t cap,
                                          size_t *needed);

// `n d w^ceil(log2 n)`; `Capacity` when it does not fit in 64 bits.
//
// # Safety
// `out` must be valid for writes.
enum RoabpStatus roabp_degree_bound(size_t nvars, size_t degree, size_t width, uint64_t *out);

// Known-order hitting set for identity order, row-major into
// `points[0..cap]` (`nvars` values per point). `*needed` receives the
// number of values required.
//
// # Safety
// `points` null or valid for `cap` writes; `needed` null or valid.
enum RoabpStatus roabp_hitting_set(uint64_t prime,
                                   size_t nvars,
                                   size_t degree,
                                   size_t width,
                                   uint64_t *points,
                                   size_t cap,
                                   size_t *needed);

// Known-order PIT; fails with `Characteristic` when p is not above the
// degree bound. `witness` (null or `nvars` values) receives the first
// nonzero point.
//
// # Safety
// `inst` must be a live handle; `verdict` valid; `witness` null or valid for `nvars` writes.
enum RoabpStatus roabp_pit_known_order(const struct RoabpInstance *inst,
                                       enum RoabpVerdict *verdict,
                                       uint64_t *witness);

// Commutative PIT with the standard shift family; `k = 0` selects the
// default algebra dimension.
//
// # Safety
// As for `roabp_pit_known_order`.
enum RoabpStatus roabp_pit_commutative(const struct RoabpInstance *inst,
                                       size_t k,
                                       enum RoabpVerdict *verdict,
                                       uint64_t *witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROABP_PIT_H */
