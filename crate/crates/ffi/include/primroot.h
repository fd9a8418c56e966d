#ifndef PRIMROOT_H
#define PRIMROOT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PrStatus {
  PR_STATUS_OK = 0,
  PR_STATUS_NULL_POINTER = 1,
  // Input outside the function's domain (not a prime, bad index, ...).
  PR_STATUS_DOMAIN = 2,
  // A named precondition on the parameters fails.
  PR_STATUS_PARAMETER = 3,
  PR_STATUS_INVALID_SIEVE = 4,
  PR_STATUS_BUDGET_EXCEEDED = 5,
  PR_STATUS_UNSUPPORTED = 6,
  PR_STATUS_PARSE = 7,
  // No certificate could be issued.
  PR_STATUS_NOT_CERTIFIED = 8,
  PR_STATUS_INTERNAL = 9,
} PrStatus;

typedef enum PrVerdict {
  PR_VERDICT_CERTIFIED = 0,
  PR_VERDICT_FAILED = 1,
  PR_VERDICT_INDETERMINATE = 2,
} PrVerdict;

// An issued certificate (any verdict).
typedef struct PrCertificate PrCertificate;

// A prime with its factored `p − 1` and discrete-log table.
typedef struct PrContext PrContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last non-OK status on this thread; empty if none.
// Valid until the next call into the library on the same thread.
const char *pr_last_error(void);

// # Safety
// `out` must be valid for writes.
enum PrStatus pr_is_prime(uint64_t n, bool *out);

// Least primitive root of the odd prime `p`, by brute force.
//
// # Safety
// `out` must be valid for writes.
enum PrStatus pr_least_primitive_root(uint64_t p, uint64_t *out);

// # Safety
// `out` must be valid for writes. On success `*out` owns a new context.
enum PrStatus pr_context_new(uint64_t p, struct PrContext **out);

// # Safety
// `ctx` must come from [`pr_context_new`] and not be used afterwards.
void pr_context_free(struct PrContext *ctx);

// The primitive root used as discrete-log base.
//
// # Safety
// `ctx` must be a live context and `out` valid for writes.
enum PrStatus pr_context_generator(const struct PrContext *ctx, uint64_t *out);

// `ω(p − 1)`.
//
// # Safety
// `ctx` must be a live context and `out` valid for writes.
enum PrStatus pr_context_omega(const struct PrContext *ctx, size_t *out);

// `S = Σ_x |Σ_{n<h} χ_j(x+n)|^{2r}` for the character of index `j`, with an
// absolute floating-point error bound in `error_bound` (may be null).
//
// # Safety
// `ctx` must be a live context; `out` valid for writes; `error_bound` null
// or valid for writes.
enum PrStatus pr_moment_sum(const struct PrContext *ctx,
                            uint64_t j,
                            uint64_t h,
                            uint32_t r,
                            double *out,
                            double *error_bound);

// Evaluates the criterion at a prime `p` with integer `h` and `H` given as
// a decimal integer or fraction `"a/b"`. `e = 0` means no sieve; otherwise
// `e` is an even divisor of `p − 1`. `precision` 0 selects the default.
//
// A certificate is returned for every verdict; query it with
// [`pr_certificate_verdict`].
//
// # Safety
// `big_h` must be a NUL-terminated string; `out` valid for writes.
enum PrStatus pr_certify_exact(uint64_t p,
                               uint32_t r,
                               uint64_t h,
                               const char *big_h,
                               uint64_t e,
                               uint32_t precision,
                               struct PrCertificate **out);

// Searches parameters for the smallest certified `H` at the prime `p`.
// Returns [`PrStatus::NotCertified`] (and no handle) when nothing certifies.
//
// # Safety
// `out` must be valid for writes.
enum PrStatus pr_optimize(uint64_t p, uint32_t precision, struct PrCertificate **out);

// # Safety
// `cert` must be a live certificate and `out` valid for writes.
enum PrStatus pr_certificate_verdict(const struct PrCertificate *cert, enum PrVerdict *out);

// Upper end of the enclosure of `H`, rounded up to a double.
//
// # Safety
// `cert` must be a live certificate and `out` valid for writes.
enum PrStatus pr_certificate_h_upper(const struct PrCertificate *cert, double *out);

// The certificate as JSON. Release the string with [`pr_string_free`].
//
// # Safety
// `cert` must be a live certificate and `out` valid for writes.
enum PrStatus pr_certificate_to_json(const struct PrCertificate *cert, char **out);

// # Safety
// `cert` must come from this library and not be used afterwards.
void pr_certificate_free(struct PrCertificate *cert);

// # Safety
// `s` must be a string returned by this library, or null.
void pr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRIMROOT_H */
