#ifndef KBIFRAME_H
#define KBIFRAME_H

/* Generated by cbindgen from the kbiframe-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which certification variant to run.
typedef enum KbfCertifyMode {
  // The pair against the instance operator K.
  KBF_MODE_K_BIFRAME = 0,
  // The sequence X against K (pair (X, X)).
  KBF_MODE_K_FRAME = 1,
  // The pair against the identity.
  KBF_MODE_BIFRAME = 2,
} KbfCertifyMode;

// Status codes shared across the ABI.
typedef enum KbfStatus {
  KBF_OK = 0,
  KBF_ERR_NULL_ARGUMENT = 1,
  KBF_ERR_UTF8 = 2,
  KBF_ERR_PARSE = 3,
  KBF_ERR_SCHEMA = 4,
  KBF_ERR_DIMENSION = 5,
  KBF_ERR_NUMERIC = 6,
  KBF_ERR_BAD_ARGUMENT = 7,
  KBF_ERR_UNKNOWN_NAME = 8,
  KBF_ERR_IO = 9,
} KbfStatus;

// Opaque certificate handle.
typedef struct KbfCertificate KbfCertificate;

// Opaque instance handle.
typedef struct KbfInstance KbfInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent error on this thread. The pointer
// stays valid until the next failing call on the same thread. Never null.
const char *kbf_last_error_message(void);

// Free a string returned by this library. Accepts null.
//
// # Safety
// `s` must be a pointer previously returned by a `kbf_*` function that
// documents `kbf_string_free` as its deallocator, and not freed before.
void kbf_string_free(char *s);

// Parse an instance from its canonical JSON form.
//
// # Safety
// `json` must be a valid NUL-terminated C string; `out` must be a valid
// pointer to a writable pointer slot.
enum KbfStatus kbf_instance_from_json(const char *json, struct KbfInstance **out);

// Build a documented gallery instance by name
// (`ex_c4`, `parseval`, `shift`, `ex_s_singular`,
// `perturbation_counterexample`); `n` is the truncation dimension where
// the family has one.
//
// # Safety
// `name` must be a valid NUL-terminated C string; `out` must be writable.
enum KbfStatus kbf_instance_gallery(const char *name, size_t n, struct KbfInstance **out);

// Build a seeded random instance of the named family
// (`rescale`, `controlled`, `skew`).
//
// # Safety
// `family` must be a valid NUL-terminated C string; `out` must be writable.
enum KbfStatus kbf_instance_random(const char *family,
                                   size_t n,
                                   size_t m,
                                   uint64_t seed,
                                   struct KbfInstance **out);

// Canonical JSON of the instance. Free with `kbf_string_free`.
//
// # Safety
// `inst` must be a live handle from this library (or null, yielding null).
char *kbf_instance_to_json(const struct KbfInstance *inst);

// SHA-256 digest (hex) of the canonicalized instance. Free with
// `kbf_string_free`.
//
// # Safety
// `inst` must be a live handle from this library (or null, yielding null).
char *kbf_instance_digest(const struct KbfInstance *inst);

// Ambient dimension of the instance; 0 for null.
//
// # Safety
// `inst` must be a live handle from this library or null.
size_t kbf_instance_dim(const struct KbfInstance *inst);

// Destroy an instance handle. Accepts null.
//
// # Safety
// `inst` must come from this library and must not be used afterwards.
void kbf_instance_free(struct KbfInstance *inst);

// Certify the instance. Non-positive tolerances select the defaults
// (herm_tol 1e-8, bis_tol 1e-9).
//
// # Safety
// `inst` must be a live handle; `out` must be writable.
enum KbfStatus kbf_certify(const struct KbfInstance *inst,
                           enum KbfCertifyMode mode,
                           double herm_tol,
                           double bis_tol,
                           struct KbfCertificate **out);

// 1 when the certificate affirms the K-biframe property, else 0.
//
// # Safety
// `cert` must be a live handle from this library or null.
int32_t kbf_certificate_is_k_biframe(const struct KbfCertificate *cert);

// 1 when the pair certifies tight.
//
// # Safety
// `cert` must be a live handle from this library or null.
int32_t kbf_certificate_is_tight(const struct KbfCertificate *cert);

// 1 when the pair certifies Parseval.
//
// # Safety
// `cert` must be a live handle from this library or null.
int32_t kbf_certificate_is_parseval(const struct KbfCertificate *cert);

// Optimal lower bound. Returns 1 and writes the finite value, or 0 when
// the bound is the Unbounded sentinel (K = 0) or the handle is null.
//
// # Safety
// `cert` must be a live handle or null; `out` must be writable or null.
int32_t kbf_certificate_lower_bound(const struct KbfCertificate *cert, double *out);

// Optimal upper bound b_opt; NaN for null.
//
// # Safety
// `cert` must be a live handle from this library or null.
double kbf_certificate_upper_bound(const struct KbfCertificate *cert);

// Hermitian residual of the certified pair's biframe operator.
//
// # Safety
// `cert` must be a live handle from this library or null.
double kbf_certificate_hermitian_residual(const struct KbfCertificate *cert);

// Canonical certificate JSON, tied to the instance digest. Free with
// `kbf_string_free`.
//
// # Safety
// Both handles must be live handles from this library (or null -> null).
char *kbf_certificate_to_json(const struct KbfCertificate *cert, const struct KbfInstance *inst);

// Destroy a certificate handle. Accepts null.
//
// # Safety
// `cert` must come from this library and must not be used afterwards.
void kbf_certificate_free(struct KbfCertificate *cert);

// Audit one statement against the instance. On success writes the report
// JSON (free with `kbf_string_free`) and the claim verdict (1 valid,
// 0 refuted).
//
// # Safety
// `inst` must be live; `statement` a valid C string; `out_json` and
// `out_claim_valid` writable or null.
enum KbfStatus kbf_audit(const struct KbfInstance *inst,
                         const char *statement,
                         uint64_t seed,
                         size_t trials,
                         double herm_tol,
                         double bis_tol,
                         char **out_json,
                         int32_t *out_claim_valid);

// Douglas range-inclusion check of two square matrices given as matrix
// documents (`{"schema_version":"1","matrix":[[[re,im],...],...]}`). On
// success writes the report JSON and the inclusion verdict.
//
// # Safety
// `t1_json` and `t2_json` must be valid C strings; out parameters
// writable or null.
enum KbfStatus kbf_douglas(const char *t1_json,
                           const char *t2_json,
                           char **out_json,
                           int32_t *out_included);

// Run the seeded property battery. Writes the summary JSON and the
// overall verdict (1 when every check passed).
//
// # Safety
// Out parameters must be writable or null.
enum KbfStatus kbf_run_suite(uint64_t seed, size_t trials, char **out_json, int32_t *out_all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KBIFRAME_H */
