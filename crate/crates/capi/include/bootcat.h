#ifndef BOOTCAT_H
#define BOOTCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes shared by every entry point.
typedef enum BcStatus {
  BcStatus_Ok = 0,
  // A verification suite ran and found a failing property.
  BcStatus_VerifyFailed = 1,
  // The input expression, subset or suite name did not parse.
  BcStatus_ParseError = 2,
  // A result component is nonzero but not representable exactly.
  BcStatus_Unrepresentable = 3,
  // A required pointer argument was null.
  BcStatus_NullArgument = 4,
  // Arguments were structurally invalid (wrong shapes, bad ranges).
  BcStatus_InvalidArgument = 5,
  // An internal invariant failed.
  BcStatus_InternalError = 6,
} BcStatus;

// Opaque handle to an object modeled by its K-theory.
typedef struct BcObject BcObject;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent non-Ok status on this thread, or null.
// The pointer stays valid until the next call into this library from the
// same thread.
const char *bc_last_error_message(void);

// Parse an object expression (e.g. `Z^2 + Z/12 [0] ; Z/8 [1]` or
// `kappa(2)`) into a fresh handle.
//
// # Safety
// `expr` must be a valid NUL-terminated string; `out` must be a valid
// pointer to receive the handle.
enum BcStatus bc_object_parse(const char *expr, struct BcObject **out);

// Release a handle created by this library. Null is ignored.
//
// # Safety
// `obj` must be null or a pointer previously returned through an
// out-parameter of this library, not yet freed.
void bc_object_free(struct BcObject *obj);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string pointer previously returned by this
// library, not yet freed.
void bc_string_free(char *s);

// Canonical rendering of the object's K-theory.
//
// # Safety
// `obj` must be a live handle; `out` must be valid.
enum BcStatus bc_object_display(const struct BcObject *obj, char **out);

// # Safety
// `obj` must be a live handle; `out` must be valid.
enum BcStatus bc_object_is_compact(const struct BcObject *obj, bool *out);

// # Safety
// `obj` must be a live handle; `out` must be valid.
enum BcStatus bc_object_suspend(const struct BcObject *obj, struct BcObject **out);

// # Safety
// `a` and `b` must be live handles; `out` must be valid.
enum BcStatus bc_is_isomorphic(const struct BcObject *a, const struct BcObject *b, bool *out);

// K-theory of the tensor product as a fresh handle.
//
// # Safety
// `a` and `b` must be live handles; `out` must be valid.
enum BcStatus bc_tensor(const struct BcObject *a, const struct BcObject *b, struct BcObject **out);

// KK-groups as JSON: {"deg0": ..., "deg1": ..., "unrepresentable": [...]}.
//
// # Safety
// `a` and `b` must be live handles; `out` must be valid.
enum BcStatus bc_kk_json(const struct BcObject *a, const struct BcObject *b, char **out);

// Support of the object, rendered as "all" or "{2, 3}".
//
// # Safety
// `obj` must be a live handle; `out` must be valid.
enum BcStatus bc_support(const struct BcObject *obj, char **out);

// Support through the minimal injective resolution.
//
// # Safety
// `obj` must be a live handle; `out` must be valid.
enum BcStatus bc_supp_injective(const struct BcObject *obj, char **out);

// Membership of the object in the localizing class of a subset given as
// "all" or a comma list of points ("0,2,3").
//
// # Safety
// `obj` must be a live handle; `set` a valid string; `out` valid.
enum BcStatus bc_member(const struct BcObject *obj, const char *set, bool *out);

// Whether the localizing class of the subset is smashing.
//
// # Safety
// `set` must be a valid string; `out` valid.
enum BcStatus bc_is_smashing(const char *set, bool *out);

// Run a verification suite and write a JSON report. Returns Ok when every
// check passed and VerifyFailed otherwise; the report is written in both
// cases.
//
// # Safety
// `suite` must be a valid string; `out` must be valid.
enum BcStatus bc_verify_json(const char *suite,
                             uint64_t seed,
                             uint64_t prime_bound,
                             uint64_t max_order,
                             size_t corpus_size,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOOTCAT_H */
