#ifndef SEMISO_H
#define SEMISO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible function.
typedef enum SemisoStatus {
  SEMISO_STATUS_OK = 0,
  SEMISO_STATUS_NULL_POINTER = 1,
  SEMISO_STATUS_INVALID_UTF8 = 2,
  SEMISO_STATUS_PARSE = 3,
  SEMISO_STATUS_INVALID_ARGUMENT = 4,
  SEMISO_STATUS_FIELD_MISMATCH = 5,
  SEMISO_STATUS_NOT_PLANAR = 6,
  SEMISO_STATUS_ZERO_DIVISORS = 7,
  SEMISO_STATUS_CAP_EXCEEDED = 8,
  // A Rust panic was caught at the boundary.
  SEMISO_STATUS_INTERNAL = 9,
} SemisoStatus;

// Outcome of an equivalence test.
typedef enum SemisoVerdictKind {
  SEMISO_VERDICT_KIND_EQUIVALENT = 0,
  SEMISO_VERDICT_KIND_INEQUIVALENT = 1,
  SEMISO_VERDICT_KIND_UNKNOWN = 2,
} SemisoVerdictKind;

// Opaque finite field.
typedef struct SemisoField SemisoField;

// Opaque polynomial map over a field.
typedef struct SemisoPoly SemisoPoly;

// Opaque equivalence verdict.
typedef struct SemisoVerdict SemisoVerdict;

typedef struct SemisoNuclei {
  size_t left;
  size_t middle;
  size_t right;
  size_t nucleus;
  // Number of elements found by the α search.
  size_t alpha_count;
} SemisoNuclei;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *semiso_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void semiso_string_free(char *s);

// Field from a spec such as `p=3 n=6 mod=[-1,-1,1,0,-1,0,1]`; a null spec
// gives the canonical field.
//
// # Safety
// `spec` must be null or a nul-terminated string; `out_field` must be writable.
enum SemisoStatus semiso_field_new(const char *spec, struct SemisoField **out_field);

// # Safety
// `field` must be null or a handle from [`semiso_field_new`].
void semiso_field_free(struct SemisoField *field);

// Number of elements, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live field handle.
uint64_t semiso_field_order(const struct SemisoField *field);

// Index of the generator ξ (the class of x).
//
// # Safety
// `field` must be a live field handle.
uint32_t semiso_field_generator(const struct SemisoField *field);

// # Safety
// `field` must be a live handle, `a` and `b` valid element indices and
// `out_elem` writable.
enum SemisoStatus semiso_field_mul(const struct SemisoField *field,
                                   uint32_t a,
                                   uint32_t b,
                                   uint32_t *out_elem);

// Multiplicative order of a nonzero element.
//
// # Safety
// `field` must be a live handle and `out_order` writable.
enum SemisoStatus semiso_field_element_order(const struct SemisoField *field,
                                             uint32_t a,
                                             uint64_t *out_order);

// Parses `[c0,...]`, an integer, or `xi^k` (canonical field only).
//
// # Safety
// `field` must be a live handle, `s` a nul-terminated string and
// `out_elem` writable.
enum SemisoStatus semiso_field_parse_element(const struct SemisoField *field,
                                             const char *s,
                                             uint32_t *out_elem);

// Parses a polynomial such as `x^10 - x^2` over `field`.
//
// # Safety
// `field` must be a live handle, `s` a nul-terminated string and `out_poly`
// writable.
enum SemisoStatus semiso_poly_parse(const struct SemisoField *field,
                                    const char *s,
                                    struct SemisoPoly **out_poly);

// The LMPTB planar polynomial over `F_{q^(2m)}`.
//
// # Safety
// `field` must be a live handle and `out_poly` writable.
enum SemisoStatus semiso_poly_lmptb(const struct SemisoField *field,
                                    uint64_t q,
                                    size_t m,
                                    struct SemisoPoly **out_poly);

// # Safety
// `poly` must be null or a polynomial handle.
void semiso_poly_free(struct SemisoPoly *poly);

// Human-readable form, e.g. `x^270 - x^246 + ...`; null on a null handle.
//
// # Safety
// `poly` must be null or a live handle.
char *semiso_poly_to_string(const struct SemisoPoly *poly);

// # Safety
// `poly` must be a live handle and `out_elem` writable.
enum SemisoStatus semiso_poly_eval(const struct SemisoPoly *poly, uint32_t x, uint32_t *out_elem);

// Brute-force planarity.
//
// # Safety
// `poly` must be a live handle and `out_planar` writable.
enum SemisoStatus semiso_poly_is_planar(const struct SemisoPoly *poly, bool *out_planar);

// Nuclei sizes and α count of the semifield obtained from the planar DO
// polynomial `poly` at base point `a`.
//
// # Safety
// `poly` must be a live handle and `out_nuclei` writable.
enum SemisoStatus semiso_semifield_nuclei(const struct SemisoPoly *poly,
                                          uint32_t a,
                                          struct SemisoNuclei *out_nuclei);

// Planar polynomial of the isotope `x ⊙ y = (λ ⋆ x) ⋆ y`, where `⋆` is the
// semifield built from `poly` at base point `a`.
//
// # Safety
// `poly` must be a live handle and `out_poly` writable.
enum SemisoStatus semiso_semifield_isotope(const struct SemisoPoly *poly,
                                           uint32_t a,
                                           uint32_t lambda,
                                           struct SemisoPoly **out_poly);

// CCZ equivalence of two planar functions. `max_nodes == 0` and
// `timeout_secs <= 0` select the defaults.
//
// # Safety
// `f` and `g` must be live handles and `out_verdict` writable.
enum SemisoStatus semiso_ccz_equivalent(const struct SemisoPoly *f,
                                        const struct SemisoPoly *g,
                                        uint64_t max_nodes,
                                        double timeout_secs,
                                        struct SemisoVerdict **out_verdict);

// # Safety
// `v` must be null or a verdict handle.
void semiso_verdict_free(struct SemisoVerdict *v);

// # Safety
// `v` must be a live verdict handle.
enum SemisoVerdictKind semiso_verdict_kind(const struct SemisoVerdict *v);

// Full verdict with certificate or witness, as JSON.
//
// # Safety
// `v` must be null or a live verdict handle.
char *semiso_verdict_to_json(const struct SemisoVerdict *v);

// Runs the full worked example and returns the JSON report. `lambda_index`
// selects the power of λ used for the isotope (1 for the reference run).
//
// # Safety
// `out_json` and `out_all_met` must be writable.
enum SemisoStatus semiso_repro_run(uint64_t lambda_index, char **out_json, bool *out_all_met);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMISO_H */
