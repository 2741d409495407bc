#ifndef LAGCAT_H
#define LAGCAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum LagcatStatus {
  LAGCAT_STATUS_OK = 0,
  LAGCAT_STATUS_NULL_POINTER = 1,
  LAGCAT_STATUS_INVALID_ARGUMENT = 2,
  LAGCAT_STATUS_DIMENSION_MISMATCH = 3,
  LAGCAT_STATUS_FIELD_MISMATCH = 4,
  LAGCAT_STATUS_NOT_LAGRANGIAN = 5,
  LAGCAT_STATUS_SINGULAR = 6,
  LAGCAT_STATUS_NOT_UNITARY = 7,
  LAGCAT_STATUS_NON_CONVERGENCE = 8,
  LAGCAT_STATUS_SPACE_MISMATCH = 9,
  LAGCAT_STATUS_UNSUPPORTED = 10,
  LAGCAT_STATUS_PANIC = 98,
  LAGCAT_STATUS_OTHER = 99,
} LagcatStatus;

/**
 * Composition algorithm for [`lagcat_compose`].
 */
typedef enum LagcatMethod {
  /**
   * Closed form, falling back to brute force when the spectral gap is ambiguous.
   */
  LAGCAT_METHOD_FORMULA = 0,
  LAGCAT_METHOD_BRUTE_FORCE = 1,
} LagcatMethod;

/**
 * Lagrangian correspondence `V0 → V1`, stored as its graph isometry `u`.
 */
typedef struct LagcatCorrespondence LagcatCorrespondence;

/**
 * Dense real or complex matrix.
 */
typedef struct LagcatMatrix LagcatMatrix;

/**
 * Super Hilbert space `V⁺ ⊕ V⁻` without Clifford action.
 */
typedef struct LagcatSpace LagcatSpace;

/**
 * Numerical tolerances. Pass `NULL` wherever a tolerance pointer is accepted
 * to use [`lagcat_tolerances_default`].
 */
typedef struct LagcatTolerances {
  double proj;
  double ortho;
  double rank_cutoff;
} LagcatTolerances;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or `NULL`. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *lagcat_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lagcat_version(void);

struct LagcatTolerances lagcat_tolerances_default(void);

/**
 * Real matrix from `rows * cols` row-major entries.
 *
 * # Safety
 * `data` must point to `rows * cols` doubles (it may be `NULL` when that
 * product is zero); `out` must be writable.
 */
enum LagcatStatus lagcat_matrix_new_real(size_t rows,
                                         size_t cols,
                                         const double *data,
                                         struct LagcatMatrix **out);

/**
 * Complex matrix from row-major real and imaginary parts.
 *
 * # Safety
 * `re` and `im` must each point to `rows * cols` doubles; `out` must be writable.
 */
enum LagcatStatus lagcat_matrix_new_complex(size_t rows,
                                            size_t cols,
                                            const double *re,
                                            const double *im,
                                            struct LagcatMatrix **out);

/**
 * # Safety
 * `m` must be `NULL` or a handle from this library that has not been freed.
 */
void lagcat_matrix_free(struct LagcatMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `rows` and `cols` must be writable.
 */
enum LagcatStatus lagcat_matrix_shape(const struct LagcatMatrix *m, size_t *rows, size_t *cols);

/**
 * # Safety
 * `m` must be a live handle.
 */
bool lagcat_matrix_is_complex(const struct LagcatMatrix *m);

/**
 * Entry `(i, j)`. `im` may be `NULL`.
 *
 * # Safety
 * `m` must be a live handle; `re` must be writable.
 */
enum LagcatStatus lagcat_matrix_get(const struct LagcatMatrix *m,
                                    size_t i,
                                    size_t j,
                                    double *re,
                                    double *im);

/**
 * # Safety
 * `out` must be writable.
 */
enum LagcatStatus lagcat_space_new(size_t dim_plus,
                                   size_t dim_minus,
                                   bool is_complex,
                                   struct LagcatSpace **out);

/**
 * `ΠV`: the same space with the grading reversed.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum LagcatStatus lagcat_space_opposite(const struct LagcatSpace *s, struct LagcatSpace **out);

/**
 * # Safety
 * `s` must be a live handle.
 */
enum LagcatStatus lagcat_space_dims(const struct LagcatSpace *s,
                                    size_t *dim_plus,
                                    size_t *dim_minus);

/**
 * # Safety
 * `s` must be `NULL` or a handle that has not been freed.
 */
void lagcat_space_free(struct LagcatSpace *s);

/**
 * Correspondence from its graph isometry `u : V0⁻ ⊕ V1⁺ → V0⁺ ⊕ V1⁻`.
 *
 * # Safety
 * Handles must be live; `tol` may be `NULL`; `out` must be writable.
 */
enum LagcatStatus lagcat_correspondence_from_u(const struct LagcatSpace *v0,
                                               const struct LagcatSpace *v1,
                                               const struct LagcatMatrix *u,
                                               const struct LagcatTolerances *tol,
                                               struct LagcatCorrespondence **out);

/**
 * Correspondence `graph(T)` for an invertible `T : V0 → V1`.
 *
 * # Safety
 * Handles must be live; `tol` may be `NULL`; `out` must be writable.
 */
enum LagcatStatus lagcat_correspondence_from_t(const struct LagcatSpace *v0,
                                               const struct LagcatSpace *v1,
                                               const struct LagcatMatrix *t,
                                               const struct LagcatTolerances *tol,
                                               struct LagcatCorrespondence **out);

/**
 * The diagonal of `V × V`.
 *
 * # Safety
 * `v` must be live; `tol` may be `NULL`; `out` must be writable.
 */
enum LagcatStatus lagcat_correspondence_identity(const struct LagcatSpace *v,
                                                 const struct LagcatTolerances *tol,
                                                 struct LagcatCorrespondence **out);

/**
 * # Safety
 * `c` must be `NULL` or a handle that has not been freed.
 */
void lagcat_correspondence_free(struct LagcatCorrespondence *c);

/**
 * Copy of the graph isometry `u`.
 *
 * # Safety
 * `c` must be live; `out` must be writable.
 */
enum LagcatStatus lagcat_correspondence_u(const struct LagcatCorrespondence *c,
                                          struct LagcatMatrix **out);

/**
 * The operator `T` with `L = graph(T)`. Fails with `LAGCAT_STATUS_SINGULAR`
 * when `u01` is not invertible.
 *
 * # Safety
 * `c` must be live; `tol` may be `NULL`; `out` must be writable.
 */
enum LagcatStatus lagcat_correspondence_to_t(const struct LagcatCorrespondence *c,
                                             const struct LagcatTolerances *tol,
                                             struct LagcatMatrix **out);

/**
 * Projector distance `‖P_L − P_L'‖_F` between correspondences on the same spaces.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum LagcatStatus lagcat_correspondence_distance(const struct LagcatCorrespondence *a,
                                                 const struct LagcatCorrespondence *b,
                                                 double *out);

/**
 * `L12 ∘ L01`.
 *
 * # Safety
 * Handles must be live; `tol` may be `NULL`; `out` must be writable.
 */
enum LagcatStatus lagcat_compose(const struct LagcatCorrespondence *l01,
                                 const struct LagcatCorrespondence *l12,
                                 enum LagcatMethod method,
                                 const struct LagcatTolerances *tol,
                                 struct LagcatCorrespondence **out);

/**
 * Whether `graph(T)` is a Lagrangian in `ΠV0 ⊕ V1`.
 *
 * # Safety
 * Handles must be live; `tol` may be `NULL`; `out` must be writable.
 */
enum LagcatStatus lagcat_is_lagrangian_graph(const struct LagcatMatrix *t,
                                             const struct LagcatSpace *v0,
                                             const struct LagcatSpace *v1,
                                             const struct LagcatTolerances *tol,
                                             bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAGCAT_H */
