#ifndef SU2ENT_H
#define SU2ENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum su2ent_status {
  SU2ENT_STATUS_OK = 0,
  SU2ENT_STATUS_NULL_POINTER = 1,
  SU2ENT_STATUS_DOMAIN = 2,
  SU2ENT_STATUS_VALIDATION = 3,
  SU2ENT_STATUS_DIMENSION_MISMATCH = 4,
  SU2ENT_STATUS_PARSE = 5,
  SU2ENT_STATUS_NOT_CONVERGED = 6,
  SU2ENT_STATUS_IO = 7,
  SU2ENT_STATUS_BUFFER_TOO_SMALL = 8,
  SU2ENT_STATUS_PANIC = 99,
} su2ent_status;

typedef enum su2ent_measure_kind {
  SU2ENT_MEASURE_KIND_EOF = 0,
  SU2ENT_MEASURE_KIND_EPSILON = 1,
  SU2ENT_MEASURE_KIND_I_CONCURRENCE = 2,
  SU2ENT_MEASURE_KIND_TANGLE = 3,
  SU2ENT_MEASURE_KIND_NEGATIVITY = 4,
  SU2ENT_MEASURE_KIND_CR_NEGATIVITY = 5,
} su2ent_measure_kind;

// Opaque bipartite density matrix.
typedef struct su2ent_state su2ent_state;

// Settings for the numerical oracles. Obtain defaults from [`su2ent_optimizer_default`].
typedef struct su2ent_optimizer {
  uintptr_t restarts;
  uintptr_t max_iterations;
  double convergence_tol;
  uint64_t seed;
} su2ent_optimizer;

// Value returned by a numerical oracle.
typedef struct su2ent_oracle_value {
  double value;
  uintptr_t iterations;
  uintptr_t restarts;
  bool converged;
} su2ent_oracle_value;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the next failing call.
const char *su2ent_last_error(void);

struct su2ent_optimizer su2ent_optimizer_default(void);

// `2j/(2j+1)`, the overlap above which ρ(p) is entangled.
double su2ent_threshold(uint32_t twice_j);

// Closed-form value of `measure` on ρ(p). Entropies are in nats.
//
// # Safety
// `out` must be null or point to writable memory for one `double`.
enum su2ent_status su2ent_measure(enum su2ent_measure_kind measure,
                                  uint32_t twice_j,
                                  double p,
                                  double *out);

// Largest overlap with the lower multiplet reachable by states with Schmidt weight `mu`.
//
// # Safety
// `out` must be null or point to writable memory for one `double`.
enum su2ent_status su2ent_p_mu(uint32_t twice_j, double mu, double *out);

// Smallest Schmidt weight compatible with overlap `p`.
//
// # Safety
// `out` must be null or point to writable memory for one `double`.
enum su2ent_status su2ent_mu_min(uint32_t twice_j, double p, double *out);

// Numerical minimum of the pure-state entanglement at fixed overlap `p`.
//
// # Safety
// `cfg` and `out` must be null or valid pointers.
enum su2ent_status su2ent_min_epsilon_numeric(uint32_t twice_j,
                                              double p,
                                              const struct su2ent_optimizer *cfg,
                                              struct su2ent_oracle_value *out);

// Numerical convex roof of `measure` on `state`. `n_terms = 0` uses rank².
//
// # Safety
// `state`, `cfg` and `out` must be null or valid pointers.
enum su2ent_status su2ent_convex_roof(const struct su2ent_state *state,
                                      enum su2ent_measure_kind measure,
                                      uintptr_t n_terms,
                                      const struct su2ent_optimizer *cfg,
                                      struct su2ent_oracle_value *out);

// ρ(p) on spin-j ⊗ spin-½.
//
// # Safety
// `out` must be null or point to writable memory for one pointer.
enum su2ent_status su2ent_state_rho_p(uint32_t twice_j, double p, struct su2ent_state **out);

// Validated density matrix from `len = 2·(dim_a·dim_b)²` interleaved row-major doubles.
//
// # Safety
// `data` must point to `len` readable doubles; `out` to writable memory for one pointer.
enum su2ent_status su2ent_state_from_parts(uintptr_t dim_a,
                                           uintptr_t dim_b,
                                           const double *data,
                                           uintptr_t len,
                                           struct su2ent_state **out);

// # Safety
// `state` must be null or a handle from this library that has not been freed.
void su2ent_state_free(struct su2ent_state *state);

// # Safety
// All pointers must be null or valid.
enum su2ent_status su2ent_state_dims(const struct su2ent_state *state,
                                     uintptr_t *dim_a,
                                     uintptr_t *dim_b);

// Copy the matrix into `buf` in the layout accepted by [`su2ent_state_from_parts`].
//
// # Safety
// `buf` must point to `len` writable doubles.
enum su2ent_status su2ent_state_copy_data(const struct su2ent_state *state,
                                          double *buf,
                                          uintptr_t len);

// Negativity from the partial-transpose spectrum.
//
// # Safety
// Pointers must be null or valid.
enum su2ent_status su2ent_state_negativity(const struct su2ent_state *state, double *out);

// Overlap of `state` with the lower multiplet on spin-j ⊗ spin-½.
//
// # Safety
// Pointers must be null or valid.
enum su2ent_status su2ent_state_lower_overlap(const struct su2ent_state *state,
                                              uint32_t twice_j,
                                              double *out);

// Exact rotational twirl; the result is a new handle.
//
// # Safety
// Pointers must be null or valid.
enum su2ent_status su2ent_state_twirl(const struct su2ent_state *state,
                                      uint32_t twice_j1,
                                      uint32_t twice_j2,
                                      struct su2ent_state **out);

// `½‖a - b‖₁`.
//
// # Safety
// Pointers must be null or valid.
enum su2ent_status su2ent_state_trace_distance(const struct su2ent_state *a,
                                               const struct su2ent_state *b,
                                               double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SU2ENT_H */
