#ifndef GRAPHCUT_H
#define GRAPHCUT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Continuum minimization methods.
 */
typedef enum GcMethod {
  GC_METHOD_PGD = 0,
  GC_METHOD_FRANK_WOLFE = 1,
} GcMethod;

/**
 * Result of every fallible call.
 */
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  GC_STATUS_NULL = 1,
  GC_STATUS_PARAMETER = 2,
  GC_STATUS_CAPACITY = 3,
  GC_STATUS_INFEASIBLE = 4,
  GC_STATUS_INPUT = 5,
  GC_STATUS_IO = 6,
  /**
   * The library panicked; the handle arguments are left untouched.
   */
  GC_STATUS_PANIC = 7,
} GcStatus;

typedef struct GcGraph GcGraph;

typedef struct GcGraphon GcGraphon;

typedef struct GcTheta GcTheta;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gc_last_error_message(void);

/**
 * Graph on `n` nodes from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values; `out` must be
 * writable.
 */
enum GcStatus gc_graph_new(size_t n,
                           const uint32_t *edges,
                           size_t edge_count,
                           struct GcGraph **out);

/**
 * Graph from the JSON file format (1-based edges).
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum GcStatus gc_graph_from_json(const char *json, struct GcGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void gc_graph_free(struct GcGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t gc_graph_node_count(const struct GcGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t gc_graph_edge_count(const struct GcGraph *g);

/**
 * Step graphon with `m` blocks; `values` is the `m × m` matrix row-major.
 *
 * # Safety
 * `widths` must hold `m` values and `values` `m * m`; `out` writable.
 */
enum GcStatus gc_graphon_step(const double *widths,
                              const double *values,
                              size_t m,
                              struct GcGraphon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GcStatus gc_graphon_constant(double c, struct GcGraphon **out);

/**
 * `W(x, y) = 1` iff `|x - y| ≥ 1/2`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GcStatus gc_graphon_halfgraph(struct GcGraphon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GcStatus gc_graphon_bipartite(double gamma, struct GcGraphon **out);

/**
 * Disjoint blocks of widths `lambda`, value 1 within a block.
 *
 * # Safety
 * `lambda` must hold `len` values; `out` writable.
 */
enum GcStatus gc_graphon_block_family(const double *lambda, size_t len, struct GcGraphon **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GcStatus gc_graphon_checkerboard(size_t n, struct GcGraphon **out);

/**
 * Step graphon `W_G` of a graph.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum GcStatus gc_graphon_from_graph(const struct GcGraph *g, struct GcGraphon **out);

/**
 * Graphon (or graph) from the JSON file format.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` writable.
 */
enum GcStatus gc_graphon_from_json(const char *json, struct GcGraphon **out);

/**
 * # Safety
 * `w` must be null or a handle from this library, not yet freed.
 */
void gc_graphon_free(struct GcGraphon *w);

/**
 * Field on `m` cells and `labels` labels; `weights` row-major, rows in the
 * simplex.
 *
 * # Safety
 * `weights` must hold `m * labels` values; `out` writable.
 */
enum GcStatus gc_theta_new(size_t m, size_t labels, const double *weights, struct GcTheta **out);

/**
 * # Safety
 * `t` must be null or a handle from this library, not yet freed.
 */
void gc_theta_free(struct GcTheta *t);

/**
 * # Safety
 * `t` must be a live handle.
 */
size_t gc_theta_cells(const struct GcTheta *t);

/**
 * # Safety
 * `t` must be a live handle.
 */
size_t gc_theta_labels(const struct GcTheta *t);

/**
 * Copies the row-major weights into `buf`, which must have room for
 * `cells * labels` values.
 *
 * # Safety
 * `t` must be a live handle and `buf` writable for `len` values.
 */
enum GcStatus gc_theta_weights(const struct GcTheta *t, double *buf, size_t len);

/**
 * Cut norm of a step-function kernel. `restarts == 0` runs the exact
 * enumeration, otherwise the seeded heuristic. `exact` may be null.
 *
 * # Safety
 * `w` must be a live handle; `value` writable.
 */
enum GcStatus gc_cut_norm(const struct GcGraphon *w,
                          size_t restarts,
                          uint64_t seed,
                          double *value,
                          bool *exact);

/**
 * `||W_G - W||_□` between a graph and a limit kernel. `exact` is false
 * when the value is a lower bound; it may be null.
 *
 * # Safety
 * Handles must be live; `value` writable.
 */
enum GcStatus gc_cut_gap(const struct GcGraph *g,
                         const struct GcGraphon *limit,
                         size_t restarts,
                         uint64_t seed,
                         double *value,
                         bool *exact);

/**
 * Exact `t(F, G) = numer / denom` for a motif named `edge`, `path3`,
 * `triangle` or `cycle4`.
 *
 * # Safety
 * `motif` nul-terminated; `g` live; outputs writable.
 */
enum GcStatus gc_hom_density_graph(const char *motif,
                                   const struct GcGraph *g,
                                   uint64_t *numer,
                                   uint64_t *denom);

/**
 * `t(F, W)` for a step-function kernel.
 *
 * # Safety
 * `motif` nul-terminated; `w` live; `value` writable.
 */
enum GcStatus gc_hom_density_graphon(const char *motif, const struct GcGraphon *w, double *value);

/**
 * Exact minimum bisection. `labels`, when not null, receives one entry
 * per node: 0 for the side holding node 0, 1 for the other.
 *
 * # Safety
 * `g` live; `value` writable; `labels` null or writable for `n` values.
 */
enum GcStatus gc_brute_bisection(const struct GcGraph *g, double *value, uint32_t *labels);

/**
 * Limit functional `J(θ)`; the spin model for two labels, Potts
 * otherwise.
 *
 * # Safety
 * Handles live; `value` writable.
 */
enum GcStatus gc_limit_j(const struct GcGraphon *w, const struct GcTheta *theta, double *value);

/**
 * Stationarity residual of a two-label field; `vacuous` (nullable) is
 * set when no cell is strictly interior.
 *
 * # Safety
 * Handles live; `residual` writable.
 */
enum GcStatus gc_kkt_residual(const struct GcGraphon *w,
                              const struct GcTheta *theta,
                              double *residual,
                              bool *vacuous);

/**
 * Minimizes `J` on an `m`-cell grid with label masses `masses`
 * (`labels` values). `theta_out` (nullable) receives a new field handle.
 *
 * # Safety
 * `w` live; `masses` readable for `labels` values; `value` writable;
 * `theta_out` null or writable.
 */
enum GcStatus gc_minimize_j(const struct GcGraphon *w,
                            size_t m,
                            const double *masses,
                            size_t labels,
                            enum GcMethod method,
                            uint64_t seed,
                            size_t restarts,
                            double *value,
                            struct GcTheta **theta_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHCUT_H */
