#ifndef TOURNAMENT_LINKAGE_H
#define TOURNAMENT_LINKAGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Zero is success.
typedef enum TlStatus {
  TL_STATUS_OK = 0,
  // A required pointer argument was null.
  TL_STATUS_NULL_ARGUMENT = 1,
  // Bad vertex id, bad pair list or other invalid parameter.
  TL_STATUS_INVALID_ARGUMENT = 2,
  // The arc-list text or a C string was malformed.
  TL_STATUS_PARSE = 3,
  // The operation needs a semicomplete digraph.
  TL_STATUS_NOT_SEMICOMPLETE = 4,
  // Fewer disjoint paths exist than were requested.
  TL_STATUS_INFEASIBLE = 5,
  // The constructive linker stopped without a certificate.
  TL_STATUS_LINK_FAILED = 6,
  // A supplied linkage does not check out.
  TL_STATUS_INVALID_CERTIFICATE = 7,
  TL_STATUS_PANIC = 8,
} TlStatus;

// Generator families for `tl_generate`.
typedef enum TlGenerator {
  // `i -> i+1, ..., i+(n-1)/2` mod `n`; `n` odd, seed ignored.
  TL_GENERATOR_ROTATIONAL = 0,
  // Uniformly random tournament.
  TL_GENERATOR_RANDOM = 1,
  // Random tournament whose out-degrees differ by at most one.
  TL_GENERATOR_NEAR_REGULAR = 2,
} TlGenerator;

// Answer of the exhaustive linkage oracle.
typedef enum TlVerdict {
  TL_VERDICT_NO = 0,
  TL_VERDICT_YES = 1,
  // The node or time budget ran out first.
  TL_VERDICT_UNKNOWN = 2,
} TlVerdict;

// Opaque digraph handle.
typedef struct TlDigraph TlDigraph;

// Opaque list of vertex paths.
typedef struct TlLinkage TlLinkage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated version string.
const char *tl_version(void);

// Message for the last failed call on this thread, or null.
const char *tl_last_error_message(void);

// Static name of a status code.
const char *tl_status_name(enum TlStatus status);

// Creates an arcless digraph on `n` vertices.
//
// # Safety
// `out` must be null or valid for writes.
enum TlStatus tl_digraph_new(size_t n, struct TlDigraph **out);

// Parses the arc-list text format (`n m` header, then `u v` per line).
//
// # Safety
// `text` must be null or a NUL-terminated string; `out` null or writable.
enum TlStatus tl_digraph_parse(const char *text, struct TlDigraph **out);

// Serializes to the arc-list format. Free the result with `tl_string_free`.
//
// # Safety
// `d` must be a live handle or null; `out` null or writable.
enum TlStatus tl_digraph_to_arc_list(const struct TlDigraph *d, char **out);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void tl_string_free(char *s);

// # Safety
// `d` must be null or a live handle, freed once.
void tl_digraph_free(struct TlDigraph *d);

// Adds the arc `u -> v`. Loops, duplicates and bad ids are rejected.
//
// # Safety
// `d` must be a live handle or null.
enum TlStatus tl_digraph_add_arc(struct TlDigraph *d, size_t u, size_t v);

// Number of vertices; 0 for a null handle.
//
// # Safety
// `d` must be a live handle or null.
size_t tl_digraph_order(const struct TlDigraph *d);

// Number of arcs; 0 for a null handle.
//
// # Safety
// `d` must be a live handle or null.
size_t tl_digraph_arc_count(const struct TlDigraph *d);

// Whether `u -> v` is an arc; false for null handles or bad ids.
//
// # Safety
// `d` must be a live handle or null.
bool tl_digraph_has_arc(const struct TlDigraph *d, size_t u, size_t v);

// Builds a tournament from one of the generator families.
//
// # Safety
// `out` must be null or valid for writes.
enum TlStatus tl_generate(enum TlGenerator kind, size_t n, uint64_t seed, struct TlDigraph **out);

// Builds the counterexample tournament for `k` on `n` vertices. Unless
// `unchecked` is set, `k >= 42` and `n >= k^2` are required.
//
// # Safety
// `out` must be null or valid for writes.
enum TlStatus tl_counterexample(size_t k, size_t n, bool unchecked, struct TlDigraph **out);

// Exact vertex connectivity.
//
// # Safety
// `d` must be a live handle or null; `out` null or writable.
enum TlStatus tl_vertex_connectivity(const struct TlDigraph *d, size_t *out);

// Runs the constructive linker on a semicomplete digraph. With
// `check_hypotheses`, the degree and connectivity bounds are checked
// exactly first (the run proceeds either way). A run that stops without
// a certificate returns `TL_STATUS_LINK_FAILED` with the reason.
//
// # Safety
// `d` must be a live handle or null; `xs` and `ys` must hold `k` ids;
// `out` null or writable.
enum TlStatus tl_link(const struct TlDigraph *d,
                      const size_t *xs,
                      const size_t *ys,
                      size_t k,
                      bool check_hypotheses,
                      struct TlLinkage **out);

// Exhaustive search for a linkage. `out_paths` may be null; on a `YES`
// verdict a non-null `out_paths` receives the witness.
//
// # Safety
// As for `tl_link`; `out_verdict` must be writable.
enum TlStatus tl_oracle_linkage(const struct TlDigraph *d,
                                const size_t *xs,
                                const size_t *ys,
                                size_t k,
                                uint64_t node_limit,
                                uint64_t time_limit_ms,
                                enum TlVerdict *out_verdict,
                                struct TlLinkage **out_paths);

// Checks that path `i` runs from `xs[i]` to `ys[i]` in `d` and that the
// paths are pairwise vertex-disjoint.
//
// # Safety
// As for `tl_link`; `l` must be a live linkage or null.
enum TlStatus tl_linkage_verify(const struct TlDigraph *d,
                                const size_t *xs,
                                const size_t *ys,
                                size_t k,
                                const struct TlLinkage *l);

// Number of paths; 0 for a null handle.
//
// # Safety
// `l` must be a live linkage or null.
size_t tl_linkage_path_count(const struct TlLinkage *l);

// Vertex count of path `i`; 0 if the handle is null or `i` is out of range.
//
// # Safety
// `l` must be a live linkage or null.
size_t tl_linkage_path_len(const struct TlLinkage *l, size_t i);

// Copies path `i` into `buf`, which must hold at least
// `tl_linkage_path_len(l, i)` entries.
//
// # Safety
// `l` must be a live linkage or null; `buf` must be valid for `cap` writes.
enum TlStatus tl_linkage_path_copy(const struct TlLinkage *l, size_t i, size_t *buf, size_t cap);

// # Safety
// `l` must be null or a live linkage, freed once.
void tl_linkage_free(struct TlLinkage *l);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOURNAMENT_LINKAGE_H */
