#ifndef XORPROT_H
#define XORPROT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum XpStatus {
  XP_STATUS_OK = 0,
  XP_STATUS_NULL_ARGUMENT = 1,
  XP_STATUS_INVALID_ARGUMENT = 2,
  XP_STATUS_PARSE = 3,
  XP_STATUS_INSTANCE = 4,
  XP_STATUS_UNREACHABLE = 5,
  XP_STATUS_SURVIVABILITY = 6,
  XP_STATUS_CONTRACT = 7,
  XP_STATUS_DOMAIN = 8,
  XP_STATUS_ORACLE_GUARD = 9,
  XP_STATUS_PANIC = 99,
} XpStatus;

typedef enum XpHeuristic {
  XP_HEURISTIC_OSH = 0,
  XP_HEURISTIC_WW = 1,
  XP_HEURISTIC_WP = 2,
  XP_HEURISTIC_PW = 3,
  XP_HEURISTIC_PP = 4,
  XP_HEURISTIC_ORACLE = 5,
  XP_HEURISTIC_CONVENTIONAL = 6,
  XP_HEURISTIC_ANALYTIC = 7,
} XpHeuristic;

typedef enum XpRingClass {
  XP_RING_CLASS_ODD1 = 0,
  XP_RING_CLASS_ODD2 = 1,
  XP_RING_CLASS_EVEN1 = 2,
  XP_RING_CLASS_EVEN2 = 3,
} XpRingClass;

/**
 * Opaque result of one design strategy.
 */
typedef struct XpAnalysis XpAnalysis;

/**
 * Opaque network instance.
 */
typedef struct XpInstance XpInstance;

typedef struct XpPowerReport {
  double p_total;
  double p1_conventional;
  double p2_reduction;
  double savings_fraction;
} XpPowerReport;

typedef struct XpBounds {
  double conventional_lower;
  double nc_lower_pairwise;
  double nc_lower_characteristic;
} XpBounds;

typedef struct XpClosedForm {
  double p_conventional;
  double p_coded;
  double savings_fraction;
} XpClosedForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *xp_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *xp_version(void);

/**
 * Full mesh on `n` nodes with all-pairs demands of `volume` Gbps.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_instance_generate_mesh(size_t n, double volume, struct XpInstance **out);

/**
 * Ring on `n` nodes with all-pairs demands of `volume` Gbps.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_instance_generate_ring(size_t n, double volume, struct XpInstance **out);

/**
 * Parses the line-oriented instance format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum XpStatus xp_instance_parse(const char *text, struct XpInstance **out);

/**
 * Serializes an instance; release the string with `xp_string_free`.
 *
 * # Safety
 * `inst` must come from this library; `out` must be valid for writes.
 */
enum XpStatus xp_instance_to_text(const struct XpInstance *inst, char **out);

/**
 * Replaces the power parameters of an instance.
 *
 * # Safety
 * `inst` must come from this library.
 */
enum XpStatus xp_instance_set_power(struct XpInstance *inst,
                                    double p_port,
                                    double p_transponder,
                                    double wavelength_capacity);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or come from this library.
 */
size_t xp_instance_node_count(const struct XpInstance *inst);

/**
 * Demand count, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or come from this library.
 */
size_t xp_instance_demand_count(const struct XpInstance *inst);

/**
 * # Safety
 * `inst` must be null or come from this library and not be used afterwards.
 */
void xp_instance_free(struct XpInstance *inst);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void xp_string_free(char *s);

/**
 * Routes, codes and evaluates `inst` with one strategy.
 *
 * # Safety
 * `inst` must come from this library; `out` must be valid for writes.
 */
enum XpStatus xp_analyze(const struct XpInstance *inst,
                         enum XpHeuristic strategy,
                         size_t budget,
                         struct XpAnalysis **out);

/**
 * # Safety
 * `a` must come from this library; `out` must be valid for writes.
 */
enum XpStatus xp_analysis_power(const struct XpAnalysis *a, struct XpPowerReport *out);

/**
 * Lower bounds for the analysed assignment; `Domain` for the analytic strategy.
 *
 * # Safety
 * `a` must come from this library; `out` must be valid for writes.
 */
enum XpStatus xp_analysis_bounds(const struct XpAnalysis *a, struct XpBounds *out);

/**
 * Number of coded demand pairs, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or come from this library.
 */
size_t xp_analysis_pair_count(const struct XpAnalysis *a);

/**
 * Total shared links over all coded pairs, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or come from this library.
 */
size_t xp_analysis_shared_hops(const struct XpAnalysis *a);

/**
 * # Safety
 * `a` must be null or come from this library and not be used afterwards.
 */
void xp_analysis_free(struct XpAnalysis *a);

/**
 * Closed-form full-mesh power.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_mesh_power(size_t n,
                            double volume,
                            double p_port,
                            double p_transponder,
                            double wavelength_capacity,
                            struct XpClosedForm *out);

/**
 * Closed-form ring power with protection-protection coding.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_ring_power(size_t n,
                            double volume,
                            double p_port,
                            double p_transponder,
                            double wavelength_capacity,
                            struct XpClosedForm *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_ring_classify(size_t n, enum XpRingClass *out);

/**
 * Shared hops of the ring closed form; `Domain` if the value exceeds 64 bits.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_ring_shared_hops(size_t n, uint64_t *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum XpStatus xp_mesh_fluctuation(size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XORPROT_H */
