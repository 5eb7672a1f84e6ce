/* C API for the ncgossip core: opaque handles, integer error codes, and
 * JSON-driven experiment suites. All functions returning ncg_status set a
 * thread-local message retrievable via ncg_last_error() on failure. Buffers
 * and strings returned through out-parameters are owned by the library and
 * must be released with ncg_free(). */
#ifndef NCGOSSIP_H
#define NCGOSSIP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int ncg_status;

#define NCG_OK 0
#define NCG_ERR_INVALID_ARGUMENT 1
#define NCG_ERR_DIMENSION_MISMATCH 2
#define NCG_ERR_ZERO_INVERSE 3
#define NCG_ERR_TOO_LARGE 4
#define NCG_ERR_TIMEOUT 5
#define NCG_ERR_CONFIG 6
#define NCG_ERR_K_TOO_LARGE 7
#define NCG_ERR_DENOMINATOR_TOO_LARGE 8
#define NCG_ERR_INSUFFICIENT_CAPACITY 9
#define NCG_ERR_INTERNAL 10

typedef struct ncg_field ncg_field;
typedef struct ncg_rowspace ncg_rowspace;
typedef struct ncg_model ncg_model;
typedef struct ncg_source ncg_source;

const char* ncg_version(void);
const char* ncg_last_error(void);
void ncg_free(void* ptr);

/* ---- finite fields ---- */

/* modulus: ascending coefficients of a monic irreducible degree-m polynomial
 * over F_p, or NULL to use the built-in one; ignored when m == 1 */
ncg_status ncg_field_create(uint32_t p, uint32_t m, const uint32_t* modulus, size_t modulus_len, ncg_field** out);
void ncg_field_destroy(ncg_field* field);
uint32_t ncg_field_order(const ncg_field* field);
ncg_status ncg_field_add(const ncg_field* field, uint32_t a, uint32_t b, uint32_t* out);
ncg_status ncg_field_mul(const ncg_field* field, uint32_t a, uint32_t b, uint32_t* out);
ncg_status ncg_field_inv(const ncg_field* field, uint32_t a, uint32_t* out);

/* ---- row spaces over a field ---- */

ncg_status ncg_rowspace_create(const ncg_field* field, uint32_t dim, ncg_rowspace** out);
void ncg_rowspace_destroy(ncg_rowspace* space);
ncg_status ncg_rowspace_insert(ncg_rowspace* space, const uint32_t* vec, size_t len, int* rank_increased);
ncg_status ncg_rowspace_knows(const ncg_rowspace* space, const uint32_t* mu, size_t len, int* knows);
uint32_t ncg_rowspace_rank(const ncg_rowspace* space);
ncg_status ncg_rowspace_complement(const ncg_rowspace* space, ncg_rowspace** out);

/* exhaustive check of the rank witness-set property over GF(p^m) */
ncg_status ncg_lemma4_verify(uint32_t p, uint32_t m, uint32_t ambient_dim, uint32_t h, int* verified,
                             uint64_t* witness_count);

/* ---- network models (JSON descriptions, see README) ---- */

ncg_status ncg_model_create(const char* json, ncg_model** out);
void ncg_model_destroy(ncg_model* model);
int ncg_model_is_iid(const ncg_model* model);
uint32_t ncg_model_node_count(const ncg_model* model);

/* edges of round t for an i.i.d. model; *edges receives 2*count entries
 * (from, to pairs), release with ncg_free */
ncg_status ncg_model_sample_round(const ncg_model* model, uint64_t seed, uint32_t t, uint32_t** edges, size_t* count);

/* ---- correlated sources ---- */

ncg_status ncg_source_create(const char* json, uint32_t node_count, ncg_source** out);
void ncg_source_destroy(ncg_source* source);
uint32_t ncg_source_k(const ncg_source* source);
/* H(X_S | X_~S, Y_node) in bits; subset_mask selects S */
ncg_status ncg_source_cond_entropy(const ncg_source* source, uint32_t subset_mask, uint32_t node, double* bits);
ncg_status ncg_source_sw_sufficient(const ncg_source* source, uint32_t node, const double* caps, size_t k,
                                    int* sufficient);
/* joint = 0: single-source threshold for the node; joint = 1: two-source
 * joint threshold (node ignored) */
ncg_status ncg_source_decode_threshold(const ncg_source* source, uint32_t node, uint32_t l, uint32_t s, double delta,
                                       int joint, uint32_t* out);

/* ---- flooding ---- */

/* stop_time: flooding stopping time (start set is S_1), -1 on timeout */
ncg_status ncg_flood_run(const ncg_model* model, double p_fault, const uint32_t* start, size_t start_len,
                         uint32_t max_rounds, uint64_t seed, int64_t* stop_time);
/* json_out: {T, alpha, q, trials, residual, ...}; release with ncg_free */
ncg_status ncg_flood_estimate(const ncg_model* model, uint32_t q, uint32_t trials, uint32_t max_rounds, uint64_t seed,
                              char** json_out);

/* ---- capacity feasibility ---- */

/* demand_json: {"sink": d, "sources": [{"node": s, "c": "1/8"}, ...]};
 * first_feasible: smallest number of sampled rounds at which the demanded
 * capacities are achievable by valid weighted paths, -1 on timeout */
ncg_status ncg_capacity_first_feasible(const ncg_model* model, const char* demand_json, uint32_t max_rounds,
                                       uint64_t seed, int64_t* first_feasible);

/* ---- experiment suites ---- */

/* config_json selects and parameterizes a suite (flood-estimate, gossip-run,
 * capacity-scan, lemma4-verify, sweep). result_json: {"summary": ...,
 * "files": {name: content, ...}}; release with ncg_free */
ncg_status ncg_suite_run(const char* config_json, char** result_json);

/* CSV column documentation for the suites */
const char* ncg_suite_schema(void);

#ifdef __cplusplus
}
#endif

#endif /* NCGOSSIP_H */
