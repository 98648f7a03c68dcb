#ifndef QINDEX_QINDEX_H
#define QINDEX_QINDEX_H

/* C interface to the qindex engines. Every call returns a status code; on
 * failure qindex_last_error() describes the problem (thread-local, valid until
 * the next call on the same thread). Strings handed out through char** must
 * be released with qindex_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QINDEX_API __declspec(dllexport)
#else
#define QINDEX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qindex_status {
  QINDEX_OK = 0,
  QINDEX_ERR_PARSE = 1,
  QINDEX_ERR_VALIDATION = 2,
  QINDEX_ERR_INFINITE = 3,
  QINDEX_ERR_INVALID_ARGUMENT = 4,
  QINDEX_ERR_INTERNAL = 5
} qindex_status;

typedef struct qindex_expectation qindex_expectation;
typedef struct qindex_ring qindex_ring;
typedef struct qindex_module qindex_module;

QINDEX_API const char* qindex_version(void);
QINDEX_API const char* qindex_last_error(void);
QINDEX_API void qindex_string_free(char* s);

/* Conditional expectations */
QINDEX_API qindex_status qindex_expectation_from_json(const char* json, qindex_expectation** out);
QINDEX_API void qindex_expectation_free(qindex_expectation* e);
QINDEX_API qindex_status qindex_expectation_validate(const qindex_expectation* e, double tol);
/* Writes {"index_norm","scalar_index","prob_lower","prob_upper",
 * "quasi_basis_size","seed"}; returns QINDEX_ERR_INFINITE (with the report
 * still written, infinite values as null) when the index is not finite. */
QINDEX_API qindex_status qindex_index_compute(const qindex_expectation* e, double tol, int budget,
                                              uint64_t seed, char** out_json);
QINDEX_API qindex_status qindex_crosscheck_torus(long n, long d, char** out_json);

/* Fusion rings and modules */
QINDEX_API qindex_status qindex_ring_from_json(const char* json, qindex_ring** out);
QINDEX_API qindex_status qindex_ring_to_json(const qindex_ring* ring, char** out_json);
QINDEX_API qindex_status qindex_ring_validate(const qindex_ring* ring);
QINDEX_API void qindex_ring_free(qindex_ring* ring);

QINDEX_API qindex_status qindex_module_from_json(const char* json, qindex_module** out);
QINDEX_API qindex_status qindex_module_to_json(const qindex_module* module, char** out_json);
QINDEX_API qindex_status qindex_module_validate(const qindex_module* module);
QINDEX_API void qindex_module_free(qindex_module* module);

QINDEX_API qindex_status qindex_generate_tlj(int n, qindex_ring** out);
QINDEX_API qindex_status qindex_generate_pointed(const int* factors, size_t count, qindex_ring** out);
QINDEX_API qindex_status qindex_generate_regular(const qindex_ring* ring, qindex_module** out);
QINDEX_API qindex_status qindex_generate_quotient(const int* factors, size_t count, const int* subgroup,
                                                  size_t subgroup_size, qindex_module** out);

/* Module trace of the module, normalised at its first simple object:
 * {"status","nullity","irrM","m","ring_dims"}. QINDEX_ERR_INFINITE when no
 * unique positive solution exists. */
QINDEX_API qindex_status qindex_fusion_trace(const qindex_module* module, char** out_json);
/* Classes of the subring, the dimension function of U (x) - and its local
 * constancy: {"object","subring","classes","d_F","locally_constant",...}. */
QINDEX_API qindex_status qindex_fusion_descent(const qindex_module* module, const char* object,
                                               const char* const* subring, size_t subring_size,
                                               double tol, char** out_json);
/* {"member","witness","continuum"} for d in {4cos^2(pi/n)} U [4, inf). */
QINDEX_API qindex_status qindex_jones(double value, double tol, char** out_json);

/* Lattice classification */
QINDEX_API qindex_status qindex_classify(const char* lie_type, char** out_json);
/* subgroup is "P", "Q" or a row number of qindex_classify's list. */
QINDEX_API qindex_status qindex_classify_irrep(const char* lie_type, const int64_t* weight,
                                               size_t rank, const char* subgroup, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
