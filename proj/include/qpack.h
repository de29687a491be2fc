/* qpack C API: gauge-invariant hybrid-qudit simulation workbench.
 *
 * The core is a C++ library; this header is the stable C surface. Objects
 * are opaque handles, every call returns an error code, and strings returned
 * through out-parameters must be released with qpack_string_free().
 */
#ifndef QPACK_H
#define QPACK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define QPACK_API __declspec(dllexport)
#else
#define QPACK_API __attribute__((visibility("default")))
#endif

typedef enum qpack_status {
    QPACK_OK = 0,
    QPACK_ERR_INVALID_ARGUMENT = 1,
    QPACK_ERR_CONTRACT = 2,
    QPACK_ERR_BAD_HANDLE = 3,
    QPACK_ERR_INTERNAL = 4
} qpack_status;

typedef struct qpack_register qpack_register; /* opaque dense register */

QPACK_API const char* qpack_version(void);

/* Human-readable message for the most recent failure on this thread. */
QPACK_API const char* qpack_last_error(void);

QPACK_API void qpack_string_free(char* s);

/* ---- experiment runner ----
 * config_json follows the CLI run-configuration schema ("subcommand", "d",
 * "D", "seed", ...). On success *report_json holds the report document. */
QPACK_API qpack_status qpack_run_json(const char* config_json, char** report_json);

/* ---- register simulation ---- */

/* Creates an n_site register of hybrid qudits with internal dimension d and
 * external dimension D (computational levels only). */
QPACK_API qpack_status qpack_register_create(int d, int D, int n_sites, qpack_register** out);
QPACK_API void qpack_register_destroy(qpack_register* reg);

/* Resets to the product basis state with the given per-site labels. */
QPACK_API qpack_status qpack_register_set_basis(qpack_register* reg, const int* labels,
                                                size_t n_labels);

/* Applies a named library gate ("XN", "ZN", "HN", "P", "F", "SWAP", "CSUM",
 * "CSUMd", "CPHI", "Xd", "Zd", "Hd", "XD", "ZD", "HD", "THETA(r)", "T8";
 * a UTF-8 dagger suffix inverts) to the listed sites. */
QPACK_API qpack_status qpack_register_apply(qpack_register* reg, const char* gate,
                                            const int* sites, size_t n_sites);

/* Computational-basis measurement of every site; outcome labels are written
 * to `labels` (length n_sites). Deterministic per seed. */
QPACK_API qpack_status qpack_register_measure(qpack_register* reg, uint64_t seed, int* labels,
                                              size_t n_labels);

/* Squared overlap with another register of identical shape. */
QPACK_API qpack_status qpack_register_fidelity(const qpack_register* a, const qpack_register* b,
                                               double* out);

/* Number of complex amplitudes. */
QPACK_API qpack_status qpack_register_dim(const qpack_register* reg, size_t* out);

/* Copies amplitudes as interleaved (re, im) pairs; buffer length must be
 * 2 * dim. */
QPACK_API qpack_status qpack_register_amplitudes(const qpack_register* reg, double* buffer,
                                                 size_t buffer_len);

/* Text dump of nonzero amplitudes: "index re im" lines. */
QPACK_API qpack_status qpack_register_dump(const qpack_register* reg, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QPACK_H */
