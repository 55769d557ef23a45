/* C interface to libqcdim: dimension-distortion bounds for subsets of the
 * line, claim verification, split optimisation and box-counting probes.
 *
 * Every function returns a qcd_status. On failure the session keeps a
 * message retrievable with qcd_session_last_error until the next call.
 * Reals cross the boundary as decimal strings so no precision is lost. */

#ifndef QCDIM_H
#define QCDIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QCD_API __declspec(dllexport)
#else
#define QCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qcd_status {
  QCD_OK = 0,
  QCD_ERR_DOMAIN = 1,
  QCD_ERR_BRACKET = 2,
  QCD_ERR_NO_CONVERGENCE = 3,
  QCD_ERR_DEGENERATE = 4,
  QCD_ERR_HYPOTHESIS = 5,
  QCD_ERR_PAIRING = 6,
  QCD_ERR_RESOURCE = 7,
  QCD_ERR_IO = 8,
  QCD_ERR_USAGE = 9,
  QCD_ERR_BUFFER = 10, /* output buffer too small */
  QCD_ERR_INTERNAL = 11
} qcd_status;

typedef enum qcd_format { QCD_FORMAT_CSV = 0, QCD_FORMAT_JSON = 1, QCD_FORMAT_TEXT = 2 } qcd_format;

typedef struct qcd_session qcd_session;
typedef struct qcd_result qcd_result;

QCD_API const char* qcd_version(void);
QCD_API const char* qcd_status_name(qcd_status status);

/* Sessions hold the run configuration: precision (default 80 digits),
 * output format, seed, strict flag and tolerance overrides. */
QCD_API qcd_status qcd_session_create(qcd_session** out);
QCD_API void qcd_session_destroy(qcd_session* session);
QCD_API const char* qcd_session_last_error(const qcd_session* session);

/* Digits below 30 are accepted as forced precision and leave a warning on
 * the next result. */
QCD_API qcd_status qcd_session_set_precision(qcd_session* session, int digits);
QCD_API int qcd_session_precision(const qcd_session* session);
QCD_API qcd_status qcd_session_set_format(qcd_session* session, qcd_format format);
QCD_API qcd_status qcd_session_set_seed(qcd_session* session, uint64_t seed);
QCD_API qcd_status qcd_session_set_strict(qcd_session* session, int strict);
QCD_API qcd_status qcd_session_set_tolerance(qcd_session* session, const char* key,
                                             double value);

/* Commands. L and K accept a value or "start:stop:count"; methods is a
 * comma list (NULL or "" for all). */
QCD_API qcd_status qcd_bounds(qcd_session* session, const char* L, const char* K,
                              const char* methods, qcd_result** out);
/* Writes the JSON report to report_path; filter is a claim-id glob. */
QCD_API qcd_status qcd_verify(qcd_session* session, const char* filter,
                              const char* report_path, qcd_result** out);
/* direction: "lower" or "upper". */
QCD_API qcd_status qcd_optimize(qcd_session* session, const char* L, const char* K,
                                const char* direction, qcd_result** out);
/* cantor: "m:q:n[:offset[:scale]]" with ratio 1/q; map: "identity",
 * "affine:s:b" or "power:a"; sandwich: method list or NULL. */
QCD_API qcd_status qcd_dim(qcd_session* session, const char* cantor, const char* map,
                           const char* sandwich, int num_scales, qcd_result** out);

QCD_API const char* qcd_result_text(const qcd_result* result);
QCD_API size_t qcd_result_rows(const qcd_result* result);
QCD_API size_t qcd_result_failures(const qcd_result* result);
QCD_API size_t qcd_result_flagged(const qcd_result* result);
/* 0 success, 1 failures (or flagged cells in strict mode). */
QCD_API int qcd_result_exit_code(const qcd_result* result);
QCD_API size_t qcd_result_warning_count(const qcd_result* result);
QCD_API const char* qcd_result_warning(const qcd_result* result, size_t index);
QCD_API void qcd_result_destroy(qcd_result* result);

/* Scalar helpers at the session precision. Decimal strings are written
 * into caller buffers; QCD_ERR_BUFFER if a buffer is too small. */
QCD_API qcd_status qcd_bound_eval(qcd_session* session, const char* method, const char* L,
                                  const char* K, char* lower, size_t lower_size, char* upper,
                                  size_t upper_size, int* hypotheses_met);
QCD_API qcd_status qcd_balance_root(qcd_session* session, int a, int b, char* out,
                                    size_t out_size);
/* which: "g0", "g1" or "g2"; k is the parent distortion bound. */
QCD_API qcd_status qcd_gap(qcd_session* session, const char* which, const char* k2,
                           const char* L, const char* k, char* out, size_t out_size);

#ifdef __cplusplus
}
#endif

#endif /* QCDIM_H */
