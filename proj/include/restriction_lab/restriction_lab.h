/* C interface to the restriction-lab library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an rlab_status; on
 * failure rlab_last_error() describes the problem for the calling thread.
 * Strings returned by accessors stay valid until the owning handle is freed.
 */
#ifndef RESTRICTION_LAB_H
#define RESTRICTION_LAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(RLAB_BUILDING_LIBRARY)
#define RLAB_API __attribute__((visibility("default")))
#else
#define RLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rlab_status {
  RLAB_OK = 0,
  RLAB_CHECKS_FAILED = 1,     /* command ran; some check did not pass */
  RLAB_ERR_USAGE = 2,         /* bad config, function spec or name */
  RLAB_ERR_PARAMETER = 3,
  RLAB_ERR_DEGENERATE = 4,    /* zero function */
  RLAB_ERR_INTEGRABILITY = 5,
  RLAB_ERR_RESOLUTION = 6,
  RLAB_ERR_DIVERGENCE = 7,
  RLAB_ERR_UNDERFLOW = 8,
  RLAB_ERR_SIGN = 9,
  RLAB_ERR_ADMISSIBILITY = 10,
  RLAB_ERR_IO = 11,
  RLAB_ERR_NULL_ARGUMENT = 12,
  RLAB_ERR_INTERNAL = 13
} rlab_status;

typedef struct rlab_config rlab_config;
typedef struct rlab_output rlab_output;
typedef struct rlab_function rlab_function;

RLAB_API const char* rlab_version(void);
RLAB_API const char* rlab_status_string(rlab_status status);
/* Message of the last failed call on this thread, "" if none. */
RLAB_API const char* rlab_last_error(void);

/* Configuration. */
RLAB_API rlab_status rlab_config_new(rlab_config** out);
RLAB_API rlab_status rlab_config_load(const char* path, rlab_config** out);
RLAB_API rlab_status rlab_config_parse(const char* json, rlab_config** out);
RLAB_API void rlab_config_free(rlab_config* cfg);
RLAB_API rlab_status rlab_config_set_seed(rlab_config* cfg, uint64_t seed);
/* key is one of "start", "input", "out". */
RLAB_API rlab_status rlab_config_set_string(rlab_config* cfg, const char* key, const char* value);
/* Copies the out path (possibly "") into a string owned by cfg. */
RLAB_API const char* rlab_config_out(const rlab_config* cfg);
/* JSON text of the whole config, owned by cfg until the next call. */
RLAB_API const char* rlab_config_to_json(rlab_config* cfg);

/* Commands. On RLAB_OK and RLAB_CHECKS_FAILED *out holds the results; a
 * search that diverged reports RLAB_CHECKS_FAILED with its partial trace. */
RLAB_API rlab_status rlab_verify(const rlab_config* cfg, const char* suite, rlab_output** out);
RLAB_API rlab_status rlab_search(const rlab_config* cfg, rlab_output** out);
RLAB_API rlab_status rlab_trials(const rlab_config* cfg, const char* kind, rlab_output** out);
RLAB_API rlab_status rlab_decompose(const rlab_config* cfg, rlab_output** out);
RLAB_API rlab_status rlab_scan_perturbation(const rlab_config* cfg, rlab_output** out);

/* "" when the command produces no such output. */
RLAB_API const char* rlab_output_csv(const rlab_output* out);
RLAB_API const char* rlab_output_json(const rlab_output* out);
RLAB_API int rlab_output_passed(const rlab_output* out);
RLAB_API void rlab_output_free(rlab_output* out);

/* Writes content to path through a temporary file and a rename. */
RLAB_API rlab_status rlab_write_file(const char* path, const char* content);

/* Functions on the sphere, from the builtin spec language or a sample file. */
RLAB_API rlab_status rlab_function_parse(const char* spec, rlab_function** out);
RLAB_API void rlab_function_free(rlab_function* f);
RLAB_API rlab_status rlab_function_eval(const rlab_function* f, double x, double y, double z,
                                        double* value);
RLAB_API rlab_status rlab_function_l2_norm_sq(const rlab_function* f, double* value);

/* Scalar primitives. */
RLAB_API rlab_status rlab_phi(const rlab_function* f, double* value);
RLAB_API rlab_status rlab_conv_l2_norm(const rlab_function* f, const rlab_function* g,
                                       double* value);
/* λ_k of the kernel (2 − 2t)^{-1/2}. */
RLAB_API rlab_status rlab_inverse_chord_multiplier(int k, double* value);
RLAB_API rlab_status rlab_gamma(double phi, double psi, double alpha, double beta, double* value);
/* Caps C(z, r) with z given by three coordinates (normalized on entry). */
RLAB_API rlab_status rlab_cap_quotient_distance(const double z1[3], double r1, const double z2[3],
                                                double r2, double* value);

#ifdef __cplusplus
}
#endif

#endif
