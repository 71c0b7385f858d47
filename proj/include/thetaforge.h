/* thetaforge C API: theta functions with rational characteristics on the
 * Siegel upper half-space, and the identity-verification harness.
 *
 * All functions return tf_status; on failure tf_last_error() carries a
 * thread-local message.  Strings returned through char** are owned by the
 * caller and released with tf_string_free().  Period matrices are opaque
 * handles released with tf_tau_free().
 */
#ifndef THETAFORGE_H
#define THETAFORGE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tf_status {
    TF_OK = 0,
    TF_ERR_INVALID_ARGUMENT = 1, /* null pointers, bad sizes */
    TF_ERR_DOMAIN = 2,           /* non-symmetric / non-positive-definite tau, bad inputs */
    TF_ERR_EVALUATION = 3,       /* numeric failure */
    TF_ERR_JSON = 4,             /* malformed request or config */
    TF_ERR_IO = 5,               /* unwritable output path */
    TF_ERR_INTERNAL = 6
} tf_status;

typedef struct tf_complex {
    double re;
    double im;
} tf_complex;

/* Opaque period matrix: symmetric g x g complex, Im part positive definite. */
typedef struct tf_tau tf_tau;

const char* tf_version(void);
const char* tf_last_error(void);
void tf_string_free(char* s);

/* re and im are row-major genus*genus arrays. */
tf_status tf_tau_create(int genus, const double* re, const double* im, tf_tau** out);
/* Deterministic sample with lambda_min(Im tau) >= 0.5. */
tf_status tf_tau_sample(int genus, uint64_t seed, uint64_t index, tf_tau** out);
int tf_tau_genus(const tf_tau* tau);
tf_status tf_tau_entries(const tf_tau* tau, double* re, double* im);
void tf_tau_free(tf_tau* tau);

/* Full derivative jet of theta[eps,delta](tau, z).
 *
 * z has length genus; characteristics are exact rationals given as
 * numerator/denominator arrays of length genus (denominators positive).
 * Output pointers may be NULL when a component is not needed; gradient has
 * length genus, hessian and tau_deriv are row-major genus*genus.  tau_deriv
 * is the weighted tau-derivative matrix equal to hessian/(4 pi i).
 * tail_bound <= 0 and max_radius <= 0 select the defaults (1e-13, 60).
 * degraded (may be NULL) reports that the radius cap was hit. */
tf_status tf_theta_jet(const tf_tau* tau, const tf_complex* z, const int64_t* eps_num,
                       const int64_t* eps_den, const int64_t* delta_num, const int64_t* delta_den,
                       double tail_bound, int max_radius, tf_complex* value, tf_complex* gradient,
                       tf_complex* hessian, tf_complex* tau_deriv, int* degraded);

/* Proven truncation tail bound for the given radius and derivative order. */
tf_status tf_tail_bound(const tf_tau* tau, const tf_complex* z, int radius, int deriv_order,
                        double* bound);

/* Single theta-jet query over JSON, mirroring the CLI `eval` subcommand.
 * Request: {"genus":1, "tau_re":[[..]], "tau_im":[[..]], "z":[[re,im],..],
 *           "eps":"1/4", "delta":"0", "tail_bound":1e-13, "max_radius":60}
 * tau may alternatively be selected by {"seed":.., "tau_index":..}. */
tf_status tf_eval_json(const char* request_json, char** response_json);

/* Runs verification suites from a JSON config (same schema the CLI uses)
 * and returns the report; all_pass (may be NULL) receives 1 when every
 * suite passed.  When the config names an output path the report is also
 * written there. */
tf_status tf_verify_json(const char* config_json, char** report_json, int* all_pass);

/* Table of generalized derivative-formula constants per index tuple.
 * Config: {"genus":[..], "level":[..], "seed":.., "samples":20}. */
tf_status tf_constants_json(const char* config_json, char** table_json);

#ifdef __cplusplus
}
#endif

#endif
