/* epsnum: certified two-sided brackets for entropy numbers of linear
 * operators on finite-dimensional l_p spaces.
 *
 * Shared-library C interface. Objects are opaque handles; every function
 * returns an eps_status, with outputs through pointers. On failure the
 * thread-local message from eps_last_error() describes the problem.
 */
#ifndef EPSNUM_H
#define EPSNUM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct eps_spec eps_spec; /* diagonal operator: weight prefix + constant tail */
typedef struct eps_op eps_op;     /* dense matrix acting l_p^cols -> l_p^rows */

typedef enum {
  EPS_OK = 0,
  EPS_ERR_INVALID = 1,    /* bad argument */
  EPS_ERR_CONFIG = 2,     /* malformed or unsupported configuration */
  EPS_ERR_CAPABILITY = 3, /* outside the supported envelope (dimension, p, effort) */
  EPS_ERR_NUMERIC = 4,    /* iteration failed to converge */
  EPS_ERR_BUDGET = 5      /* internal budget exhausted in strict mode */
} eps_status;

typedef enum { EPS_FIELD_REAL = 0, EPS_FIELD_COMPLEX = 1 } eps_field;
typedef enum { EPS_EFFORT_GREEDY = 0, EPS_EFFORT_EXACT = 1 } eps_effort;

/* Use EPS_P_INF for p = infinity. */
#define EPS_P_INF (1.0 / 0.0)

const char* eps_version(void);
const char* eps_last_error(void);
void eps_string_free(char* s);

/* ---- operators ------------------------------------------------------- */

eps_status eps_spec_create(const double* prefix, size_t prefix_len, double tail, double p,
                           eps_field field, eps_spec** out);
void eps_spec_destroy(eps_spec* spec);

eps_status eps_op_create_real(const double* entries, int rows, int cols, double p, eps_op** out);
eps_status eps_op_create_complex(const double* re, const double* im, int rows, int cols, double p,
                                 eps_op** out);
eps_status eps_op_identity(int dim, double p, eps_field field, eps_op** out);
eps_status eps_op_truncate(const eps_spec* spec, int n, eps_op** out);
eps_status eps_op_adjoint(const eps_op* a, eps_op** out);
eps_status eps_op_modulus(const eps_op* a, eps_op** out);
eps_status eps_op_polar(const eps_op* a, eps_op** isometry, eps_op** modulus);
eps_status eps_op_compose(const eps_op* a, const eps_op* b, eps_op** out);
eps_status eps_op_add(const eps_op* a, const eps_op* b, eps_op** out);
eps_status eps_op_scale(double re, double im, const eps_op* a, eps_op** out);
void eps_op_destroy(eps_op* op);

eps_status eps_op_shape(const eps_op* a, int* rows, int* cols, eps_field* field, double* p);
/* entries as row-major doubles; re/im may each be NULL */
eps_status eps_op_entries(const eps_op* a, double* re, double* im);

/* ---- certified quantities --------------------------------------------- */

/* Operator p->p norm bracket; exact for p in {1, 2, inf} and diagonals. */
eps_status eps_op_norm(const eps_op* a, double* lower, double* upper);

/* delta(n) = sup_k n^(-e/k) (sigma_1...sigma_k)^(1/k); attained_k = -1
 * when the supremum is approached in the k -> infinity limit. */
eps_status eps_delta(const eps_spec* spec, int n, double tol, double* value, int* attained_k,
                     double* tolerance);

/* [delta(n), 4 delta(n)], containing eps_n of the diagonal operator. */
eps_status eps_diagonal_sandwich(const eps_spec* spec, int n, double* lower, double* upper);

eps_status eps_volume_lower_bound(const eps_spec* spec, int k, int n, double* out);
eps_status eps_projection_entropy_lower(int k, int rank_n, eps_field field, double* out);

/* Certified bracket for the n-th entropy number of the operator.
 * witness_json (optional; eps_string_free) carries witnesses/methods. */
eps_status eps_entropy_bracket(const eps_op* a, int n, double eta, eps_effort effort,
                               double* lower, double* upper, char** witness_json);

/* Bracket-level inequality checks (1 = consistent, 0 = falsified). */
eps_status eps_check_subadditivity(int n, double lower_ts, double upper_t, double norm_s_upper,
                                   int* ok);
eps_status eps_check_submultiplicativity(int n, double lower_srt, double upper_r,
                                         double norm_s_upper, double norm_t_upper, int* ok);

/* ---- command surface --------------------------------------------------- */

/* Parses "key = value" configuration text into canonical JSON. */
eps_status eps_config_parse(const char* kv_text, char** json_out);

/* Runs bounds | estimate | converge | hilbert | props on a JSON-object
 * configuration; returns {"payload": ..., "metrics": ...} as JSON text.
 * The payload is byte-identical across runs for identical config. */
eps_status eps_run_command(const char* command, const char* config_json, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* EPSNUM_H */
