/* ordstat C API: order-restricted location/scale estimation.
 *
 * All functions return ORDSTAT_OK (0) on success or a nonzero status
 * code; ordstat_last_error() describes the most recent failure on the
 * calling thread. Objects created by this API are released with their
 * matching free function. Strings returned through char** are owned by
 * the caller and released with ordstat_string_free().
 */
#ifndef ORDSTAT_H
#define ORDSTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ORDSTAT_API __declspec(dllexport)
#else
#define ORDSTAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ordstat_status {
    ORDSTAT_OK = 0,
    ORDSTAT_E_INVALID_ARGUMENT = 1,
    ORDSTAT_E_NONPOSITIVE_THETA = 2,
    ORDSTAT_E_UNSUPPORTED_FAMILY = 3,
    ORDSTAT_E_QUADRATURE_FAILURE = 4,
    ORDSTAT_E_MOMENT_DIVERGENCE = 5,
    ORDSTAT_E_ZERO_WEIGHTS = 6,
    ORDSTAT_E_OUT_OF_SUPPORT = 7,
    ORDSTAT_E_INAPPLICABLE_TAG = 8,
    ORDSTAT_E_DEGENERATE_DENOMINATOR = 9,
    ORDSTAT_E_INCONCLUSIVE = 10,
    ORDSTAT_E_ZERO_DENSITY = 11,
    ORDSTAT_E_UNKNOWN_PANEL = 12,
    ORDSTAT_E_PARSE = 13,
    ORDSTAT_E_IO = 14,
    ORDSTAT_E_INTERNAL = 15
} ordstat_status;

typedef enum ordstat_kind { ORDSTAT_LOCATION = 0, ORDSTAT_SCALE = 1 } ordstat_kind;

typedef enum ordstat_family {
    ORDSTAT_BIVARIATE_NORMAL = 0,
    ORDSTAT_INDEP_EXPONENTIAL_LOCATION = 1,
    ORDSTAT_INDEP_GAMMA_SCALE = 2,
    ORDSTAT_INDEP_POWER_SCALE = 3
} ordstat_family;

typedef enum ordstat_target { ORDSTAT_THETA1 = 0, ORDSTAT_THETA2 = 1 } ordstat_target;

typedef enum ordstat_tag {
    ORDSTAT_TAG_BLEE = 0,
    ORDSTAT_TAG_BSEE = 1,
    ORDSTAT_TAG_RMLE = 2,
    ORDSTAT_TAG_EXP_DOMINATOR = 3,
    ORDSTAT_TAG_GAMMA_DOMINATOR = 4,
    ORDSTAT_TAG_POWER_DOMINATOR = 5,
    ORDSTAT_TAG_IRE_ON_BLEES = 6,
    ORDSTAT_TAG_IRE_ON_BSEES = 7
} ordstat_tag;

typedef enum ordstat_limit_class {
    ORDSTAT_LIMIT_FINITE = 0,
    ORDSTAT_LIMIT_PLUS_INFINITY = 1,
    ORDSTAT_LIMIT_MINUS_INFINITY = 2
} ordstat_limit_class;

typedef enum ordstat_direction {
    ORDSTAT_DIR_INCREASING = 0,
    ORDSTAT_DIR_DECREASING = 1,
    ORDSTAT_DIR_CONSTANT = 2
} ordstat_direction;

typedef enum ordstat_lemma_case {
    ORDSTAT_CASE_A = 0,
    ORDSTAT_CASE_B = 1,
    ORDSTAT_CASE_UNVERIFIED = 2
} ordstat_lemma_case;

typedef enum ordstat_verdict {
    ORDSTAT_DOMINATES_WITHIN_MC = 0,
    ORDSTAT_NO_DOMINANCE = 1,
    ORDSTAT_MIXED = 2
} ordstat_verdict;

typedef struct ordstat_model ordstat_model; /* opaque */

typedef struct ordstat_estimator {
    int target;       /* ordstat_target */
    int kind;         /* ordstat_kind */
    double c0;        /* anchor constant */
    double companion; /* nu for theta1, beta for theta2 */
    double alpha;     /* pooling weight, any real */
} ordstat_estimator;

typedef struct ordstat_estimate {
    double value;
    double pair1;
    double pair2;
    int pooled;
    int nonpositive; /* scale estimate left the action space */
} ordstat_estimate;

typedef struct ordstat_limit {
    int cls; /* ordstat_limit_class */
    double value;
} ordstat_limit;

typedef struct ordstat_interval {
    double low;  /* -HUGE_VAL for an unbounded lower end */
    double high; /* +HUGE_VAL for an unbounded upper end */
    int direction; /* ordstat_direction */
    char theorem[8];
    int trusted;
    double boundary_value;
    ordstat_limit limit;
} ordstat_interval;

ORDSTAT_API const char* ordstat_version(void);

/* Description of the last error raised on this thread; never NULL. */
ORDSTAT_API const char* ordstat_last_error(void);

ORDSTAT_API void ordstat_string_free(char* s);

/* -- models ----------------------------------------------------------- */

ORDSTAT_API ordstat_status ordstat_model_create(int kind, int family, const double* params,
                                                size_t n_params, double theta1, double theta2,
                                                ordstat_model** out);

/* Parses the TOML model definition (keys: kind, family, params, theta). */
ORDSTAT_API ordstat_status ordstat_model_parse_toml(const char* text, ordstat_model** out);
ORDSTAT_API ordstat_status ordstat_model_load_file(const char* path, ordstat_model** out);

ORDSTAT_API void ordstat_model_free(ordstat_model* model);

ORDSTAT_API ordstat_status ordstat_model_kind(const ordstat_model* model, int* out_kind);

ORDSTAT_API ordstat_status ordstat_model_density(const ordstat_model* model, double x1, double x2,
                                                 double* out);
ORDSTAT_API ordstat_status ordstat_model_fz(const ordstat_model* model, double z, double* out);

/* which: 1..4 select the conditional moments psi1..psi4, 5 selects psi,
 * 6 selects psi_star. psi3..psi6 exist for the scale kind only. */
ORDSTAT_API ordstat_status ordstat_model_psi(const ordstat_model* model, int which, double z,
                                             double* out);

/* Best location/scale equivariant-estimator constants (c01, c02). */
ORDSTAT_API ordstat_status ordstat_model_constants(const ordstat_model* model, double* c01,
                                                   double* c02);

/* Draws n points under the model's theta into xs (interleaved x1,x2). */
ORDSTAT_API ordstat_status ordstat_model_sample(const ordstat_model* model, size_t n,
                                                uint64_t seed, double* xs);

/* -- estimators ------------------------------------------------------- */

ORDSTAT_API ordstat_status ordstat_isotonic_pair(double d1, double d2, double w1, double w2,
                                                 double* y1, double* y2);

ORDSTAT_API ordstat_status ordstat_estimate(const ordstat_estimator* spec, double x1, double x2,
                                            ordstat_estimate* out);

ORDSTAT_API ordstat_status ordstat_named_estimator(const ordstat_model* model, int tag,
                                                   int target, ordstat_estimator* out);

/* JSON round trip for the estimator spec: {target, kind, c0, companion,
 * alpha, tag?}. */
ORDSTAT_API ordstat_status ordstat_estimator_to_json(const ordstat_estimator* spec, char** out);
ORDSTAT_API ordstat_status ordstat_estimator_from_json(const char* text, ordstat_estimator* out);

/* -- weight curves and admissibility ---------------------------------- */

ORDSTAT_API ordstat_status ordstat_alpha_value(const ordstat_model* model, int target,
                                               double companion, double lambda, double* out);

ORDSTAT_API ordstat_status ordstat_alpha_curve(const ordstat_model* model, int target,
                                               double companion, const double* lambdas,
                                               size_t n, double* out_values);

ORDSTAT_API ordstat_status ordstat_default_lambda_grid(int kind, int points, double lo, double hi,
                                                       double* out);

ORDSTAT_API ordstat_status ordstat_infinity_limit(const ordstat_model* model, int target,
                                                  double companion, ordstat_limit* out);

/* Computes the admissible-weight interval; report_json (optional) gets
 * the full assumption report. ORDSTAT_E_INCONCLUSIVE still fills the
 * boundary fields. */
ORDSTAT_API ordstat_status ordstat_admissible_interval(const ordstat_model* model, int target,
                                                       double companion, ordstat_interval* out,
                                                       char** report_json);

ORDSTAT_API ordstat_status ordstat_check_assumptions(const ordstat_model* model, int target,
                                                     double companion, int* lemma_case,
                                                     char** report_json);

ORDSTAT_API ordstat_status ordstat_oracle_best_alpha(const ordstat_model* model, int target,
                                                     double companion, double lambda, size_t n,
                                                     uint64_t seed, double* out);

/* -- risk ------------------------------------------------------------- */

ORDSTAT_API ordstat_status ordstat_simulate_risk(const ordstat_model* model,
                                                 const ordstat_estimator* spec,
                                                 const double* lambdas, size_t n_lambda, long n,
                                                 uint64_t seed, double* out_risk, double* out_se);

ORDSTAT_API ordstat_status ordstat_quadrature_risk_location(const ordstat_model* model,
                                                            const ordstat_estimator* spec,
                                                            double lambda, double* out);

ORDSTAT_API ordstat_status ordstat_dominance_report(const ordstat_model* model,
                                                    const ordstat_estimator* challenger,
                                                    const ordstat_estimator* incumbent,
                                                    const double* lambdas, size_t n_lambda,
                                                    long n, uint64_t seed, double* out_gaps,
                                                    double* out_z, int* out_verdict);

/* Reproduces one published panel: writes fig{id}_{p1}_{p2}.csv/.svg into
 * out_dir and returns a JSON summary (curves, files, verdicts). */
ORDSTAT_API ordstat_status ordstat_figure(int figure_id, double p1, double p2, long n,
                                          uint64_t seed, const char* out_dir, int points,
                                          double lambda_lo, double lambda_hi,
                                          char** summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ORDSTAT_H */
