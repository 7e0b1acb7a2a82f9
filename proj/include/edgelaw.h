/* edgelaw: rightmost-eigenvalue laws of the elliptic Ginibre ensemble at weak
 * non-Hermiticity. C interface; all functions are thread-safe unless noted. */
#ifndef EDGELAW_H
#define EDGELAW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EDGELAW_API __declspec(dllexport)
#else
#define EDGELAW_API __attribute__((visibility("default")))
#endif

typedef enum edgelaw_status {
    EDGELAW_OK = 0,
    EDGELAW_NUMERIC_FAILURE = 1,
    EDGELAW_IO_ERROR = 2,
    EDGELAW_INVALID_ARGUMENT = 3
} edgelaw_status;

/* Message of the last failure on the calling thread; empty after success. */
EDGELAW_API const char* edgelaw_last_error(void);
EDGELAW_API const char* edgelaw_version(void);

/* Caps worker threads; 0 restores the default (EDGELAW_THREADS or all cores). */
EDGELAW_API void edgelaw_set_threads(unsigned n);

/* Special functions. */
EDGELAW_API double edgelaw_airy_ai(double x);
EDGELAW_API double edgelaw_airy_ai_prime(double x);
EDGELAW_API double edgelaw_phi(double x);

/* Kernels. */
EDGELAW_API double edgelaw_airy_kernel(double a, double b);
EDGELAW_API edgelaw_status edgelaw_ft_airy_kernel(double a, double b, double t, double sigma, double* out);
/* delta <= 0 selects the saddle-point contour. */
EDGELAW_API edgelaw_status edgelaw_ft_airy_kernel_contour(double a, double b, double t, double sigma,
                                                          double delta, double* out);

typedef enum edgelaw_method {
    EDGELAW_METHOD_FREDHOLM = 0,
    EDGELAW_METHOD_TRACE_SERIES = 1,
    EDGELAW_METHOD_IDPII = 2
} edgelaw_method;

typedef struct edgelaw_dist_eval {
    int method; /* edgelaw_method */
    double t;
    double sigma;
    double value;     /* F */
    double one_minus; /* 1 - F */
    double log_value; /* ln F */
    double err_est;
    int tail_bracket; /* nonzero when [tail_lower, tail_upper] brackets 1 - F */
    double tail_lower;
    double tail_upper;
    size_t m;
    double L;
} edgelaw_dist_eval;

/* Nystrom determinant; m = 0 and L = 0 pick defaults. */
EDGELAW_API edgelaw_status edgelaw_F_sigma(double t, double sigma, size_t m, double L, edgelaw_dist_eval* out);
/* Trace-series route for large sigma. */
EDGELAW_API edgelaw_status edgelaw_F_sigma_large(double t, double sigma, edgelaw_dist_eval* out);

EDGELAW_API edgelaw_status edgelaw_trace_1d(double t, double sigma, int n, size_t m, double L, double* out);
/* m, L, mx, my = 0 pick defaults. With equal L and m = mx the sigma = 0 traces agree to rounding. */
EDGELAW_API edgelaw_status edgelaw_trace_2d(double t, double sigma, int n, size_t mx, size_t my, double L,
                                            double* out);

/* Integro-differential Painleve II. */
typedef struct edgelaw_pii edgelaw_pii;

/* Integrates from t0 down to t_min; m_h = 0 and ode_tol <= 0 pick defaults (32, 1e-10). */
EDGELAW_API edgelaw_status edgelaw_pii_solve(double sigma, double t_min, double t0, size_t m_h, double ode_tol,
                                             edgelaw_pii** out);
EDGELAW_API void edgelaw_pii_free(edgelaw_pii* state);
EDGELAW_API edgelaw_status edgelaw_pii_F(const edgelaw_pii* state, double t, edgelaw_dist_eval* out);
EDGELAW_API edgelaw_status edgelaw_pii_residual(const edgelaw_pii* state, double t, size_t k, double* out);
EDGELAW_API size_t edgelaw_pii_grid_size(const edgelaw_pii* state);
EDGELAW_API size_t edgelaw_pii_nodes(const edgelaw_pii* state);
/* Grid point i (0 at t0, decreasing t) with E(t) and p(t, y_mid). */
EDGELAW_API edgelaw_status edgelaw_pii_grid_point(const edgelaw_pii* state, size_t i, double* t, double* E,
                                                  double* p_mid);

/* Asymptotic tails. */
typedef enum edgelaw_regime {
    EDGELAW_RIGHT_THM2 = 0,
    EDGELAW_RIGHT_THM3 = 1,
    EDGELAW_LEFT_COR4 = 2,
    EDGELAW_GUMBEL = 3
} edgelaw_regime;

typedef struct edgelaw_tail {
    int regime; /* edgelaw_regime */
    double t;
    double sigma;
    double value;
    double one_minus;
    double log_value;
    int valid;
} edgelaw_tail;

EDGELAW_API edgelaw_status edgelaw_tail_eval(int regime, double t, double sigma, edgelaw_tail* out);
EDGELAW_API edgelaw_status edgelaw_gumbel_constants(double sigma, double* a, double* c);
EDGELAW_API double edgelaw_gumbel_cdf(double t);

/* Monte Carlo. */
typedef enum edgelaw_ensemble { EDGELAW_GUE = 0, EDGELAW_EGINUE = 1, EDGELAW_GINUE = 2 } edgelaw_ensemble;
typedef enum edgelaw_scaling {
    EDGELAW_SCALE_GUE_EDGE = 0,
    EDGELAW_SCALE_GINUE_EDGE = 1,
    EDGELAW_SCALE_RAW = 2
} edgelaw_scaling;
typedef enum edgelaw_reference {
    EDGELAW_REF_NONE = 0,
    EDGELAW_REF_TRACY_WIDOM = 1,
    EDGELAW_REF_GUMBEL = 2,
    EDGELAW_REF_F_SIGMA = 3
} edgelaw_reference;

typedef struct edgelaw_mc_config {
    int ensemble;  /* edgelaw_ensemble */
    size_t n;
    double tau;
    size_t trials;
    uint64_t seed;
    int scaling;   /* edgelaw_scaling */
    int reference; /* edgelaw_reference */
    double sigma;  /* for EDGELAW_REF_F_SIGMA; < 0 derives n^{1/6} sqrt(1 - tau) */
} edgelaw_mc_config;

typedef struct edgelaw_mc_run edgelaw_mc_run;

EDGELAW_API void edgelaw_mc_config_default(edgelaw_mc_config* cfg);
EDGELAW_API edgelaw_status edgelaw_mc_run_experiment(const edgelaw_mc_config* cfg, edgelaw_mc_run** out);
EDGELAW_API void edgelaw_mc_free(edgelaw_mc_run* run);
EDGELAW_API size_t edgelaw_mc_sample_count(const edgelaw_mc_run* run);
EDGELAW_API const double* edgelaw_mc_samples(const edgelaw_mc_run* run);
EDGELAW_API double edgelaw_mc_mean(const edgelaw_mc_run* run);
/* Negative when the run has no reference law. */
EDGELAW_API double edgelaw_mc_ks(const edgelaw_mc_run* run);
EDGELAW_API const char* edgelaw_mc_reference_name(const edgelaw_mc_run* run);
EDGELAW_API edgelaw_status edgelaw_ks_distance(const double* samples, size_t count, int reference, double sigma,
                                               double* out);
EDGELAW_API edgelaw_status edgelaw_elliptic_law_check(size_t n, double tau, size_t trials, uint64_t seed,
                                                      double* fraction);

/* Self-test. The callback receives one call per check. */
typedef void (*edgelaw_check_fn)(const char* name, int passed, double measured, double tolerance, void* user);

typedef struct edgelaw_selftest_options {
    const char* filter;          /* run only checks whose name contains this; NULL for all */
    double zeta_perturbation;    /* added to zeta'(-1) in the left-tail check */
} edgelaw_selftest_options;

EDGELAW_API edgelaw_status edgelaw_selftest(const edgelaw_selftest_options* opts, edgelaw_check_fn cb, void* user,
                                            int* failures);

#ifdef __cplusplus
}
#endif

#endif /* EDGELAW_H */
