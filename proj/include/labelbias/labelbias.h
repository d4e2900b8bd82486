/*
 * labelbias - feature exclusion under label bias
 *
 * C interface to the labelbias shared library. All functions return an
 * lb_status; on failure, lb_last_error() gives a thread-local description of
 * what went wrong. Objects are opaque handles created and freed through
 * their lb_*_create / lb_*_free pairs. Strings returned through char** out
 * parameters are owned by the caller and released with lb_string_free().
 *
 * Determinism contract: every sampling routine takes an explicit 64-bit
 * seed. Sweeps derive one sub-seed per grid point from (seed, index) via
 * lb_derive_seed, so results are byte-identical regardless of the number of
 * worker threads.
 */

#ifndef LABELBIAS_H
#define LABELBIAS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lb_status {
  LB_OK = 0,
  LB_ERR_INVALID_ARGUMENT = 1,
  LB_ERR_INVALID_PARAMS = 2,
  LB_ERR_SINGULAR_SYSTEM = 3,
  LB_ERR_NOT_STANDARDIZED = 4,
  LB_ERR_SINGULAR_CONDITIONING_SET = 5,
  LB_ERR_MISSING_ROLE = 6,
  LB_ERR_MISSING_FEATURE = 7,
  LB_ERR_DEGENERATE_DESIGN = 8,
  LB_ERR_SEPARATION_DETECTED = 9,
  LB_ERR_DEGENERATE_TARGET = 10,
  LB_ERR_INVALID_VARIANCE = 11,
  LB_ERR_LENGTH_MISMATCH = 12,
  LB_ERR_AUC_UNDEFINED = 13,
  LB_ERR_IO = 14,
  LB_ERR_PARSE = 15,
  LB_ERR_UNMAPPED_COLUMN = 16,
  LB_ERR_EMPTY_AFTER_FILTERING = 17,
  LB_ERR_INVALID_CONFIG = 18,
  LB_ERR_INTERNAL = 19
} lb_status;

const char* lb_version(void);
const char* lb_status_name(lb_status status);

/* Description of the most recent failure on this thread. */
const char* lb_last_error(void);

void lb_string_free(char* s);

uint64_t lb_derive_seed(uint64_t base, const uint64_t* path, size_t path_len);

/* ------------------------------------------------------------------ */
/* Opaque handles                                                      */
/* ------------------------------------------------------------------ */

typedef struct lb_sem lb_sem;           /* linear structural equation model */
typedef struct lb_gaussian lb_gaussian; /* labeled multivariate normal */
typedef struct lb_dataset lb_dataset;   /* numeric table with named columns */
typedef struct lb_model lb_model;       /* fitted linear/logistic predictor */
typedef struct lb_sweep lb_sweep;       /* parameter sweep result table */
typedef struct lb_health lb_health;     /* loaded patient dataset */
typedef struct lb_curves lb_curves;     /* enrollment curves */

/* ------------------------------------------------------------------ */
/* Structural equation models                                          */
/* ------------------------------------------------------------------ */

/* Edge weights of the five-node arrest/behavior model; exogenous variances
 * are derived so that every node has variance exactly 1. */
typedef struct lb_stylized_params {
  double alpha; /* neighborhood -> arrests */
  double beta;  /* neighborhood -> behavior */
  double gamma; /* behavior -> arrests */
  double delta; /* covariance of the two behavior noise terms */
} lb_stylized_params;

lb_status lb_sem_create(const char* const* nodes, size_t n_nodes, lb_sem** out);
lb_status lb_sem_add_edge(lb_sem* sem, const char* from, const char* to, double weight);
lb_status lb_sem_add_bidirected(lb_sem* sem, const char* a, const char* b, double cov);
lb_status lb_sem_set_exo_variance(lb_sem* sem, const char* node, double variance);
lb_status lb_sem_validate(const lb_sem* sem);
lb_status lb_sem_stylized(lb_stylized_params params, lb_sem** out);
void lb_sem_free(lb_sem* sem);

lb_status lb_sem_implied_covariance(const lb_sem* sem, lb_gaussian** out);

/* Covariance by collider-free path enumeration; requires all implied node
 * variances to equal 1. */
lb_status lb_sem_trek_covariance(const lb_sem* sem, const char* a, const char* b, double* out);

lb_status lb_sem_sample(const lb_sem* sem, int64_t n, uint64_t seed, lb_dataset** out);

/* Closed forms for the stylized model:
 * Cov(A1, Z | A0) and Cov(B1, Z | A0). */
lb_status lb_stylized_conditional_covs(lb_stylized_params params, double* cov_a1_z_given_a0,
                                       double* cov_b1_z_given_a0);

/* ------------------------------------------------------------------ */
/* Gaussian systems                                                    */
/* ------------------------------------------------------------------ */

lb_status lb_gaussian_create(const char* const* labels, size_t dim, const double* mean,
                             const double* cov_row_major, lb_gaussian** out);
size_t lb_gaussian_dim(const lb_gaussian* g);
const char* lb_gaussian_label(const lb_gaussian* g, size_t i);
lb_status lb_gaussian_covariance(const lb_gaussian* g, const char* a, const char* b, double* out);

/* Conditional law of `targets` given `given`. Output buffers (caller
 * allocated): coefficients is n_targets x n_given row-major, intercepts has
 * n_targets entries, cond_cov is n_targets x n_targets row-major. Any output
 * pointer may be NULL to skip it. */
lb_status lb_gaussian_condition(const lb_gaussian* g, const char* const* targets,
                                size_t n_targets, const char* const* given, size_t n_given,
                                double* coefficients, double* intercepts, double* cond_cov);

lb_status lb_gaussian_sample(const lb_gaussian* g, int64_t n, uint64_t seed, lb_dataset** out);
void lb_gaussian_free(lb_gaussian* g);

/* ------------------------------------------------------------------ */
/* Datasets                                                            */
/* ------------------------------------------------------------------ */

lb_status lb_dataset_create(const char* const* columns, size_t n_cols, lb_dataset** out);
lb_status lb_dataset_append_row(lb_dataset* d, const double* values, size_t n_values);
lb_status lb_dataset_read_csv(const char* path, lb_dataset** out);
lb_status lb_dataset_write_csv(const lb_dataset* d, const char* path);
size_t lb_dataset_num_rows(const lb_dataset* d);
size_t lb_dataset_num_cols(const lb_dataset* d);
const char* lb_dataset_column_name(const lb_dataset* d, size_t i);
/* Copies a column into `out` (length lb_dataset_num_rows). */
lb_status lb_dataset_copy_column(const lb_dataset* d, const char* name, double* out);
void lb_dataset_free(lb_dataset* d);

/* ------------------------------------------------------------------ */
/* Estimators and metrics                                              */
/* ------------------------------------------------------------------ */

lb_status lb_fit_linear(const lb_dataset* d, const char* target, const char* const* features,
                        size_t n_features, double ridge, lb_model** out);
lb_status lb_fit_logistic(const lb_dataset* d, const char* target, const char* const* features,
                          size_t n_features, lb_model** out);
/* Scores into `out` (length lb_dataset_num_rows). Logistic fits produce
 * probabilities. */
lb_status lb_model_predict(const lb_model* m, const lb_dataset* d, double* out);
lb_status lb_model_coefficient(const lb_model* m, const char* feature, double* out);
lb_status lb_model_intercept(const lb_model* m, double* out);
lb_status lb_model_to_json(const lb_model* m, char** out_json);
void lb_model_free(lb_model* m);

lb_status lb_rmse(const double* scores, const double* truth, size_t n, double* out);
/* Mann-Whitney AUC, ties scored one half. Labels must be 0/1 with both
 * classes present. */
lb_status lb_auc(const double* scores, const double* labels, size_t n, double* out);

/* ------------------------------------------------------------------ */
/* Feature-exclusion criterion                                         */
/* ------------------------------------------------------------------ */

typedef enum lb_basis {
  LB_BASIS_THEOREM1 = 0,  /* sign of Cov(complex score, Y | X)          */
  LB_BASIS_COROLLARY1 = 1 /* opposite signs of Cov(Y,Z|X), Cov(Y',Z|X)  */
} lb_basis;

/* Role assignment for a feature-exclusion question. true_label may be NULL
 * when assumed_cov_y_z_given_x supplies the unobservable quantity. */
typedef struct lb_proxy_roles {
  const char* true_label;
  const char* proxy_label;
  const char* const* features;
  size_t n_features;
  const char* candidate;
  const double* assumed_cov_y_z_given_x; /* NULL unless true_label is NULL */
  int additive_noise_declared;           /* nonzero: Y' = Y + independent S */
} lb_proxy_roles;

/* Each check writes a JSON report with fields cov_yhat_y_given_x,
 * cov_y_z_given_x, cov_yproxy_z_given_x, strictness_term, decision, basis,
 * tolerance, mode. Decision is one of ExcludeZ / IncludeZ / Inconclusive. */
lb_status lb_criterion_check_gaussian(const lb_gaussian* g, const lb_proxy_roles* roles,
                                      lb_basis basis, char** out_json);
lb_status lb_criterion_check_dataset(const lb_dataset* d, const lb_proxy_roles* roles,
                                     lb_basis basis, char** out_json);
/* Stylized shortcut: Y = B1, Y' = A1, X = A0, Z = Z. */
lb_status lb_criterion_check_stylized(lb_stylized_params params, lb_basis basis, char** out_json);

/* Trains complex and simple models on Y + independent noise and scores both
 * against Y on a held-out half. */
lb_status lb_noise_benchmark_gaussian(const lb_gaussian* g, const lb_proxy_roles* roles,
                                      double noise_variance, int64_t n, uint64_t seed,
                                      double* mse_complex, double* mse_simple);
lb_status lb_noise_benchmark_stylized(lb_stylized_params params, double noise_variance,
                                      int64_t n, uint64_t seed, double* mse_complex,
                                      double* mse_simple);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */
/* ------------------------------------------------------------------ */

typedef struct lb_beta_sweep_config {
  const double* beta_grid; /* NULL: default 0, 0.05, ... capped by validity */
  size_t n_beta;
  double alpha, gamma, delta;
  int64_t n_train, n_test;
  uint64_t seed;
  int jobs;
} lb_beta_sweep_config;

lb_status lb_beta_sweep_config_default(lb_beta_sweep_config* out);
lb_status lb_beta_sweep_run(const lb_beta_sweep_config* config, lb_sweep** out);

/* Default grids. Call with out = NULL to query the length; otherwise out
 * must have room for max_len values and *n receives how many were written. */
lb_status lb_default_beta_grid(double alpha, double gamma, double delta, double* out,
                               size_t max_len, size_t* n);
lb_status lb_default_rho_grid(double* out, size_t max_len, size_t* n);

/* Exact population RMSE of the proxy-trained model (the noise-free curve
 * Monte Carlo sweeps converge to). */
lb_status lb_analytic_model_rmse(lb_stylized_params params, int complex_model, int true_label,
                                 double* out);

typedef struct lb_arrest_config {
  int64_t n;
  double p_high_policing;
  double log_rate_intercept, log_rate_behavior, log_rate_policing;
  double arrest_intercept, arrest_age, arrest_priors, arrest_policing;
} lb_arrest_config;

lb_status lb_arrest_config_default(lb_arrest_config* out);
lb_status lb_generate_arrest_surrogate(const lb_arrest_config* config, uint64_t seed,
                                       lb_dataset** out);
/* Bernoulli draw per row with logit -1 - age/100 + priors/2 + rho * policing;
 * writes 0/1 into out (length lb_dataset_num_rows). */
lb_status lb_simulate_true_offense(const lb_dataset* d, double rho, uint64_t seed, double* out);

typedef struct lb_rho_sweep_config {
  const double* rho_grid; /* NULL: default -1.0, -0.8, ..., 1.0 */
  size_t n_rho;
  int n_sim;
  uint64_t seed;
  int jobs;
} lb_rho_sweep_config;

lb_status lb_rho_sweep_config_default(lb_rho_sweep_config* out);
lb_status lb_rho_sweep_run(const lb_rho_sweep_config* config, const lb_dataset* surrogate,
                           lb_sweep** out);

size_t lb_sweep_num_cells(const lb_sweep* s);
lb_status lb_sweep_to_csv(const lb_sweep* s, char** out_csv);
lb_status lb_sweep_write_csv(const lb_sweep* s, const char* path);
void lb_sweep_free(lb_sweep* s);

/* ------------------------------------------------------------------ */
/* Care-management enrollment                                          */
/* ------------------------------------------------------------------ */

/* column_map_path NULL selects the built-in map for the released synthetic
 * dataset (lb_health_default_column_map). */
lb_status lb_health_load(const char* csv_path, const char* column_map_path, lb_health** out);
const char* lb_health_default_column_map(void);
size_t lb_health_num_rows(const lb_health* h);
int64_t lb_health_dropped_rows(const lb_health* h);
/* block: demographics | current_health | past_cost */
size_t lb_health_block_size(const lb_health* h, const char* block);
void lb_health_free(lb_health* h);

typedef struct lb_enrollment_config {
  const double* capacity_grid; /* NULL: 0.01 0.02 0.05 0.10 0.20 0.30 0.50 */
  size_t n_capacity;
  double ridge;
  double chronic_threshold;
  uint64_t seed;
} lb_enrollment_config;

lb_status lb_enrollment_config_default(lb_enrollment_config* out);
lb_status lb_enrollment_run(const lb_health* h, const lb_enrollment_config* config,
                            lb_curves** out);
lb_status lb_curves_to_csv(const lb_curves* c, char** out_csv);
lb_status lb_curves_write_csv(const lb_curves* c, const char* path);
void lb_curves_free(lb_curves* c);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LABELBIAS_H */
