#include "labelbias/labelbias.h"

#include <cstring>
#include <string>

#include "core/common.hpp"
#include "core/criterion.hpp"
#include "core/dataset.hpp"
#include "core/estimators.hpp"
#include "core/experiments.hpp"
#include "core/gaussian.hpp"
#include "core/health.hpp"
#include "core/rng.hpp"
#include "core/sem.hpp"

using labelbias::Error;
using labelbias::ErrorCode;

struct lb_sem {
  labelbias::LinearSem impl;
};
struct lb_gaussian {
  labelbias::GaussianSystem impl;
};
struct lb_dataset {
  labelbias::Dataset impl;
};
struct lb_model {
  labelbias::ModelFit impl;
};
struct lb_sweep {
  labelbias::SweepResult impl;
};
struct lb_health {
  labelbias::HealthDataset impl;
};
struct lb_curves {
  labelbias::EnrollmentCurves impl;
};

namespace {

thread_local std::string g_last_error;

lb_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return LB_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_params: return LB_ERR_INVALID_PARAMS;
    case ErrorCode::singular_system: return LB_ERR_SINGULAR_SYSTEM;
    case ErrorCode::not_standardized: return LB_ERR_NOT_STANDARDIZED;
    case ErrorCode::singular_conditioning_set: return LB_ERR_SINGULAR_CONDITIONING_SET;
    case ErrorCode::missing_role: return LB_ERR_MISSING_ROLE;
    case ErrorCode::missing_feature: return LB_ERR_MISSING_FEATURE;
    case ErrorCode::degenerate_design: return LB_ERR_DEGENERATE_DESIGN;
    case ErrorCode::separation_detected: return LB_ERR_SEPARATION_DETECTED;
    case ErrorCode::degenerate_target: return LB_ERR_DEGENERATE_TARGET;
    case ErrorCode::invalid_variance: return LB_ERR_INVALID_VARIANCE;
    case ErrorCode::length_mismatch: return LB_ERR_LENGTH_MISMATCH;
    case ErrorCode::auc_undefined: return LB_ERR_AUC_UNDEFINED;
    case ErrorCode::io_error: return LB_ERR_IO;
    case ErrorCode::parse_error: return LB_ERR_PARSE;
    case ErrorCode::unmapped_column: return LB_ERR_UNMAPPED_COLUMN;
    case ErrorCode::empty_after_filtering: return LB_ERR_EMPTY_AFTER_FILTERING;
    case ErrorCode::invalid_config: return LB_ERR_INVALID_CONFIG;
    case ErrorCode::internal: return LB_ERR_INTERNAL;
  }
  return LB_ERR_INTERNAL;
}

template <typename F>
lb_status wrap(F&& f) {
  try {
    f();
    g_last_error.clear();
    return LB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LB_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) labelbias::fail(ErrorCode::invalid_argument, what);
}

std::vector<std::string> to_strings(const char* const* items, size_t n, const char* what) {
  require(items != nullptr || n == 0, what);
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    require(items[i] != nullptr, what);
    out.emplace_back(items[i]);
  }
  return out;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

labelbias::StylizedParams to_params(lb_stylized_params p) {
  return {p.alpha, p.beta, p.gamma, p.delta};
}

labelbias::ProxyProblem make_problem(const lb_proxy_roles* roles) {
  require(roles != nullptr, "roles is null");
  require(roles->proxy_label != nullptr, "proxy_label is null");
  require(roles->candidate != nullptr, "candidate is null");
  labelbias::ProxyProblem p;
  p.true_label = roles->true_label ? roles->true_label : "";
  p.proxy_label = roles->proxy_label;
  p.features = to_strings(roles->features, roles->n_features, "features entry is null");
  p.candidate = roles->candidate;
  if (roles->assumed_cov_y_z_given_x) {
    p.assumed_cov_y_z_given_x = *roles->assumed_cov_y_z_given_x;
  }
  p.additive_noise_declared = roles->additive_noise_declared != 0;
  return p;
}

labelbias::CriterionReport run_basis(const labelbias::ProxyProblem& p, lb_basis basis) {
  switch (basis) {
    case LB_BASIS_THEOREM1: return labelbias::theorem1_condition(p);
    case LB_BASIS_COROLLARY1: return labelbias::corollary_signs(p);
  }
  labelbias::fail(ErrorCode::invalid_argument, "unknown basis");
}

}  // namespace

extern "C" {

const char* lb_version(void) { return "0.1.0"; }

const char* lb_status_name(lb_status status) {
  switch (status) {
    case LB_OK: return "ok";
    case LB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case LB_ERR_INVALID_PARAMS: return "invalid-params";
    case LB_ERR_SINGULAR_SYSTEM: return "singular-system";
    case LB_ERR_NOT_STANDARDIZED: return "not-standardized";
    case LB_ERR_SINGULAR_CONDITIONING_SET: return "singular-conditioning-set";
    case LB_ERR_MISSING_ROLE: return "missing-role";
    case LB_ERR_MISSING_FEATURE: return "missing-feature";
    case LB_ERR_DEGENERATE_DESIGN: return "singular-design";
    case LB_ERR_SEPARATION_DETECTED: return "separation-detected";
    case LB_ERR_DEGENERATE_TARGET: return "degenerate-target";
    case LB_ERR_INVALID_VARIANCE: return "invalid-variance";
    case LB_ERR_LENGTH_MISMATCH: return "length-mismatch";
    case LB_ERR_AUC_UNDEFINED: return "auc-undefined";
    case LB_ERR_IO: return "missing-file";
    case LB_ERR_PARSE: return "parse-error";
    case LB_ERR_UNMAPPED_COLUMN: return "unmapped-column";
    case LB_ERR_EMPTY_AFTER_FILTERING: return "empty-after-filtering";
    case LB_ERR_INVALID_CONFIG: return "invalid-config";
    case LB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lb_last_error(void) { return g_last_error.c_str(); }

void lb_string_free(char* s) { delete[] s; }

uint64_t lb_derive_seed(uint64_t base, const uint64_t* path, size_t path_len) {
  return labelbias::derive_seed(base, path, path_len);
}

/* ---------------- SEM ---------------- */

lb_status lb_sem_create(const char* const* nodes, size_t n_nodes, lb_sem** out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = new lb_sem{labelbias::LinearSem(to_strings(nodes, n_nodes, "node name is null"))};
  });
}

lb_status lb_sem_add_edge(lb_sem* sem, const char* from, const char* to, double weight) {
  return wrap([&] {
    require(sem && from && to, "null argument");
    sem->impl.add_edge(from, to, weight);
  });
}

lb_status lb_sem_add_bidirected(lb_sem* sem, const char* a, const char* b, double cov) {
  return wrap([&] {
    require(sem && a && b, "null argument");
    sem->impl.add_bidirected(a, b, cov);
  });
}

lb_status lb_sem_set_exo_variance(lb_sem* sem, const char* node, double variance) {
  return wrap([&] {
    require(sem && node, "null argument");
    sem->impl.set_exo_variance(node, variance);
  });
}

lb_status lb_sem_validate(const lb_sem* sem) {
  return wrap([&] {
    require(sem != nullptr, "sem is null");
    sem->impl.validate();
  });
}

lb_status lb_sem_stylized(lb_stylized_params params, lb_sem** out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = new lb_sem{labelbias::build_stylized(to_params(params))};
  });
}

void lb_sem_free(lb_sem* sem) { delete sem; }

lb_status lb_sem_implied_covariance(const lb_sem* sem, lb_gaussian** out) {
  return wrap([&] {
    require(sem && out, "null argument");
    *out = new lb_gaussian{labelbias::implied_covariance(sem->impl)};
  });
}

lb_status lb_sem_trek_covariance(const lb_sem* sem, const char* a, const char* b, double* out) {
  return wrap([&] {
    require(sem && a && b && out, "null argument");
    *out = labelbias::trek_covariance(sem->impl, a, b);
  });
}

lb_status lb_sem_sample(const lb_sem* sem, int64_t n, uint64_t seed, lb_dataset** out) {
  return wrap([&] {
    require(sem && out, "null argument");
    *out = new lb_dataset{labelbias::sample(sem->impl, n, seed)};
  });
}

lb_status lb_stylized_conditional_covs(lb_stylized_params params, double* cov_a1_z_given_a0,
                                       double* cov_b1_z_given_a0) {
  return wrap([&] {
    require(cov_a1_z_given_a0 && cov_b1_z_given_a0, "null argument");
    auto covs = labelbias::stylized_conditional_covs(to_params(params));
    *cov_a1_z_given_a0 = covs.cov_a1_z_given_a0;
    *cov_b1_z_given_a0 = covs.cov_b1_z_given_a0;
  });
}

/* ---------------- Gaussian ---------------- */

lb_status lb_gaussian_create(const char* const* labels, size_t dim, const double* mean,
                             const double* cov_row_major, lb_gaussian** out) {
  return wrap([&] {
    require(mean && cov_row_major && out, "null argument");
    auto names = to_strings(labels, dim, "label is null");
    Eigen::VectorXd mu(static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd cov(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (size_t i = 0; i < dim; ++i) {
      mu(static_cast<Eigen::Index>(i)) = mean[i];
      for (size_t j = 0; j < dim; ++j) {
        cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov_row_major[i * dim + j];
      }
    }
    *out = new lb_gaussian{labelbias::GaussianSystem(std::move(names), std::move(mu), std::move(cov))};
  });
}

size_t lb_gaussian_dim(const lb_gaussian* g) { return g ? g->impl.dim() : 0; }

const char* lb_gaussian_label(const lb_gaussian* g, size_t i) {
  if (!g || i >= g->impl.dim()) return nullptr;
  return g->impl.labels()[i].c_str();
}

lb_status lb_gaussian_covariance(const lb_gaussian* g, const char* a, const char* b, double* out) {
  return wrap([&] {
    require(g && a && b && out, "null argument");
    *out = g->impl.covariance(a, b);
  });
}

lb_status lb_gaussian_condition(const lb_gaussian* g, const char* const* targets, size_t n_targets,
                                const char* const* given, size_t n_given, double* coefficients,
                                double* intercepts, double* cond_cov) {
  return wrap([&] {
    require(g != nullptr, "g is null");
    auto law = labelbias::condition(g->impl, to_strings(targets, n_targets, "target is null"),
                                    to_strings(given, n_given, "given label is null"));
    if (coefficients) {
      for (size_t r = 0; r < n_targets; ++r) {
        for (size_t c = 0; c < n_given; ++c) {
          coefficients[r * n_given + c] =
              law.coefficients(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
      }
    }
    if (intercepts) {
      for (size_t r = 0; r < n_targets; ++r) intercepts[r] = law.intercept(static_cast<Eigen::Index>(r));
    }
    if (cond_cov) {
      for (size_t r = 0; r < n_targets; ++r) {
        for (size_t c = 0; c < n_targets; ++c) {
          cond_cov[r * n_targets + c] =
              law.cond_cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
      }
    }
  });
}

lb_status lb_gaussian_sample(const lb_gaussian* g, int64_t n, uint64_t seed, lb_dataset** out) {
  return wrap([&] {
    require(g && out, "null argument");
    *out = new lb_dataset{labelbias::sample(g->impl, n, seed)};
  });
}

void lb_gaussian_free(lb_gaussian* g) { delete g; }

/* ---------------- Dataset ---------------- */

lb_status lb_dataset_create(const char* const* columns, size_t n_cols, lb_dataset** out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = new lb_dataset{labelbias::Dataset(to_strings(columns, n_cols, "column name is null"))};
  });
}

lb_status lb_dataset_append_row(lb_dataset* d, const double* values, size_t n_values) {
  return wrap([&] {
    require(d && values, "null argument");
    d->impl.append_row(std::vector<double>(values, values + n_values));
  });
}

lb_status lb_dataset_read_csv(const char* path, lb_dataset** out) {
  return wrap([&] {
    require(path && out, "null argument");
    *out = new lb_dataset{labelbias::Dataset::read_csv(path)};
  });
}

lb_status lb_dataset_write_csv(const lb_dataset* d, const char* path) {
  return wrap([&] {
    require(d && path, "null argument");
    d->impl.write_csv(path);
  });
}

size_t lb_dataset_num_rows(const lb_dataset* d) { return d ? d->impl.num_rows() : 0; }

size_t lb_dataset_num_cols(const lb_dataset* d) { return d ? d->impl.num_cols() : 0; }

const char* lb_dataset_column_name(const lb_dataset* d, size_t i) {
  if (!d || i >= d->impl.num_cols()) return nullptr;
  return d->impl.column_names()[i].c_str();
}

lb_status lb_dataset_copy_column(const lb_dataset* d, const char* name, double* out) {
  return wrap([&] {
    require(d && name && out, "null argument");
    const auto& col = d->impl.column(name);
    std::memcpy(out, col.data(), col.size() * sizeof(double));
  });
}

void lb_dataset_free(lb_dataset* d) { delete d; }

/* ---------------- Estimators ---------------- */

lb_status lb_fit_linear(const lb_dataset* d, const char* target, const char* const* features,
                        size_t n_features, double ridge, lb_model** out) {
  return wrap([&] {
    require(d && target && out, "null argument");
    *out = new lb_model{labelbias::fit_linear(
        d->impl, target, to_strings(features, n_features, "feature is null"), ridge)};
  });
}

lb_status lb_fit_logistic(const lb_dataset* d, const char* target, const char* const* features,
                          size_t n_features, lb_model** out) {
  return wrap([&] {
    require(d && target && out, "null argument");
    *out = new lb_model{labelbias::fit_logistic(
        d->impl, target, to_strings(features, n_features, "feature is null"))};
  });
}

lb_status lb_model_predict(const lb_model* m, const lb_dataset* d, double* out) {
  return wrap([&] {
    require(m && d && out, "null argument");
    std::vector<double> scores = labelbias::predict(m->impl, d->impl);
    std::memcpy(out, scores.data(), scores.size() * sizeof(double));
  });
}

lb_status lb_model_coefficient(const lb_model* m, const char* feature, double* out) {
  return wrap([&] {
    require(m && feature && out, "null argument");
    *out = m->impl.coefficient(feature);
  });
}

lb_status lb_model_intercept(const lb_model* m, double* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->impl.intercept;
  });
}

lb_status lb_model_to_json(const lb_model* m, char** out_json) {
  return wrap([&] {
    require(m && out_json, "null argument");
    *out_json = copy_string(m->impl.to_json());
  });
}

void lb_model_free(lb_model* m) { delete m; }

lb_status lb_rmse(const double* scores, const double* truth, size_t n, double* out) {
  return wrap([&] {
    require(scores && truth && out, "null argument");
    *out = labelbias::rmse(std::vector<double>(scores, scores + n),
                           std::vector<double>(truth, truth + n));
  });
}

lb_status lb_auc(const double* scores, const double* labels, size_t n, double* out) {
  return wrap([&] {
    require(scores && labels && out, "null argument");
    *out = labelbias::auc(std::vector<double>(scores, scores + n),
                          std::vector<double>(labels, labels + n));
  });
}

/* ---------------- Criterion ---------------- */

lb_status lb_criterion_check_gaussian(const lb_gaussian* g, const lb_proxy_roles* roles,
                                      lb_basis basis, char** out_json) {
  return wrap([&] {
    require(g && out_json, "null argument");
    labelbias::ProxyProblem p = make_problem(roles);
    p.system = g->impl;
    *out_json = copy_string(run_basis(p, basis).to_json());
  });
}

lb_status lb_criterion_check_dataset(const lb_dataset* d, const lb_proxy_roles* roles,
                                     lb_basis basis, char** out_json) {
  return wrap([&] {
    require(d && out_json, "null argument");
    labelbias::ProxyProblem p = make_problem(roles);
    p.data = d->impl;
    *out_json = copy_string(run_basis(p, basis).to_json());
  });
}

lb_status lb_criterion_check_stylized(lb_stylized_params params, lb_basis basis, char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "out_json is null");
    labelbias::ProxyProblem p = labelbias::ProxyProblem::analytic(
        labelbias::implied_covariance(labelbias::build_stylized(to_params(params))), "B1", "A1",
        {"A0"}, "Z");
    *out_json = copy_string(run_basis(p, basis).to_json());
  });
}

lb_status lb_noise_benchmark_gaussian(const lb_gaussian* g, const lb_proxy_roles* roles,
                                      double noise_variance, int64_t n, uint64_t seed,
                                      double* mse_complex, double* mse_simple) {
  return wrap([&] {
    require(g && mse_complex && mse_simple, "null argument");
    labelbias::ProxyProblem p = make_problem(roles);
    p.system = g->impl;
    auto bench = labelbias::noise_benchmark(p, noise_variance, n, seed);
    *mse_complex = bench.mse_complex;
    *mse_simple = bench.mse_simple;
  });
}

lb_status lb_noise_benchmark_stylized(lb_stylized_params params, double noise_variance, int64_t n,
                                      uint64_t seed, double* mse_complex, double* mse_simple) {
  return wrap([&] {
    require(mse_complex && mse_simple, "null argument");
    labelbias::ProxyProblem p = labelbias::ProxyProblem::analytic(
        labelbias::implied_covariance(labelbias::build_stylized(to_params(params))), "B1", "A1",
        {"A0"}, "Z");
    auto bench = labelbias::noise_benchmark(p, noise_variance, n, seed);
    *mse_complex = bench.mse_complex;
    *mse_simple = bench.mse_simple;
  });
}

/* ---------------- Experiments ---------------- */

lb_status lb_beta_sweep_config_default(lb_beta_sweep_config* out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = lb_beta_sweep_config{nullptr, 0, 0.4, 0.4, 0.4, 200000, 200000, 0, 1};
  });
}

lb_status lb_beta_sweep_run(const lb_beta_sweep_config* config, lb_sweep** out) {
  return wrap([&] {
    require(config && out, "null argument");
    labelbias::BetaSweepConfig c;
    if (config->beta_grid) {
      c.beta_grid.assign(config->beta_grid, config->beta_grid + config->n_beta);
    } else {
      c.beta_grid = labelbias::default_beta_grid(config->alpha, config->gamma, config->delta);
    }
    c.alpha = config->alpha;
    c.gamma = config->gamma;
    c.delta = config->delta;
    c.n_train = config->n_train;
    c.n_test = config->n_test;
    c.seed = config->seed;
    c.jobs = config->jobs;
    *out = new lb_sweep{labelbias::run_beta_sweep(c)};
  });
}

lb_status lb_default_beta_grid(double alpha, double gamma, double delta, double* out,
                               size_t max_len, size_t* n) {
  return wrap([&] {
    require(n != nullptr, "n is null");
    std::vector<double> grid = labelbias::default_beta_grid(alpha, gamma, delta);
    *n = grid.size();
    if (out != nullptr) {
      require(max_len >= grid.size(), "output buffer too small for the default grid");
      std::memcpy(out, grid.data(), grid.size() * sizeof(double));
    }
  });
}

lb_status lb_default_rho_grid(double* out, size_t max_len, size_t* n) {
  return wrap([&] {
    require(n != nullptr, "n is null");
    std::vector<double> grid = labelbias::default_rho_grid();
    *n = grid.size();
    if (out != nullptr) {
      require(max_len >= grid.size(), "output buffer too small for the default grid");
      std::memcpy(out, grid.data(), grid.size() * sizeof(double));
    }
  });
}

lb_status lb_analytic_model_rmse(lb_stylized_params params, int complex_model, int true_label,
                                 double* out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = labelbias::analytic_model_rmse(
        to_params(params),
        complex_model ? labelbias::ModelKind::complex : labelbias::ModelKind::simple,
        true_label ? labelbias::LabelKind::truth : labelbias::LabelKind::proxy);
  });
}

lb_status lb_arrest_config_default(lb_arrest_config* out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    labelbias::ArrestSurrogateConfig d;
    *out = lb_arrest_config{d.n,
                            d.p_high_policing,
                            d.log_rate_intercept,
                            d.log_rate_behavior,
                            d.log_rate_policing,
                            d.arrest_intercept,
                            d.arrest_age,
                            d.arrest_priors,
                            d.arrest_policing};
  });
}

lb_status lb_generate_arrest_surrogate(const lb_arrest_config* config, uint64_t seed,
                                       lb_dataset** out) {
  return wrap([&] {
    require(config && out, "null argument");
    labelbias::ArrestSurrogateConfig c;
    c.n = config->n;
    c.p_high_policing = config->p_high_policing;
    c.log_rate_intercept = config->log_rate_intercept;
    c.log_rate_behavior = config->log_rate_behavior;
    c.log_rate_policing = config->log_rate_policing;
    c.arrest_intercept = config->arrest_intercept;
    c.arrest_age = config->arrest_age;
    c.arrest_priors = config->arrest_priors;
    c.arrest_policing = config->arrest_policing;
    *out = new lb_dataset{labelbias::generate_arrest_surrogate(c, seed)};
  });
}

lb_status lb_simulate_true_offense(const lb_dataset* d, double rho, uint64_t seed, double* out) {
  return wrap([&] {
    require(d && out, "null argument");
    std::vector<double> labels = labelbias::simulate_true_offense(d->impl, rho, seed);
    std::memcpy(out, labels.data(), labels.size() * sizeof(double));
  });
}

lb_status lb_rho_sweep_config_default(lb_rho_sweep_config* out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = lb_rho_sweep_config{nullptr, 0, 20, 0, 1};
  });
}

lb_status lb_rho_sweep_run(const lb_rho_sweep_config* config, const lb_dataset* surrogate,
                           lb_sweep** out) {
  return wrap([&] {
    require(config && surrogate && out, "null argument");
    labelbias::RhoSweepConfig c;
    if (config->rho_grid) {
      c.rho_grid.assign(config->rho_grid, config->rho_grid + config->n_rho);
    } else {
      c.rho_grid = labelbias::default_rho_grid();
    }
    c.n_sim = config->n_sim;
    c.seed = config->seed;
    c.jobs = config->jobs;
    *out = new lb_sweep{labelbias::run_rho_sweep(c, surrogate->impl)};
  });
}

size_t lb_sweep_num_cells(const lb_sweep* s) { return s ? s->impl.cells.size() : 0; }

lb_status lb_sweep_to_csv(const lb_sweep* s, char** out_csv) {
  return wrap([&] {
    require(s && out_csv, "null argument");
    *out_csv = copy_string(s->impl.to_csv());
  });
}

lb_status lb_sweep_write_csv(const lb_sweep* s, const char* path) {
  return wrap([&] {
    require(s && path, "null argument");
    s->impl.write_csv(path);
  });
}

void lb_sweep_free(lb_sweep* s) { delete s; }

/* ---------------- Health ---------------- */

lb_status lb_health_load(const char* csv_path, const char* column_map_path, lb_health** out) {
  return wrap([&] {
    require(csv_path && out, "null argument");
    labelbias::ColumnMap map = column_map_path ? labelbias::ColumnMap::load(column_map_path)
                                               : labelbias::ColumnMap::builtin_default();
    *out = new lb_health{labelbias::load_health_dataset(csv_path, map)};
  });
}

const char* lb_health_default_column_map(void) {
  return labelbias::ColumnMap::builtin_default_text();
}

size_t lb_health_num_rows(const lb_health* h) { return h ? h->impl.data.num_rows() : 0; }

int64_t lb_health_dropped_rows(const lb_health* h) { return h ? h->impl.dropped_rows : 0; }

size_t lb_health_block_size(const lb_health* h, const char* block) {
  if (!h || !block) return 0;
  std::string b = block;
  if (b == "demographics") return h->impl.demographics.size();
  if (b == "current_health") return h->impl.current_health.size();
  if (b == "past_cost") return h->impl.past_cost.size();
  return 0;
}

void lb_health_free(lb_health* h) { delete h; }

lb_status lb_enrollment_config_default(lb_enrollment_config* out) {
  return wrap([&] {
    require(out != nullptr, "out is null");
    *out = lb_enrollment_config{nullptr, 0, 1e-6, 3.0, 0};
  });
}

lb_status lb_enrollment_run(const lb_health* h, const lb_enrollment_config* config,
                            lb_curves** out) {
  return wrap([&] {
    require(h && config && out, "null argument");
    labelbias::EnrollmentConfig c;
    if (config->capacity_grid) {
      c.capacity_grid.assign(config->capacity_grid, config->capacity_grid + config->n_capacity);
    }
    c.ridge = config->ridge;
    c.chronic_threshold = config->chronic_threshold;
    c.seed = config->seed;
    *out = new lb_curves{labelbias::run_enrollment(h->impl, c)};
  });
}

lb_status lb_curves_to_csv(const lb_curves* c, char** out_csv) {
  return wrap([&] {
    require(c && out_csv, "null argument");
    *out_csv = copy_string(c->impl.to_csv());
  });
}

lb_status lb_curves_write_csv(const lb_curves* c, const char* path) {
  return wrap([&] {
    require(c && path, "null argument");
    c->impl.write_csv(path);
  });
}

void lb_curves_free(lb_curves* c) { delete c; }

} /* extern "C" */
