#include "core/experiments.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "core/common.hpp"
#include "core/estimators.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace labelbias {

const SweepCell& SweepResult::cell(double value, const std::string& model,
                                   const std::string& label, const std::string& metric) const {
  for (const auto& c : cells) {
    if (c.value == value && c.model == model && c.label == label && c.metric == metric) return c;
  }
  fail(ErrorCode::invalid_argument, "no sweep cell for value=" + format_double(value) + " model=" +
                                        model + " label=" + label + " metric=" + metric);
}

std::string SweepResult::to_csv() const {
  std::string out = "param,value,model,label,metric,metric_value,stderr,n_train,n_test,seed\n";
  for (const auto& c : cells) {
    out += param;
    out += ',';
    out += format_double(c.value);
    out += ',';
    out += c.model;
    out += ',';
    out += c.label;
    out += ',';
    out += c.metric;
    out += ',';
    out += format_double(c.metric_value);
    out += ',';
    out += format_double(c.stderr_value);
    out += ',';
    out += std::to_string(c.n_train);
    out += ',';
    out += std::to_string(c.n_test);
    out += ',';
    out += std::to_string(c.seed);
    out += '\n';
  }
  return out;
}

void SweepResult::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open for writing: " + path);
  f << to_csv();
  if (!f) fail(ErrorCode::io_error, "write failed: " + path);
}

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs < 1) fail(ErrorCode::invalid_argument, "jobs must be >= 1");
  size_t workers = std::min<size_t>(static_cast<size_t>(jobs), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

PopulationFit population_linear(const GaussianSystem& g, const std::vector<std::string>& features,
                                const std::string& train_label, const std::string& eval_label) {
  ConditionalLaw law = condition(g, {train_label}, features);
  auto p = static_cast<Eigen::Index>(features.size());

  PopulationFit fit;
  fit.coef = law.coefficients.row(0).transpose();
  fit.intercept = law.intercept(0);

  Eigen::MatrixXd s_ff = g.submatrix(features, features);
  Eigen::VectorXd mu_f(p);
  for (Eigen::Index i = 0; i < p; ++i) mu_f(i) = g.mean(features[static_cast<size_t>(i)]);
  Eigen::VectorXd s_fl(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    s_fl(i) = g.covariance(features[static_cast<size_t>(i)], eval_label);
  }
  double mu_l = g.mean(eval_label);
  double e_l2 = g.variance(eval_label) + mu_l * mu_l;

  double mean_score = fit.intercept + fit.coef.dot(mu_f);
  fit.e_score_sq = mean_score * mean_score + fit.coef.dot(s_ff * fit.coef);
  fit.e_score_label = mean_score * mu_l + fit.coef.dot(s_fl);
  fit.mse = fit.e_score_sq - 2.0 * fit.e_score_label + e_l2;
  return fit;
}

double analytic_model_rmse(const StylizedParams& params, ModelKind model, LabelKind label) {
  GaussianSystem g = implied_covariance(build_stylized(params));
  std::vector<std::string> features =
      model == ModelKind::complex ? std::vector<std::string>{"A0", "Z"} : std::vector<std::string>{"A0"};
  std::string eval_label = label == LabelKind::proxy ? "A1" : "B1";
  return std::sqrt(std::max(0.0, population_linear(g, features, "A1", eval_label).mse));
}

namespace {

// keeps accumulated multiples of decimal steps printing as the decimals
// they mean (12 * 0.05 is 0.6, not 0.6000000000000001)
double snap_to_decimal(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

std::vector<double> default_beta_grid(double alpha, double gamma, double delta, double step,
                                      double beta_max) {
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double beta = snap_to_decimal(static_cast<double>(i) * step);
    if (beta > beta_max + 1e-12) break;
    StylizedParams p{alpha, beta, gamma, delta};
    if (!p.is_valid()) break;
    grid.push_back(beta);
  }
  return grid;
}

namespace {

struct MseWithSe {
  double mse = 0.0;
  double se = 0.0;
};

MseWithSe mse_with_se(const std::vector<double>& scores, const std::vector<double>& truth) {
  double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    double e = scores[i] - truth[i];
    mean += e * e;
  }
  mean /= n;
  double ss = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    double e = scores[i] - truth[i];
    double d = e * e - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / n) / std::sqrt(n)};
}

SweepCell rmse_cell(double value, const std::string& model, const std::string& label,
                    const std::vector<double>& scores, const std::vector<double>& truth,
                    int64_t n_train, uint64_t seed) {
  MseWithSe m = mse_with_se(scores, truth);
  double r = std::sqrt(m.mse);
  // delta method: se(rmse) = se(mse) / (2 rmse)
  double se = r > 0.0 ? m.se / (2.0 * r) : 0.0;
  return {value, model, label, "rmse", r, se, n_train, static_cast<int64_t>(scores.size()), seed};
}

}  // namespace

SweepResult run_beta_sweep(const BetaSweepConfig& config) {
  if (config.beta_grid.empty()) fail(ErrorCode::invalid_argument, "beta grid is empty");
  for (size_t i = 1; i < config.beta_grid.size(); ++i) {
    if (!(config.beta_grid[i] > config.beta_grid[i - 1])) {
      fail(ErrorCode::invalid_argument, "beta grid must be strictly increasing");
    }
  }
  if (config.n_train < 2 || config.n_test < 1) {
    fail(ErrorCode::invalid_argument, "need n_train >= 2 and n_test >= 1");
  }
  // validate every grid point before spending any sampling time
  for (double beta : config.beta_grid) {
    StylizedParams{config.alpha, beta, config.gamma, config.delta}.validate();
  }

  SweepResult result;
  result.param = "beta";
  result.grid = config.beta_grid;
  std::vector<std::vector<SweepCell>> per_point(config.beta_grid.size());

  parallel_for(config.beta_grid.size(), config.jobs, [&](size_t i) {
    double beta = config.beta_grid[i];
    StylizedParams params{config.alpha, beta, config.gamma, config.delta};
    uint64_t point_seed = derive_seed(config.seed, {10, i});
    Dataset ds = sample(build_stylized(params), config.n_train + config.n_test, point_seed);
    Dataset train = ds.head(static_cast<size_t>(config.n_train));
    Dataset test = ds.tail_from(static_cast<size_t>(config.n_train));

    ModelFit complex_fit = fit_linear(train, "A1", {"A0", "Z"});
    ModelFit simple_fit = fit_linear(train, "A1", {"A0"});
    std::vector<double> sc = predict(complex_fit, test);
    std::vector<double> ss = predict(simple_fit, test);

    std::vector<SweepCell>& cells = per_point[i];
    for (const char* label : {"proxy", "true"}) {
      const std::vector<double>& truth = test.column(label == std::string("proxy") ? "A1" : "B1");
      LabelKind kind = label == std::string("proxy") ? LabelKind::proxy : LabelKind::truth;
      cells.push_back(rmse_cell(beta, "simple", label, ss, truth, config.n_train, point_seed));
      cells.push_back({beta, "simple", label, "rmse_analytic",
                       analytic_model_rmse(params, ModelKind::simple, kind), 0.0, config.n_train,
                       config.n_test, point_seed});
      cells.push_back(rmse_cell(beta, "complex", label, sc, truth, config.n_train, point_seed));
      cells.push_back({beta, "complex", label, "rmse_analytic",
                       analytic_model_rmse(params, ModelKind::complex, kind), 0.0, config.n_train,
                       config.n_test, point_seed});
    }
  });

  for (auto& cells : per_point) {
    for (auto& c : cells) result.cells.push_back(std::move(c));
  }
  return result;
}

void ArrestSurrogateConfig::validate() const {
  if (n < 1) fail(ErrorCode::invalid_config, "surrogate size must be >= 1");
  if (!(p_high_policing >= 0.0 && p_high_policing <= 1.0)) {
    fail(ErrorCode::invalid_config, "high-policing probability must lie in [0, 1]");
  }
  for (double v : {log_rate_intercept, log_rate_behavior, log_rate_policing, arrest_intercept,
                   arrest_age, arrest_priors, arrest_policing}) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid_config, "surrogate coefficients must be finite");
  }
  // keep the Poisson rate bounded for any plausible behavior draw
  double max_log_rate = log_rate_intercept + std::abs(log_rate_behavior) * 8.0 +
                        std::max(0.0, log_rate_policing);
  if (max_log_rate > 20.0) {
    fail(ErrorCode::invalid_config, "prior-arrest log rate can exceed 20; rates that large are not supported");
  }
}

Dataset generate_arrest_surrogate(const ArrestSurrogateConfig& config, uint64_t seed) {
  config.validate();
  Dataset d({"age", "high_policing", "past_behavior", "prior_arrests", "future_arrest"});
  Rng rng(seed);
  std::vector<double> row(5);
  for (int64_t i = 0; i < config.n; ++i) {
    double age = static_cast<double>(rng.uniform_int(18, 70));
    double z = rng.bernoulli(config.p_high_policing) ? 1.0 : 0.0;
    double behavior = rng.normal();
    double rate = std::exp(config.log_rate_intercept + config.log_rate_behavior * behavior +
                           config.log_rate_policing * z);
    double priors = static_cast<double>(rng.poisson(rate));
    double p_arrest = inverse_logit(config.arrest_intercept + config.arrest_age * age +
                                    config.arrest_priors * priors + config.arrest_policing * z);
    double arrest = rng.bernoulli(p_arrest) ? 1.0 : 0.0;
    row = {age, z, behavior, priors, arrest};
    d.append_row(row);
  }
  d.set_role("future_arrest", "proxy_label");
  d.set_role("past_behavior", "latent");
  d.set_role("high_policing", "candidate");
  return d;
}

std::vector<double> simulate_true_offense(const Dataset& d, double rho, uint64_t seed) {
  for (const char* col : {"age", "prior_arrests", "high_policing"}) {
    if (!d.has_column(col)) {
      fail(ErrorCode::missing_feature, std::string("surrogate column missing: ") + col);
    }
  }
  if (!std::isfinite(rho)) fail(ErrorCode::invalid_argument, "rho must be finite");
  const std::vector<double>& age = d.column("age");
  const std::vector<double>& priors = d.column("prior_arrests");
  const std::vector<double>& z = d.column("high_policing");

  Rng rng(seed);
  std::vector<double> out(d.num_rows());
  for (size_t i = 0; i < out.size(); ++i) {
    double p = inverse_logit(-1.0 - age[i] / 100.0 + priors[i] / 2.0 + rho * z[i]);
    out[i] = rng.bernoulli(p) ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> default_rho_grid() {
  std::vector<double> grid;
  for (int i = -5; i <= 5; ++i) grid.push_back(snap_to_decimal(static_cast<double>(i) * 0.2));
  return grid;
}

SweepResult run_rho_sweep(const RhoSweepConfig& config, const Dataset& surrogate) {
  if (config.rho_grid.empty()) fail(ErrorCode::invalid_argument, "rho grid is empty");
  for (size_t i = 1; i < config.rho_grid.size(); ++i) {
    if (!(config.rho_grid[i] > config.rho_grid[i - 1])) {
      fail(ErrorCode::invalid_argument, "rho grid must be strictly increasing");
    }
  }
  if (config.n_sim < 1) fail(ErrorCode::invalid_argument, "n_sim must be >= 1");
  for (const char* col : {"age", "prior_arrests", "high_policing", "future_arrest"}) {
    if (!surrogate.has_column(col)) {
      fail(ErrorCode::missing_feature, std::string("surrogate column missing: ") + col);
    }
  }
  if (surrogate.num_rows() < 8) fail(ErrorCode::invalid_argument, "surrogate too small to split");

  // seeded 50/50 split
  std::vector<size_t> order(surrogate.num_rows());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(derive_seed(config.seed, {20, 0}));
  split_rng.shuffle(order);
  size_t n_train = order.size() / 2;
  Dataset train = surrogate.select_rows({order.begin(), order.begin() + static_cast<long>(n_train)});
  Dataset test = surrogate.select_rows({order.begin() + static_cast<long>(n_train), order.end()});

  ModelFit complex_fit = fit_logistic(train, "future_arrest", {"age", "prior_arrests", "high_policing"});
  ModelFit simple_fit = fit_logistic(train, "future_arrest", {"age", "prior_arrests"});
  std::vector<double> sc = predict(complex_fit, test);
  std::vector<double> ss = predict(simple_fit, test);

  SweepResult result;
  result.param = "rho";
  result.grid = config.rho_grid;
  std::vector<std::vector<SweepCell>> per_point(config.rho_grid.size());

  parallel_for(config.rho_grid.size(), config.jobs, [&](size_t i) {
    double rho = config.rho_grid[i];
    uint64_t point_seed = derive_seed(config.seed, {21, i});
    std::vector<double> auc_c(static_cast<size_t>(config.n_sim));
    std::vector<double> auc_s(static_cast<size_t>(config.n_sim));
    for (int s = 0; s < config.n_sim; ++s) {
      std::vector<double> truth =
          simulate_true_offense(test, rho, derive_seed(point_seed, {static_cast<uint64_t>(s)}));
      auc_c[static_cast<size_t>(s)] = auc(sc, truth);
      auc_s[static_cast<size_t>(s)] = auc(ss, truth);
    }
    auto mean_se = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      double ss_ = 0.0;
      for (double x : v) ss_ += (x - m) * (x - m);
      double se = v.size() > 1 ? std::sqrt(ss_ / static_cast<double>(v.size() - 1)) /
                                     std::sqrt(static_cast<double>(v.size()))
                               : 0.0;
      return std::pair<double, double>(m, se);
    };
    auto [mc, sec] = mean_se(auc_c);
    auto [ms, ses] = mean_se(auc_s);
    per_point[i].push_back({rho, "simple", "true", "auc", ms, ses,
                            static_cast<int64_t>(n_train), static_cast<int64_t>(test.num_rows()),
                            point_seed});
    per_point[i].push_back({rho, "complex", "true", "auc", mc, sec,
                            static_cast<int64_t>(n_train), static_cast<int64_t>(test.num_rows()),
                            point_seed});
  });

  for (auto& cells : per_point) {
    for (auto& c : cells) result.cells.push_back(std::move(c));
  }
  return result;
}

double auc_gap_crossover(const SweepResult& rho_sweep) {
  if (rho_sweep.param != "rho") {
    fail(ErrorCode::invalid_argument, "crossover is defined for rho sweeps");
  }
  std::vector<double> gap;
  gap.reserve(rho_sweep.grid.size());
  for (double rho : rho_sweep.grid) {
    gap.push_back(rho_sweep.cell(rho, "complex", "true", "auc").metric_value -
                  rho_sweep.cell(rho, "simple", "true", "auc").metric_value);
  }
  for (size_t i = 0; i + 1 < gap.size(); ++i) {
    if (gap[i] == 0.0) return rho_sweep.grid[i];
    if ((gap[i] < 0.0) != (gap[i + 1] < 0.0)) {
      double lo = rho_sweep.grid[i], hi = rho_sweep.grid[i + 1];
      return lo + (hi - lo) * (-gap[i]) / (gap[i + 1] - gap[i]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace labelbias
