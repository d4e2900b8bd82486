#include "core/criterion.hpp"

#include <cmath>

#include "core/common.hpp"
#include "core/estimators.hpp"
#include "core/rng.hpp"
#include "json.hpp"

namespace labelbias {

namespace {
constexpr double kAnalyticTol = 1e-8;
}

ProxyProblem ProxyProblem::analytic(GaussianSystem g, std::string y, std::string yproxy,
                                    std::vector<std::string> x, std::string z) {
  ProxyProblem p;
  p.system = std::move(g);
  p.true_label = std::move(y);
  p.proxy_label = std::move(yproxy);
  p.features = std::move(x);
  p.candidate = std::move(z);
  return p;
}

ProxyProblem ProxyProblem::empirical(Dataset d, std::string y, std::string yproxy,
                                     std::vector<std::string> x, std::string z) {
  ProxyProblem p;
  p.data = std::move(d);
  p.true_label = std::move(y);
  p.proxy_label = std::move(yproxy);
  p.features = std::move(x);
  p.candidate = std::move(z);
  return p;
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::exclude_z: return "ExcludeZ";
    case Decision::include_z: return "IncludeZ";
    case Decision::inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(Basis b) {
  return b == Basis::theorem1 ? "theorem1" : "corollary1";
}

std::string CriterionReport::to_json() const {
  nlohmann::json j;
  j["cov_yhat_y_given_x"] = cov_yhat_y_given_x;
  j["cov_y_z_given_x"] = cov_y_z_given_x;
  j["cov_yproxy_z_given_x"] = cov_yproxy_z_given_x;
  j["strictness_term"] = strictness_term;
  j["decision"] = to_string(decision);
  j["basis"] = to_string(basis);
  j["tolerance"] = tolerance;
  j["mode"] = mode;
  return j.dump();
}

namespace {

struct Quantities {
  double cov_y_z = 0.0;
  double cov_yproxy_z = 0.0;
  double cov_yhat_y = 0.0;
  double strictness = 0.0;
  double tol_y_z = kAnalyticTol;
  double tol_yproxy_z = kAnalyticTol;
  double tol_yhat = kAnalyticTol;
  std::string mode;
};

void check_roles(const ProxyProblem& p) {
  if (p.proxy_label.empty()) fail(ErrorCode::missing_role, "proxy label role is not set");
  if (p.candidate.empty()) fail(ErrorCode::missing_role, "candidate feature role is not set");
  if (p.features.empty()) fail(ErrorCode::missing_role, "at least one retained feature is required");
  if (p.true_label.empty() && !p.assumed_cov_y_z_given_x.has_value()) {
    fail(ErrorCode::missing_role,
         "true label role is not set and no assumed Cov(Y, Z | X) was supplied");
  }
  if (p.system.has_value() == p.data.has_value()) {
    fail(ErrorCode::invalid_argument,
         "problem must carry exactly one of: Gaussian system (analytic), dataset (empirical)");
  }
}

bool proxy_is_true_label(const ProxyProblem& p) {
  return !p.true_label.empty() && p.true_label == p.proxy_label;
}

void require_label(const GaussianSystem& g, const std::string& label, const char* role) {
  for (const auto& l : g.labels()) {
    if (l == label) return;
  }
  fail(ErrorCode::missing_role, std::string(role) + " label '" + label + "' not in the system");
}

Quantities analytic_quantities(const ProxyProblem& p) {
  const GaussianSystem& g = *p.system;
  require_label(g, p.proxy_label, "proxy");
  require_label(g, p.candidate, "candidate");
  for (const auto& f : p.features) require_label(g, f, "feature");
  bool have_y = !p.true_label.empty();
  if (have_y) require_label(g, p.true_label, "true");

  std::vector<std::string> targets;
  if (have_y && !proxy_is_true_label(p)) targets.push_back(p.true_label);
  targets.push_back(p.proxy_label);
  targets.push_back(p.candidate);
  ConditionalLaw law = condition(g, targets, p.features);

  Quantities q;
  q.mode = "analytic";
  q.cov_yproxy_z = law.cond_covariance(p.proxy_label, p.candidate);
  double var_z = law.cond_covariance(p.candidate, p.candidate);
  if (have_y) {
    q.cov_y_z = proxy_is_true_label(p) ? q.cov_yproxy_z
                                       : law.cond_covariance(p.true_label, p.candidate);
  } else {
    q.cov_y_z = *p.assumed_cov_y_z_given_x;
  }
  // Complex score is linear under joint normality: g_z = Cov(Y',Z|X)/Var(Z|X).
  double g_z = var_z > 1e-12 ? q.cov_yproxy_z / var_z : 0.0;
  q.cov_yhat_y = g_z * q.cov_y_z;
  q.strictness = g_z * g_z * var_z;
  return q;
}

double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

// Delta-method standard error of a mean of products.
double se_of_mean_product(const std::vector<double>& a, const std::vector<double>& b) {
  double m = mean_product(a, b);
  double ss = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] * b[i] - m;
    ss += d * d;
  }
  double n = static_cast<double>(a.size());
  return std::sqrt(ss / n) / std::sqrt(n);
}

Quantities empirical_quantities(const ProxyProblem& p) {
  const Dataset& d = *p.data;
  auto require_col = [&](const std::string& name, const char* role) {
    if (!d.has_column(name)) {
      fail(ErrorCode::missing_role, std::string(role) + " column '" + name + "' not in the dataset");
    }
  };
  require_col(p.proxy_label, "proxy");
  require_col(p.candidate, "candidate");
  for (const auto& f : p.features) require_col(f, "feature");
  bool have_y = !p.true_label.empty();
  if (have_y) require_col(p.true_label, "true");

  std::vector<std::string> complex_features = p.features;
  complex_features.push_back(p.candidate);

  try {
    ModelFit complex_fit = fit_linear(d, p.proxy_label, complex_features);
    std::vector<double> yhat = predict(complex_fit, d);

    Dataset with_scores = d;
    with_scores.add_column("__complex_score", yhat);

    std::vector<double> r_yhat = residualize(with_scores, "__complex_score", p.features);
    std::vector<double> r_z = residualize(with_scores, p.candidate, p.features);
    std::vector<double> r_yproxy = residualize(with_scores, p.proxy_label, p.features);

    Quantities q;
    q.mode = "empirical";
    q.cov_yproxy_z = mean_product(r_yproxy, r_z);
    q.tol_yproxy_z = 2.0 * se_of_mean_product(r_yproxy, r_z);
    q.strictness = mean_product(r_yhat, r_yhat);
    if (have_y) {
      std::vector<double> r_y = residualize(with_scores, p.true_label, p.features);
      q.cov_y_z = mean_product(r_y, r_z);
      q.tol_y_z = 2.0 * se_of_mean_product(r_y, r_z);
      q.cov_yhat_y = mean_product(r_yhat, r_y);
      q.tol_yhat = 2.0 * se_of_mean_product(r_yhat, r_y);
    } else {
      q.cov_y_z = *p.assumed_cov_y_z_given_x;
      q.tol_y_z = kAnalyticTol;  // user-asserted value, treated as exact
      double var_z = mean_product(r_z, r_z);
      double g_z = var_z > 1e-12 ? q.cov_yproxy_z / var_z : 0.0;
      q.cov_yhat_y = g_z * q.cov_y_z;
      q.tol_yhat = std::abs(g_z) * q.tol_y_z + kAnalyticTol;
    }
    return q;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::degenerate_design) {
      fail(ErrorCode::degenerate_design,
           std::string("residualization design is singular: ") + e.what());
    }
    throw;
  }
}

Quantities compute_quantities(const ProxyProblem& p) {
  check_roles(p);
  return p.system.has_value() ? analytic_quantities(p) : empirical_quantities(p);
}

int sign_outside_band(double value, double band) {
  if (value > band) return 1;
  if (value < -band) return -1;
  return 0;
}

}  // namespace

std::vector<double> residualize(const Dataset& d, const std::string& column,
                                const std::vector<std::string>& on) {
  ModelFit fit = fit_linear(d, column, on);
  std::vector<double> pred = predict(fit, d);
  const std::vector<double>& v = d.column(column);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] - pred[i];
  return out;
}

CriterionReport theorem1_condition(const ProxyProblem& p) {
  Quantities q = compute_quantities(p);
  CriterionReport r;
  r.basis = Basis::theorem1;
  r.mode = q.mode;
  r.cov_yhat_y_given_x = q.cov_yhat_y;
  r.cov_y_z_given_x = q.cov_y_z;
  r.cov_yproxy_z_given_x = q.cov_yproxy_z;
  r.strictness_term = q.strictness;
  r.tolerance = q.tol_yhat;
  if (q.cov_yhat_y <= q.tol_yhat) {
    r.decision = Decision::exclude_z;
  } else if (p.additive_noise_declared || proxy_is_true_label(p)) {
    r.decision = Decision::include_z;
  } else {
    r.decision = Decision::inconclusive;
  }
  return r;
}

CriterionReport corollary_signs(const ProxyProblem& p) {
  Quantities q = compute_quantities(p);
  CriterionReport r;
  r.basis = Basis::corollary1;
  r.mode = q.mode;
  r.cov_yhat_y_given_x = q.cov_yhat_y;
  r.cov_y_z_given_x = q.cov_y_z;
  r.cov_yproxy_z_given_x = q.cov_yproxy_z;
  r.strictness_term = q.strictness;
  r.tolerance = std::max(q.tol_y_z, q.tol_yproxy_z);

  int sy = sign_outside_band(q.cov_y_z, q.tol_y_z);
  int sp = sign_outside_band(q.cov_yproxy_z, q.tol_yproxy_z);
  if (sy == 0 || sp == 0) {
    r.decision = Decision::inconclusive;
  } else if (sy == -sp) {
    r.decision = Decision::exclude_z;
  } else if (p.additive_noise_declared || proxy_is_true_label(p)) {
    r.decision = Decision::include_z;
  } else {
    r.decision = Decision::inconclusive;
  }
  return r;
}

NoiseBenchmark noise_benchmark(const ProxyProblem& p, double noise_variance, int64_t n,
                               uint64_t seed) {
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    fail(ErrorCode::invalid_variance, "noise variance must be finite and >= 0");
  }
  check_roles(p);
  if (!p.system.has_value()) {
    fail(ErrorCode::invalid_argument, "noise benchmark runs on an analytic (Gaussian) problem");
  }
  if (p.true_label.empty()) {
    fail(ErrorCode::missing_role, "noise benchmark needs the true label observed");
  }
  if (n < 4) fail(ErrorCode::invalid_argument, "need n >= 4 for a train/test split");

  require_label(*p.system, p.true_label, "true");
  require_label(*p.system, p.candidate, "candidate");
  for (const auto& f : p.features) require_label(*p.system, f, "feature");

  Dataset ds = sample(*p.system, n, derive_seed(seed, {40, 0}));
  Rng noise(derive_seed(seed, {40, 1}));
  std::vector<double> proxy = ds.column(p.true_label);
  double sd = std::sqrt(noise_variance);
  for (double& v : proxy) v += sd * noise.normal();
  ds.add_column("__noisy_proxy", proxy);

  size_t n_train = ds.num_rows() / 2;
  Dataset train = ds.head(n_train);
  Dataset test = ds.tail_from(n_train);

  std::vector<std::string> complex_features = p.features;
  complex_features.push_back(p.candidate);
  ModelFit complex_fit = fit_linear(train, "__noisy_proxy", complex_features);
  ModelFit simple_fit = fit_linear(train, "__noisy_proxy", p.features);

  const std::vector<double>& y_true = test.column(p.true_label);
  std::vector<double> sc = predict(complex_fit, test);
  std::vector<double> ss = predict(simple_fit, test);

  auto mse = [&](const std::vector<double>& s) {
    double acc = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
      double e = s[i] - y_true[i];
      acc += e * e;
    }
    return acc / static_cast<double>(s.size());
  };

  NoiseBenchmark out;
  out.mse_complex = mse(sc);
  out.mse_simple = mse(ss);
  out.noise_variance = noise_variance;
  out.n = n;
  out.seed = seed;
  return out;
}

}  // namespace labelbias
