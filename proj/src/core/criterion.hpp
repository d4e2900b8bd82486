#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/gaussian.hpp"

namespace labelbias {

// A feature-exclusion question: should the candidate feature Z enter a model
// trained on the proxy label? Exactly one proxy label and one candidate; the
// true label may be omitted only when the user supplies an assumed value for
// Cov(Y, Z | X) (it is never imputed). Either a joint Gaussian law (analytic
// mode) or a dataset (empirical mode) backs the computation.
struct ProxyProblem {
  std::optional<GaussianSystem> system;
  std::optional<Dataset> data;

  std::string true_label;   // Y; may be empty with assumed_cov_y_z_given_x set
  std::string proxy_label;  // Y'
  std::vector<std::string> features;  // X, one or more
  std::string candidate;    // Z

  std::optional<double> assumed_cov_y_z_given_x;
  // Declares Y' = Y + S with S independent of (X, Z); lets a failed
  // exclusion condition resolve to IncludeZ instead of Inconclusive.
  bool additive_noise_declared = false;

  static ProxyProblem analytic(GaussianSystem g, std::string y, std::string yproxy,
                               std::vector<std::string> x, std::string z);
  static ProxyProblem empirical(Dataset d, std::string y, std::string yproxy,
                                std::vector<std::string> x, std::string z);
};

enum class Decision { exclude_z, include_z, inconclusive };
enum class Basis { theorem1, corollary1 };

const char* to_string(Decision d);
const char* to_string(Basis b);

struct CriterionReport {
  double cov_yhat_y_given_x = 0.0;   // Cov(complex score, Y | X)
  double cov_y_z_given_x = 0.0;      // Cov(Y, Z | X)
  double cov_yproxy_z_given_x = 0.0; // Cov(Y', Z | X)
  double strictness_term = 0.0;      // E[Var(complex score | X)]
  double tolerance = 0.0;            // zero-band applied to the deciding quantity
  Decision decision = Decision::inconclusive;
  Basis basis = Basis::theorem1;
  std::string mode;  // "analytic" | "empirical"

  std::string to_json() const;
};

// Exclusion test on Cov(complex score, Y | X): at or below the zero band the
// simple model weakly outperforms the complex one on Y, so the candidate is
// excluded. Above the band the answer is IncludeZ only when additive
// independent label noise is declared (or the proxy IS the true label);
// otherwise no guarantee exists either way and the report says so.
CriterionReport theorem1_condition(const ProxyProblem& p);

// Sign test: strictly opposite signs of Cov(Y, Z | X) and Cov(Y', Z | X)
// force the exclusion condition above, so the candidate is excluded. Either
// magnitude inside the zero band is Inconclusive. Analytic band: 1e-8;
// empirical band: two delta-method standard errors.
CriterionReport corollary_signs(const ProxyProblem& p);

// Trains complex and simple models on Y' = Y + S (S independent noise with
// the given variance), evaluates both on Y over a held-out half. Under pure
// additive noise the complex model is weakly better, up to sampling error.
struct NoiseBenchmark {
  double mse_complex = 0.0;
  double mse_simple = 0.0;
  double noise_variance = 0.0;
  int64_t n = 0;
  uint64_t seed = 0;
};
NoiseBenchmark noise_benchmark(const ProxyProblem& p, double noise_variance, int64_t n,
                               uint64_t seed);

// Residuals of a column after regressing on X (with intercept). Shared by
// the empirical mode and tests.
std::vector<double> residualize(const Dataset& d, const std::string& column,
                                const std::vector<std::string>& on);

}  // namespace labelbias
