#pragma once

#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace labelbias {

// Fitted linear or logistic predictor. For a fit of a proxy label on
// features (X, Z), the coefficient on Z is the g(X) term of the linear
// decomposition f(X) + g(X)*Z (constant g in the linear case).
struct ModelFit {
  enum class Family { linear, logistic };

  Family family = Family::linear;
  double intercept = 0.0;
  std::vector<std::string> feature_names;
  std::vector<double> coefficients;
  bool has_intercept = true;
  int iterations = 0;
  bool converged = true;

  double coefficient(const std::string& name) const;
  std::string to_json() const;
};

// Least squares, optionally ridge-penalized (intercept never penalized),
// through a rank-revealing QR. Unpenalized rank-deficient designs raise
// degenerate_design.
ModelFit fit_linear(const Dataset& d, const std::string& target,
                    const std::vector<std::string>& features, double ridge = 0.0,
                    bool intercept = true);

// Logistic maximum likelihood via iteratively reweighted least squares.
// Convergence: mean-log-likelihood gradient norm <= 1e-8, at most 100
// iterations (converged flag records which). Coefficient norm above 1e3
// raises separation_detected; a single-class target raises degenerate_target.
ModelFit fit_logistic(const Dataset& d, const std::string& target,
                      const std::vector<std::string>& features);

// Linear: affine score. Logistic: probability through the inverse logit.
std::vector<double> predict(const ModelFit& fit, const Dataset& d);

double rmse(const std::vector<double>& scores, const std::vector<double>& truth);

// Mann-Whitney AUC with half credit for ties, computed by sort-and-midrank
// in O(n log n). Requires both classes present.
double auc(const std::vector<double>& scores, const std::vector<double>& labels);

double inverse_logit(double x);

}  // namespace labelbias
