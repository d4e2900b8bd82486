#include "core/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/common.hpp"
#include "core/text.hpp"
#include "json.hpp"

namespace labelbias {

double inverse_logit(double x) {
  // stable both directions
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

double ModelFit::coefficient(const std::string& name) const {
  for (size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return coefficients[i];
  }
  fail(ErrorCode::missing_feature, "model has no coefficient for: " + name);
}

std::string ModelFit::to_json() const {
  nlohmann::json j;
  j["family"] = family == Family::linear ? "linear" : "logistic";
  j["intercept"] = intercept;
  nlohmann::json coefs = nlohmann::json::object();
  for (size_t i = 0; i < feature_names.size(); ++i) coefs[feature_names[i]] = coefficients[i];
  j["coefficients"] = coefs;
  j["diagnostics"] = {{"iterations", iterations}, {"converged", converged}};
  return j.dump();
}

namespace {

Eigen::MatrixXd build_design(const Dataset& d, const std::vector<std::string>& features,
                             bool intercept) {
  auto n = static_cast<Eigen::Index>(d.num_rows());
  auto p = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd x(n, p + (intercept ? 1 : 0));
  Eigen::Index col = 0;
  if (intercept) x.col(col++).setOnes();
  for (const auto& f : features) {
    const std::vector<double>& v = d.column(f);  // throws missing_feature
    for (Eigen::Index r = 0; r < n; ++r) x(r, col) = v[static_cast<size_t>(r)];
    ++col;
  }
  return x;
}

void check_fit_preconditions(const Dataset& d, const std::vector<std::string>& features) {
  if (d.num_rows() < 2) {
    fail(ErrorCode::invalid_argument, "need at least 2 rows to fit a model");
  }
  if (d.num_rows() <= features.size()) {
    fail(ErrorCode::degenerate_design, "need more rows than features");
  }
  for (size_t i = 0; i < features.size(); ++i) {
    for (size_t j = i + 1; j < features.size(); ++j) {
      if (features[i] == features[j]) {
        fail(ErrorCode::degenerate_design, "feature listed twice: " + features[i]);
      }
    }
  }
}

}  // namespace

ModelFit fit_linear(const Dataset& d, const std::string& target,
                    const std::vector<std::string>& features, double ridge, bool intercept) {
  check_fit_preconditions(d, features);
  if (ridge < 0.0) fail(ErrorCode::invalid_argument, "ridge penalty must be >= 0");

  auto n = static_cast<Eigen::Index>(d.num_rows());
  auto p = static_cast<Eigen::Index>(features.size());
  Eigen::Index cols = p + (intercept ? 1 : 0);
  const std::vector<double>& yv = d.column(target);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), n);

  Eigen::MatrixXd x = build_design(d, features, intercept);
  Eigen::VectorXd beta;
  if (ridge > 0.0) {
    // augmented rows sqrt(ridge) * I on the feature block only
    Eigen::MatrixXd xa = Eigen::MatrixXd::Zero(n + p, cols);
    xa.topRows(n) = x;
    double s = std::sqrt(ridge);
    for (Eigen::Index i = 0; i < p; ++i) xa(n + i, (intercept ? 1 : 0) + i) = s;
    Eigen::VectorXd ya = Eigen::VectorXd::Zero(n + p);
    ya.head(n) = y;
    beta = xa.colPivHouseholderQr().solve(ya);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols) {
      fail(ErrorCode::degenerate_design,
           "design matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
               std::to_string(cols) + "); add a ridge penalty or drop collinear features");
    }
    beta = qr.solve(y);
  }

  ModelFit fit;
  fit.family = ModelFit::Family::linear;
  fit.feature_names = features;
  fit.has_intercept = intercept;
  fit.intercept = intercept ? beta(0) : 0.0;
  fit.coefficients.resize(features.size());
  for (Eigen::Index i = 0; i < p; ++i) {
    fit.coefficients[static_cast<size_t>(i)] = beta((intercept ? 1 : 0) + i);
  }
  fit.iterations = 1;
  fit.converged = true;
  return fit;
}

ModelFit fit_logistic(const Dataset& d, const std::string& target,
                      const std::vector<std::string>& features) {
  check_fit_preconditions(d, features);
  auto n = static_cast<Eigen::Index>(d.num_rows());
  const std::vector<double>& yv = d.column(target);
  bool any0 = false, any1 = false;
  for (double v : yv) {
    if (v == 0.0) {
      any0 = true;
    } else if (v == 1.0) {
      any1 = true;
    } else {
      fail(ErrorCode::invalid_argument, "logistic target must be 0/1; saw " + format_double(v));
    }
  }
  if (!any0 || !any1) {
    fail(ErrorCode::degenerate_target, "logistic target has a single class");
  }

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), n);
  Eigen::MatrixXd x = build_design(d, features, true);
  auto cols = x.cols();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
  constexpr double kGradTol = 1e-8;
  constexpr int kMaxIter = 100;
  constexpr double kDivergenceNorm = 1e3;
  int iter = 0;
  bool converged = false;
  for (; iter < kMaxIter; ++iter) {
    Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = inverse_logit(eta(i));
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-10);
    }
    Eigen::VectorXd grad = x.transpose() * (y - mu) / static_cast<double>(n);
    if (grad.norm() <= kGradTol) {
      converged = true;
      break;
    }
    Eigen::MatrixXd h = x.transpose() * w.asDiagonal() * x / static_cast<double>(n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success) {
      fail(ErrorCode::degenerate_design, "weighted normal equations are singular");
    }
    beta += ldlt.solve(grad);
    if (beta.norm() > kDivergenceNorm) {
      fail(ErrorCode::separation_detected,
           "coefficients diverging (norm " + format_double(beta.norm()) +
               "); classes are likely linearly separable");
    }
  }

  ModelFit fit;
  fit.family = ModelFit::Family::logistic;
  fit.feature_names = features;
  fit.has_intercept = true;
  fit.intercept = beta(0);
  fit.coefficients.resize(features.size());
  for (size_t i = 0; i < features.size(); ++i) fit.coefficients[i] = beta(static_cast<Eigen::Index>(i) + 1);
  fit.iterations = converged ? iter + 1 : iter;
  fit.converged = converged;
  return fit;
}

std::vector<double> predict(const ModelFit& fit, const Dataset& d) {
  size_t n = d.num_rows();
  std::vector<const std::vector<double>*> cols;
  cols.reserve(fit.feature_names.size());
  for (const auto& f : fit.feature_names) cols.push_back(&d.column(f));

  std::vector<double> out(n);
  for (size_t r = 0; r < n; ++r) {
    double eta = fit.intercept;
    for (size_t c = 0; c < cols.size(); ++c) eta += fit.coefficients[c] * (*cols[c])[r];
    out[r] = fit.family == ModelFit::Family::logistic ? inverse_logit(eta) : eta;
  }
  return out;
}

double rmse(const std::vector<double>& scores, const std::vector<double>& truth) {
  if (scores.size() != truth.size()) {
    fail(ErrorCode::length_mismatch, "scores and truth differ in length");
  }
  if (scores.empty()) fail(ErrorCode::invalid_argument, "rmse of empty input");
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    double e = scores[i] - truth[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(scores.size()));
}

double auc(const std::vector<double>& scores, const std::vector<double>& labels) {
  if (scores.size() != labels.size()) {
    fail(ErrorCode::length_mismatch, "scores and labels differ in length");
  }
  size_t n = scores.size();
  size_t n_pos = 0;
  for (double v : labels) {
    if (v == 1.0) {
      ++n_pos;
    } else if (v != 0.0) {
      fail(ErrorCode::invalid_argument, "labels must be 0/1; saw " + format_double(v));
    }
  }
  size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    fail(ErrorCode::auc_undefined, "AUC needs both classes present");
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // midranks over tie runs; rank sums of half-integers stay exact in doubles
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1.0) rank_sum_pos += midrank;
    }
    i = j + 1;
  }
  double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace labelbias
