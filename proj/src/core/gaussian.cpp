#include "core/gaussian.hpp"

#include <cmath>

#include "core/common.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace labelbias {

GaussianSystem::GaussianSystem(std::vector<std::string> labels, Eigen::VectorXd mean,
                               Eigen::MatrixXd cov)
    : labels_(std::move(labels)), mean_(std::move(mean)), cov_(std::move(cov)) {
  auto n = static_cast<Eigen::Index>(labels_.size());
  if (n == 0) fail(ErrorCode::invalid_argument, "Gaussian system needs at least one label");
  if (mean_.size() != n || cov_.rows() != n || cov_.cols() != n) {
    fail(ErrorCode::invalid_argument, "mean/covariance dimensions do not match labels");
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    for (size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) {
        fail(ErrorCode::invalid_argument, "duplicate label: " + labels_[i]);
      }
    }
  }
  double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    fail(ErrorCode::invalid_argument,
         "covariance matrix is not symmetric (max asymmetry " + format_double(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    fail(ErrorCode::invalid_argument,
         "covariance matrix is not positive semidefinite (min eigenvalue " +
             format_double(es.eigenvalues().minCoeff()) + ")");
  }
}

int GaussianSystem::index(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  fail(ErrorCode::invalid_argument, "unknown label: " + label);
}

double GaussianSystem::mean(const std::string& label) const { return mean_(index(label)); }

double GaussianSystem::covariance(const std::string& a, const std::string& b) const {
  return cov_(index(a), index(b));
}

Eigen::MatrixXd GaussianSystem::submatrix(const std::vector<std::string>& rows,
                                          const std::vector<std::string>& cols) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cov_(index(rows[r]), index(cols[c]));
    }
  }
  return out;
}

double ConditionalLaw::coefficient(const std::string& target, const std::string& given_label) const {
  for (size_t r = 0; r < targets.size(); ++r) {
    if (targets[r] != target) continue;
    for (size_t c = 0; c < given.size(); ++c) {
      if (given[c] == given_label) {
        return coefficients(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  fail(ErrorCode::invalid_argument, "no coefficient for " + target + " on " + given_label);
}

double ConditionalLaw::cond_covariance(const std::string& a, const std::string& b) const {
  int ia = -1, ib = -1;
  for (size_t r = 0; r < targets.size(); ++r) {
    if (targets[r] == a) ia = static_cast<int>(r);
    if (targets[r] == b) ib = static_cast<int>(r);
  }
  if (ia < 0 || ib < 0) fail(ErrorCode::invalid_argument, "label not in conditional targets");
  return cond_cov(ia, ib);
}

ConditionalLaw condition(const GaussianSystem& g, const std::vector<std::string>& targets,
                         const std::vector<std::string>& given) {
  if (targets.empty()) fail(ErrorCode::invalid_argument, "conditioning needs at least one target");
  for (const auto& t : targets) {
    for (const auto& c : given) {
      if (t == c) {
        fail(ErrorCode::invalid_argument, "label in both targets and given: " + t);
      }
    }
  }

  ConditionalLaw law;
  law.targets = targets;
  law.given = given;

  auto nt = static_cast<Eigen::Index>(targets.size());
  Eigen::VectorXd mu1(nt);
  for (size_t i = 0; i < targets.size(); ++i) mu1(static_cast<Eigen::Index>(i)) = g.mean(targets[i]);
  Eigen::MatrixXd s11 = g.submatrix(targets, targets);

  if (given.empty()) {
    law.intercept = mu1;
    law.coefficients = Eigen::MatrixXd::Zero(nt, 0);
    law.cond_cov = s11;
    return law;
  }

  auto ng = static_cast<Eigen::Index>(given.size());
  Eigen::VectorXd mu2(ng);
  for (size_t i = 0; i < given.size(); ++i) mu2(static_cast<Eigen::Index>(i)) = g.mean(given[i]);
  Eigen::MatrixXd s12 = g.submatrix(targets, given);
  Eigen::MatrixXd s22 = g.submatrix(given, given);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(s22);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() < 1e-10) {
    fail(ErrorCode::singular_conditioning_set,
         "conditioning block is singular (smallest pivot " +
             format_double(ldlt.info() == Eigen::Success ? ldlt.vectorD().minCoeff() : 0.0) + ")");
  }

  // coefficients = S12 * S22^-1, via S22 * K^T = S21
  Eigen::MatrixXd kt = ldlt.solve(s12.transpose());
  law.coefficients = kt.transpose();
  law.intercept = mu1 - law.coefficients * mu2;
  Eigen::MatrixXd cc = s11 - law.coefficients * s12.transpose();
  law.cond_cov = ((cc + cc.transpose()) * 0.5).eval();

  // sanity on the Schur complement: PSD, and no conditional variance may
  // exceed its marginal
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(law.cond_cov, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    fail(ErrorCode::internal, "conditional covariance not PSD");
  }
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (law.cond_cov(i, i) > s11(i, i) + 1e-12) {
      fail(ErrorCode::internal, "conditional variance exceeds marginal variance");
    }
  }
  return law;
}

StylizedConditionalCovs stylized_conditional_covs(const StylizedParams& p) {
  p.validate();
  double a = p.alpha, b = p.beta, g = p.gamma, d = p.delta;
  double s_a0z = a + b * g;
  double s_a1z = a + b * g;
  double s_b1z = b;
  double s_a1a0 = a * a + 2.0 * a * b * g + b * b * g * g + g * g * d;
  double s_b1a0 = a * b + b * b * g + g * d;
  return {s_a1z - s_a1a0 * s_a0z, s_b1z - s_b1a0 * s_a0z};
}

Dataset sample(const GaussianSystem& g, int64_t n, uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_argument, "sample size must be >= 1");
  auto k = static_cast<Eigen::Index>(g.dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.covariance_matrix());
  Eigen::MatrixXd transform = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  Dataset out(g.labels());
  Rng rng(seed);
  Eigen::VectorXd z(k);
  std::vector<double> row(g.dim());
  for (int64_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) z(j) = rng.normal();
    Eigen::VectorXd x = g.mean_vector() + transform * z;
    for (Eigen::Index j = 0; j < k; ++j) row[static_cast<size_t>(j)] = x(j);
    out.append_row(row);
  }
  return out;
}

}  // namespace labelbias
