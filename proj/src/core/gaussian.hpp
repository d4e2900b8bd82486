#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/sem.hpp"

namespace labelbias {

// Labeled multivariate normal: mean vector and covariance matrix addressed
// by variable name. Construction checks symmetry (1e-12) and positive
// semidefiniteness (smallest eigenvalue >= -1e-9).
class GaussianSystem {
 public:
  GaussianSystem(std::vector<std::string> labels, Eigen::VectorXd mean,
                 Eigen::MatrixXd cov);

  size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index(const std::string& label) const;  // throws when unknown

  double mean(const std::string& label) const;
  double covariance(const std::string& a, const std::string& b) const;
  double variance(const std::string& label) const { return covariance(label, label); }

  const Eigen::VectorXd& mean_vector() const { return mean_; }
  const Eigen::MatrixXd& covariance_matrix() const { return cov_; }

  Eigen::MatrixXd submatrix(const std::vector<std::string>& rows,
                            const std::vector<std::string>& cols) const;

 private:
  std::vector<std::string> labels_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

// Law of `targets` given `given`: targets | given ~ N(intercept + C * given,
// cond_cov). `coefficients` is targets x given.
struct ConditionalLaw {
  std::vector<std::string> targets;
  std::vector<std::string> given;
  Eigen::VectorXd intercept;
  Eigen::MatrixXd coefficients;
  Eigen::MatrixXd cond_cov;

  double coefficient(const std::string& target, const std::string& given_label) const;
  double cond_covariance(const std::string& a, const std::string& b) const;
};

// Gaussian conditioning via the Schur complement. The block over `given` is
// inverted through a symmetric factorization; a pivot below 1e-10 raises
// singular_conditioning_set. Empty `given` returns the marginal law.
ConditionalLaw condition(const GaussianSystem& g,
                         const std::vector<std::string>& targets,
                         const std::vector<std::string>& given);

// Closed-form conditional covariances for the stylized model, assembled from
// the pairwise covariance polynomials in the parameters:
//   first  = Cov(A1, Z | A0) = s_A1Z - s_A1A0 * s_A0Z
//   second = Cov(B1, Z | A0) = s_B1Z - s_B1A0 * s_A0Z
// Both must agree with condition() on the implied joint law.
struct StylizedConditionalCovs {
  double cov_a1_z_given_a0;
  double cov_b1_z_given_a0;
};
StylizedConditionalCovs stylized_conditional_covs(const StylizedParams& params);

// i.i.d. draws from the joint law (spectral square root), one column per
// label. Deterministic given seed.
Dataset sample(const GaussianSystem& g, int64_t n, uint64_t seed);

}  // namespace labelbias
