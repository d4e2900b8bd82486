#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/gaussian.hpp"
#include "core/sem.hpp"

namespace labelbias {

// One metric value of a parameter sweep: (grid value, model, evaluation
// label, metric) plus sampling metadata. Monte Carlo cells report a standard
// error; exact cells report 0.
struct SweepCell {
  double value = 0.0;
  std::string model;   // "simple" | "complex"
  std::string label;   // "proxy" | "true"
  std::string metric;  // "rmse" | "rmse_analytic" | "auc"
  double metric_value = 0.0;
  double stderr_value = 0.0;
  int64_t n_train = 0;
  int64_t n_test = 0;
  uint64_t seed = 0;
};

struct SweepResult {
  std::string param;  // "beta" | "rho"
  std::vector<double> grid;
  std::vector<SweepCell> cells;

  const SweepCell& cell(double value, const std::string& model, const std::string& label,
                        const std::string& metric) const;
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

enum class ModelKind { simple, complex };
enum class LabelKind { proxy, truth };

// Exact population RMSE of the proxy-trained model (population coefficients
// from Gaussian conditioning, second moments from the implied covariance).
// This is the noise-free curve the Monte Carlo sweep must reproduce.
double analytic_model_rmse(const StylizedParams& params, ModelKind model, LabelKind label);

// Population least-squares fit of train_label on features, with the second
// moments of its score against eval_label. Lets MSE differences be assembled
// two ways (directly, and from score moments) as a cross-check.
struct PopulationFit {
  Eigen::VectorXd coef;
  double intercept = 0.0;
  double e_score_sq = 0.0;     // E[score^2]
  double e_score_label = 0.0;  // E[score * eval_label]
  double mse = 0.0;            // E[(score - eval_label)^2]
};
PopulationFit population_linear(const GaussianSystem& g, const std::vector<std::string>& features,
                                const std::string& train_label, const std::string& eval_label);

struct BetaSweepConfig {
  std::vector<double> beta_grid;
  double alpha = 0.4;
  double gamma = 0.4;
  double delta = 0.4;
  int64_t n_train = 200000;
  int64_t n_test = 200000;
  uint64_t seed = 0;
  int jobs = 1;
};

// Largest grid of {0, step, 2*step, ...} capped at beta_max that keeps the
// stylized parameters valid.
std::vector<double> default_beta_grid(double alpha, double gamma, double delta,
                                      double step = 0.05, double beta_max = 0.6);

// Per grid point: draw train/test sets, fit complex (A0, Z -> A1) and simple
// (A0 -> A1) linear models on the proxy, report test RMSE against the proxy
// (A1) and the true label (B1), plus the matching analytic values.
SweepResult run_beta_sweep(const BetaSweepConfig& config);

// Synthetic stand-in for a felony-arrest cohort: age, a high-policing
// indicator, latent past behavior, a Poisson prior-arrest count whose
// log-rate loads on behavior and policing, and a Bernoulli future arrest
// whose logit loads on age, priors, and policing.
struct ArrestSurrogateConfig {
  int64_t n = 25918;
  double p_high_policing = 0.3;
  double log_rate_intercept = 0.0;
  double log_rate_behavior = 0.5;
  double log_rate_policing = 0.5;
  double arrest_intercept = -1.0;
  double arrest_age = -0.01;
  double arrest_priors = 0.5;
  double arrest_policing = 0.5;

  void validate() const;
};
Dataset generate_arrest_surrogate(const ArrestSurrogateConfig& config, uint64_t seed);

// Draws a hypothetical true-offense label: Bernoulli with logit
// -1 - age/100 + priors/2 + rho * policing, per row.
std::vector<double> simulate_true_offense(const Dataset& d, double rho, uint64_t seed);

struct RhoSweepConfig {
  std::vector<double> rho_grid;
  int n_sim = 20;
  uint64_t seed = 0;
  int jobs = 1;
};
std::vector<double> default_rho_grid();

// Fits complex (age, priors, policing) and simple (age, priors) logistic
// models once on the proxy label over a seeded 50/50 split, then scores AUC
// against n_sim simulated true-offense draws per rho.
SweepResult run_rho_sweep(const RhoSweepConfig& config, const Dataset& surrogate);

// Where the complex-minus-simple AUC gap crosses zero, interpolated between
// the bracketing grid points. NaN when the gap never changes sign.
double auc_gap_crossover(const SweepResult& rho_sweep);

// Deterministic work-sharing helper: output must not depend on jobs.
void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn);

}  // namespace labelbias
