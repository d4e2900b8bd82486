#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "core/common.hpp"
#include "core/dataset.hpp"
#include "core/estimators.hpp"
#include "core/gaussian.hpp"
#include "core/rng.hpp"
#include "core/sem.hpp"
#include "json.hpp"
#include "test_helpers.hpp"

using namespace labelbias;

namespace {

// O(n^2) reference: every positive/negative pair scores 1, 0.5 on ties.
double auc_pairwise(const std::vector<double>& scores, const std::vector<double>& labels) {
  double wins = 0.0;
  int64_t pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

Dataset two_point_line() {
  Dataset d({"x", "y"});
  d.append_row({1.0, 2.0});
  d.append_row({2.0, 4.0});
  return d;
}

}  // namespace

TEST_CASE("linear fit recovers an exact line") {
  ModelFit fit = fit_linear(two_point_line(), "y", {"x"});
  CHECK(fit.coefficient("x") == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("linear fit satisfies the normal equations") {
  Rng rng(301);
  Dataset d({"x1", "x2", "y"});
  for (int i = 0; i < 500; ++i) {
    double x1 = rng.normal(), x2 = rng.normal();
    d.append_row({x1, x2, 1.0 + 0.5 * x1 - 2.0 * x2 + rng.normal()});
  }
  ModelFit fit = fit_linear(d, "y", {"x1", "x2"});
  // X^T r must vanish against each regressor and the intercept
  std::vector<double> r = predict(fit, d);
  const auto& y = d.column("y");
  double g0 = 0, g1 = 0, g2 = 0, scale = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    double e = y[i] - r[i];
    g0 += e;
    g1 += e * d.column("x1")[i];
    g2 += e * d.column("x2")[i];
    scale += y[i] * y[i];
  }
  double rel = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2) / std::sqrt(scale);
  CHECK(rel <= 1e-8);
}

TEST_CASE("duplicate feature column makes the design singular") {
  Dataset d({"x", "x_copy", "y"});
  for (int i = 0; i < 10; ++i) {
    double x = static_cast<double>(i);
    d.append_row({x, x, 2.0 * x});
  }
  CHECK_THROWS_AS(fit_linear(d, "y", {"x", "x_copy"}), Error);
  try {
    fit_linear(d, "y", {"x", "x_copy"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_design);
  }
  // a ridge penalty resolves it
  CHECK_NOTHROW(fit_linear(d, "y", {"x", "x_copy"}, 1e-6));
}

TEST_CASE("ridge path is continuous at zero on full-rank designs") {
  Rng rng(302);
  Dataset d({"x1", "x2", "y"});
  for (int i = 0; i < 200; ++i) {
    double x1 = rng.normal(), x2 = rng.normal();
    d.append_row({x1, x2, x1 - x2 + 0.1 * rng.normal()});
  }
  ModelFit exact = fit_linear(d, "y", {"x1", "x2"}, 0.0);
  ModelFit tiny = fit_linear(d, "y", {"x1", "x2"}, 1e-10);
  CHECK(exact.coefficient("x1") == doctest::Approx(tiny.coefficient("x1")).epsilon(1e-6));
  CHECK(exact.coefficient("x2") == doctest::Approx(tiny.coefficient("x2")).epsilon(1e-6));
}

TEST_CASE("linear fit on SEM draws converges to the population coefficients") {
  StylizedParams p{0.4, 0.0, 0.4, 0.4};
  LinearSem sem = build_stylized(p);
  ConditionalLaw law = condition(implied_covariance(sem), {"A1"}, {"A0", "Z"});

  double err4 = 0.0, err6 = 0.0;
  {
    Dataset d = sample(sem, 10000, 17);
    ModelFit fit = fit_linear(d, "A1", {"A0", "Z"});
    err4 = std::abs(fit.coefficient("A0") - law.coefficient("A1", "A0")) +
           std::abs(fit.coefficient("Z") - law.coefficient("A1", "Z"));
  }
  {
    Dataset d = sample(sem, 1000000, 17);
    ModelFit fit = fit_linear(d, "A1", {"A0", "Z"});
    err6 = std::abs(fit.coefficient("A0") - law.coefficient("A1", "A0")) +
           std::abs(fit.coefficient("Z") - law.coefficient("A1", "Z"));
    CHECK(testutil::within(fit.coefficient("A0"), 0.0762, 0.01));
    CHECK(testutil::within(fit.coefficient("Z"), 0.3695, 0.01));
  }
  // roughly 1/sqrt(n): two orders of magnitude in n buys about one in error
  CHECK(err6 < err4);
  CHECK(err6 <= 0.01);
}

TEST_CASE("fit preconditions") {
  Dataset d({"x", "y"});
  d.append_row({1.0, 1.0});
  CHECK_THROWS_AS(fit_linear(d, "y", {"x"}), Error);  // n < 2
  Dataset d3({"x1", "x2", "x3", "y"});
  d3.append_row({1, 2, 3, 4});
  d3.append_row({2, 3, 4, 5});
  d3.append_row({3, 4, 5, 6});
  CHECK_THROWS_AS(fit_linear(d3, "y", {"x1", "x2", "x3"}), Error);  // n <= p
  CHECK_THROWS_AS(fit_linear(two_point_line(), "y", {"x", "x"}), Error);
  CHECK_THROWS_AS(fit_linear(two_point_line(), "y", {"x"}, -1.0), Error);
  CHECK_THROWS_AS(fit_linear(two_point_line(), "missing", {"x"}), Error);
}

TEST_CASE("logistic recovers known coefficients") {
  // intercept -1; age -0.01; prior count 0.5; indicator 0.5
  Rng rng(303);
  Dataset d({"age", "priors", "ind", "y"});
  int64_t n = 50000;
  for (int64_t i = 0; i < n; ++i) {
    double age = static_cast<double>(rng.uniform_int(18, 70));
    double priors = static_cast<double>(rng.poisson(1.0));
    double ind = rng.bernoulli(0.3) ? 1.0 : 0.0;
    double eta = -1.0 - 0.01 * age + 0.5 * priors + 0.5 * ind;
    d.append_row({age, priors, ind, rng.bernoulli(inverse_logit(eta)) ? 1.0 : 0.0});
  }
  ModelFit fit = fit_logistic(d, "y", {"age", "priors", "ind"});
  CHECK(fit.converged);
  CHECK(testutil::within(fit.intercept, -1.0, 0.05));
  CHECK(testutil::within(fit.coefficient("age"), -0.01, 0.05));
  CHECK(testutil::within(fit.coefficient("priors"), 0.5, 0.05));
  CHECK(testutil::within(fit.coefficient("ind"), 0.5, 0.05));
}

TEST_CASE("balanced target independent of the feature fits to zero") {
  Dataset d({"x", "y"});
  for (int i = 0; i < 50; ++i) {
    double x = static_cast<double>(i % 7) - 3.0;
    d.append_row({x, 0.0});
    d.append_row({x, 1.0});
  }
  ModelFit fit = fit_logistic(d, "y", {"x"});
  CHECK(fit.converged);
  CHECK(std::abs(fit.intercept) <= 1e-8);
  CHECK(std::abs(fit.coefficient("x")) <= 1e-8);
}

TEST_CASE("separable classes are detected") {
  Dataset d({"x", "y"});
  d.append_row({-0.02, 0.0});
  d.append_row({-0.01, 0.0});
  d.append_row({0.01, 1.0});
  d.append_row({0.02, 1.0});
  CHECK_THROWS_AS(fit_logistic(d, "y", {"x"}), Error);
  try {
    fit_logistic(d, "y", {"x"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::separation_detected);
  }
}

TEST_CASE("single-class target is rejected") {
  Dataset d({"x", "y"});
  d.append_row({1.0, 1.0});
  d.append_row({2.0, 1.0});
  d.append_row({3.0, 1.0});
  CHECK_THROWS_AS(fit_logistic(d, "y", {"x"}), Error);
  try {
    fit_logistic(d, "y", {"x"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_target);
  }
}

TEST_CASE("prediction") {
  ModelFit fit;
  fit.family = ModelFit::Family::linear;
  fit.intercept = 0.0;
  fit.feature_names = {"x"};
  fit.coefficients = {2.0};

  Dataset d({"x"});
  d.append_row({3.0});
  CHECK(predict(fit, d)[0] == doctest::Approx(6.0));

  fit.family = ModelFit::Family::logistic;
  fit.coefficients = {-0.1};
  // linear predictor -0.3 -> probability through the inverse logit
  CHECK(predict(fit, d)[0] == doctest::Approx(0.425557).epsilon(1e-5));

  Dataset empty({"x"});
  CHECK(predict(fit, empty).empty());

  Dataset wrong({"w"});
  wrong.append_row({1.0});
  CHECK_THROWS_AS(predict(fit, wrong), Error);
}

TEST_CASE("model JSON carries family, coefficients and diagnostics") {
  ModelFit fit = fit_linear(two_point_line(), "y", {"x"});
  auto j = nlohmann::json::parse(fit.to_json());
  CHECK(j["family"] == "linear");
  CHECK(j["coefficients"]["x"].get<double>() == doctest::Approx(2.0));
  CHECK(j["diagnostics"].contains("iterations"));
  CHECK(j["diagnostics"].contains("converged"));
}

TEST_CASE("rmse basics") {
  CHECK(rmse({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(rmse({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS_AS(rmse({1.0}, {1.0, 2.0}), Error);
}

TEST_CASE("auc worked examples") {
  CHECK(auc({0.9, 0.1}, {1.0, 0.0}) == 1.0);
  CHECK(auc({0.2, 0.7, 0.6}, {1.0, 0.0, 0.0}) == 0.0);
  // three wins and one tie out of four pairs
  CHECK(auc({0.5, 0.5, 0.9, 0.1}, {1.0, 0.0, 1.0, 0.0}) == doctest::Approx(0.875));
  CHECK_THROWS_AS(auc({0.1, 0.2}, {1.0, 1.0}), Error);
  try {
    auc({0.1, 0.2}, {1.0, 1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::auc_undefined);
  }
  CHECK_THROWS_AS(auc({0.1}, {1.0, 0.0}), Error);
}

TEST_CASE("auc equals the pairwise oracle exactly, ties included") {
  Rng rng(304);
  for (int t = 0; t < 200; ++t) {
    auto n = static_cast<size_t>(rng.uniform_int(2, 200));
    std::vector<double> scores(n), labels(n);
    bool has0 = false, has1 = false;
    for (size_t i = 0; i < n; ++i) {
      // quantized scores force plenty of ties
      scores[i] = static_cast<double>(rng.uniform_int(0, 10)) / 10.0;
      labels[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
      (labels[i] == 1.0 ? has1 : has0) = true;
    }
    if (!has0) labels[0] = 0.0;
    if (!has1) labels[n - 1] = 1.0;
    CHECK(auc(scores, labels) == auc_pairwise(scores, labels));
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  Rng rng(305);
  auto transforms = std::vector<double (*)(double)>{
      [](double x) { return std::exp(x); },
      [](double x) { return x * x * x + x; },
      [](double x) { return 3.0 * x - 7.0; },
      [](double x) { return std::atan(x); },
  };
  for (int t = 0; t < 100; ++t) {
    auto n = static_cast<size_t>(rng.uniform_int(10, 300));
    std::vector<double> scores(n), labels(n);
    bool has0 = false, has1 = false;
    for (size_t i = 0; i < n; ++i) {
      scores[i] = rng.normal();
      labels[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
      (labels[i] == 1.0 ? has1 : has0) = true;
    }
    if (!has0) labels[0] = 0.0;
    if (!has1) labels[n - 1] = 1.0;
    double base = auc(scores, labels);
    for (auto f : transforms) {
      std::vector<double> mapped(n);
      for (size_t i = 0; i < n; ++i) mapped[i] = f(scores[i]);
      CHECK(auc(mapped, labels) == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("auc of noise scores is one half") {
  Rng rng(306);
  size_t n = 100000;
  std::vector<double> scores(n), labels(n);
  for (size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  CHECK(testutil::within(auc(scores, labels), 0.5, 0.01));
}
