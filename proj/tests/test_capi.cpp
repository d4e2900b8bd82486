#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "labelbias/labelbias.h"

namespace {

struct Freed {
  char* ptr = nullptr;
  ~Freed() { lb_string_free(ptr); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(lb_version()) == "0.1.0");
  CHECK(std::string(lb_status_name(LB_OK)) == "ok");
  CHECK(std::string(lb_status_name(LB_ERR_INVALID_PARAMS)) == "invalid-params");
  CHECK(std::string(lb_status_name(LB_ERR_UNMAPPED_COLUMN)) == "unmapped-column");
}

TEST_CASE("stylized model end to end through the C surface") {
  lb_stylized_params params{0.4, 0.0, 0.4, 0.4};
  lb_sem* sem = nullptr;
  REQUIRE(lb_sem_stylized(params, &sem) == LB_OK);

  lb_gaussian* g = nullptr;
  REQUIRE(lb_sem_implied_covariance(sem, &g) == LB_OK);
  CHECK(lb_gaussian_dim(g) == 5);
  double cov = 0.0;
  REQUIRE(lb_gaussian_covariance(g, "A0", "Z", &cov) == LB_OK);
  CHECK(cov == doctest::Approx(0.4).epsilon(1e-12));

  double trek = 0.0;
  REQUIRE(lb_sem_trek_covariance(sem, "A1", "A0", &trek) == LB_OK);
  CHECK(trek == doctest::Approx(0.224).epsilon(1e-12));

  double ca = 0.0, cb = 0.0;
  REQUIRE(lb_stylized_conditional_covs(params, &ca, &cb) == LB_OK);
  CHECK(ca == doctest::Approx(0.3104).epsilon(1e-12));
  CHECK(cb == doctest::Approx(-0.064).epsilon(1e-12));

  lb_dataset* d = nullptr;
  REQUIRE(lb_sem_sample(sem, 50000, 7, &d) == LB_OK);
  CHECK(lb_dataset_num_rows(d) == 50000);
  CHECK(lb_dataset_num_cols(d) == 5);
  CHECK(std::string(lb_dataset_column_name(d, 0)) == "Z");

  const char* features[] = {"A0", "Z"};
  lb_model* model = nullptr;
  REQUIRE(lb_fit_linear(d, "A1", features, 2, 0.0, &model) == LB_OK);
  double coef_z = 0.0;
  REQUIRE(lb_model_coefficient(model, "Z", &coef_z) == LB_OK);
  CHECK(std::abs(coef_z - 0.3695) < 0.05);

  Freed json_text;
  REQUIRE(lb_model_to_json(model, &json_text.ptr) == LB_OK);
  auto j = nlohmann::json::parse(json_text.ptr);
  CHECK(j["family"] == "linear");
  CHECK(j["coefficients"].contains("A0"));

  std::vector<double> scores(lb_dataset_num_rows(d));
  REQUIRE(lb_model_predict(model, d, scores.data()) == LB_OK);
  std::vector<double> truth(lb_dataset_num_rows(d));
  REQUIRE(lb_dataset_copy_column(d, "A1", truth.data()) == LB_OK);
  double r = 0.0;
  REQUIRE(lb_rmse(scores.data(), truth.data(), scores.size(), &r) == LB_OK);
  CHECK(r > 0.8);
  CHECK(r < 1.0);

  lb_model_free(model);
  lb_dataset_free(d);
  lb_gaussian_free(g);
  lb_sem_free(sem);
}

TEST_CASE("invalid parameters surface a code and a message") {
  lb_sem* sem = nullptr;
  lb_status st = lb_sem_stylized({0.9, 0.9, 0.9, 0.1}, &sem);
  CHECK(st == LB_ERR_INVALID_PARAMS);
  CHECK(std::strlen(lb_last_error()) > 0);
  CHECK(sem == nullptr);
}

TEST_CASE("general sem construction through the C surface") {
  const char* nodes[] = {"x", "y"};
  lb_sem* sem = nullptr;
  REQUIRE(lb_sem_create(nodes, 2, &sem) == LB_OK);
  REQUIRE(lb_sem_add_edge(sem, "x", "y", 0.6) == LB_OK);
  REQUIRE(lb_sem_set_exo_variance(sem, "y", 1.0 - 0.36) == LB_OK);
  REQUIRE(lb_sem_validate(sem) == LB_OK);
  double c = 0.0;
  REQUIRE(lb_sem_trek_covariance(sem, "x", "y", &c) == LB_OK);
  CHECK(c == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(lb_sem_add_edge(sem, "x", "nope", 0.1) == LB_ERR_INVALID_ARGUMENT);
  lb_sem_free(sem);
}

TEST_CASE("conditioning through the C surface") {
  const char* labels[] = {"w1", "w2"};
  double mean[] = {0.0, 0.0};
  double cov[] = {1.0, 0.5, 0.5, 1.0};
  lb_gaussian* g = nullptr;
  REQUIRE(lb_gaussian_create(labels, 2, mean, cov, &g) == LB_OK);

  const char* targets[] = {"w2"};
  const char* given[] = {"w1"};
  double coef = 0.0, intercept = 0.0, cc = 0.0;
  REQUIRE(lb_gaussian_condition(g, targets, 1, given, 1, &coef, &intercept, &cc) == LB_OK);
  CHECK(coef == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cc == doctest::Approx(0.75).epsilon(1e-12));
  lb_gaussian_free(g);

  double bad_cov[] = {1.0, 2.0, 2.0, 1.0};
  lb_gaussian* bad = nullptr;
  CHECK(lb_gaussian_create(labels, 2, mean, bad_cov, &bad) == LB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("criterion report through the C surface") {
  Freed report;
  REQUIRE(lb_criterion_check_stylized({0.4, 0.0, 0.4, 0.4}, LB_BASIS_COROLLARY1, &report.ptr) ==
          LB_OK);
  auto j = nlohmann::json::parse(report.ptr);
  CHECK(j["decision"] == "ExcludeZ");
  CHECK(j["basis"] == "corollary1");
  std::set<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
  CHECK(keys.size() == 8);

  Freed theorem_report;
  REQUIRE(lb_criterion_check_stylized({0.4, 0.4, 0.4, 0.4}, LB_BASIS_THEOREM1,
                                      &theorem_report.ptr) == LB_OK);
  auto jt = nlohmann::json::parse(theorem_report.ptr);
  CHECK(jt["decision"] != "ExcludeZ");
}

TEST_CASE("criterion over a dataset handle") {
  lb_sem* sem = nullptr;
  REQUIRE(lb_sem_stylized({0.4, 0.0, 0.4, 0.4}, &sem) == LB_OK);
  lb_dataset* d = nullptr;
  REQUIRE(lb_sem_sample(sem, 100000, 3, &d) == LB_OK);
  lb_sem_free(sem);

  const char* features[] = {"A0"};
  lb_proxy_roles roles{};
  roles.true_label = "B1";
  roles.proxy_label = "A1";
  roles.features = features;
  roles.n_features = 1;
  roles.candidate = "Z";

  Freed report;
  REQUIRE(lb_criterion_check_dataset(d, &roles, LB_BASIS_COROLLARY1, &report.ptr) == LB_OK);
  auto j = nlohmann::json::parse(report.ptr);
  CHECK(j["mode"] == "empirical");
  CHECK(j["decision"] == "ExcludeZ");

  roles.candidate = "missing";
  char* out = nullptr;
  CHECK(lb_criterion_check_dataset(d, &roles, LB_BASIS_COROLLARY1, &out) == LB_ERR_MISSING_ROLE);
  lb_dataset_free(d);
}

TEST_CASE("noise benchmark through the C surface") {
  double mse_c = 0.0, mse_s = 0.0;
  REQUIRE(lb_noise_benchmark_stylized({0.4, 0.0, 0.4, 0.4}, 0.5, 100000, 5, &mse_c, &mse_s) ==
          LB_OK);
  CHECK(mse_c <= mse_s + 0.02);
  CHECK(lb_noise_benchmark_stylized({0.4, 0.0, 0.4, 0.4}, -0.5, 1000, 5, &mse_c, &mse_s) ==
        LB_ERR_INVALID_VARIANCE);
}

TEST_CASE("dataset handles round trip through CSV") {
  const char* cols[] = {"x", "y"};
  lb_dataset* d = nullptr;
  REQUIRE(lb_dataset_create(cols, 2, &d) == LB_OK);
  double row1[] = {1.0, 0.1};
  double row2[] = {2.0, 0.30000000000000004};
  REQUIRE(lb_dataset_append_row(d, row1, 2) == LB_OK);
  REQUIRE(lb_dataset_append_row(d, row2, 2) == LB_OK);

  const char* path = "capi_roundtrip.csv";
  REQUIRE(lb_dataset_write_csv(d, path) == LB_OK);
  lb_dataset* back = nullptr;
  REQUIRE(lb_dataset_read_csv(path, &back) == LB_OK);
  REQUIRE(lb_dataset_num_rows(back) == 2);
  double col[2];
  REQUIRE(lb_dataset_copy_column(back, "y", col) == LB_OK);
  CHECK(col[1] == 0.30000000000000004);
  lb_dataset_free(back);
  lb_dataset_free(d);
  std::remove(path);

  lb_dataset* nofile = nullptr;
  CHECK(lb_dataset_read_csv("/no/such/file.csv", &nofile) == LB_ERR_IO);
}

TEST_CASE("beta sweep through the C surface") {
  lb_beta_sweep_config config{};
  REQUIRE(lb_beta_sweep_config_default(&config) == LB_OK);
  double grid[] = {0.0, 0.2};
  config.beta_grid = grid;
  config.n_beta = 2;
  config.n_train = 5000;
  config.n_test = 5000;
  config.seed = 9;

  lb_sweep* sweep = nullptr;
  REQUIRE(lb_beta_sweep_run(&config, &sweep) == LB_OK);
  CHECK(lb_sweep_num_cells(sweep) == 16);
  Freed csv;
  REQUIRE(lb_sweep_to_csv(sweep, &csv.ptr) == LB_OK);
  CHECK(std::string(csv.ptr).rfind("param,value,model,label,metric", 0) == 0);
  lb_sweep_free(sweep);

  double rmse_simple_true = 0.0;
  REQUIRE(lb_analytic_model_rmse({0.4, 0.0, 0.4, 0.4}, 0, 1, &rmse_simple_true) == LB_OK);
  CHECK(rmse_simple_true == doctest::Approx(0.989190).epsilon(1e-5));
}

TEST_CASE("default grids through the C surface") {
  size_t n = 0;
  REQUIRE(lb_default_beta_grid(0.4, 0.4, 0.4, nullptr, 0, &n) == LB_OK);
  CHECK(n == 13);
  std::vector<double> grid(n);
  REQUIRE(lb_default_beta_grid(0.4, 0.4, 0.4, grid.data(), grid.size(), &n) == LB_OK);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(0.6));
  CHECK(lb_default_beta_grid(0.4, 0.4, 0.4, grid.data(), 2, &n) == LB_ERR_INVALID_ARGUMENT);

  REQUIRE(lb_default_rho_grid(nullptr, 0, &n) == LB_OK);
  CHECK(n == 11);
  std::vector<double> rho(n);
  REQUIRE(lb_default_rho_grid(rho.data(), rho.size(), &n) == LB_OK);
  CHECK(rho.front() == doctest::Approx(-1.0));
  CHECK(rho.back() == doctest::Approx(1.0));
}

TEST_CASE("arrest pipeline through the C surface") {
  lb_arrest_config config{};
  REQUIRE(lb_arrest_config_default(&config) == LB_OK);
  CHECK(config.n == 25918);
  config.n = 3000;
  lb_dataset* d = nullptr;
  REQUIRE(lb_generate_arrest_surrogate(&config, 4, &d) == LB_OK);

  std::vector<double> labels(lb_dataset_num_rows(d));
  REQUIRE(lb_simulate_true_offense(d, -0.3, 5, labels.data()) == LB_OK);

  lb_rho_sweep_config rc{};
  REQUIRE(lb_rho_sweep_config_default(&rc) == LB_OK);
  double grid[] = {-0.5, 0.5};
  rc.rho_grid = grid;
  rc.n_rho = 2;
  rc.n_sim = 3;
  rc.seed = 6;
  lb_sweep* sweep = nullptr;
  REQUIRE(lb_rho_sweep_run(&rc, d, &sweep) == LB_OK);
  CHECK(lb_sweep_num_cells(sweep) == 4);
  lb_sweep_free(sweep);
  lb_dataset_free(d);
}

TEST_CASE("seed derivation separates substreams") {
  uint64_t p1[] = {1, 2};
  uint64_t p2[] = {2, 1};
  CHECK(lb_derive_seed(7, p1, 2) != lb_derive_seed(7, p2, 2));
  CHECK(lb_derive_seed(7, p1, 2) == lb_derive_seed(7, p1, 2));
  CHECK(lb_derive_seed(7, p1, 2) != lb_derive_seed(8, p1, 2));
}

TEST_CASE("default column map text is exposed") {
  std::string text = lb_health_default_column_map();
  CHECK(text.find("race = race") != std::string::npos);
  CHECK(text.find("cost_t = future_cost") != std::string::npos);
}
