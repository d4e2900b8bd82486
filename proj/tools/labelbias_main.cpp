// Command-line front end for the labelbias shared library. Everything
// numerical happens behind the C API; this file only parses flags, resolves
// config-file overrides, and writes metadata sidecars.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "labelbias/labelbias.h"

namespace {

using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(lb_status status, const std::string& context) {
  throw CliError{static_cast<int>(status),
                 context + ": " + lb_status_name(status) + ": " + lb_last_error()};
}

void check(lb_status status, const std::string& context) {
  if (status != LB_OK) die(status, context);
}

std::string trim_ws(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

// Accepts "a,b,c" lists and "start:step:end" ranges (inclusive end).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts = split_on(text, ':');
    if (parts.size() != 3) {
      throw CliError{1, "grid range must be start:step:end, got '" + text + "'"};
    }
    double start = std::stod(parts[0]), step = std::stod(parts[1]), end = std::stod(parts[2]);
    if (step <= 0.0) throw CliError{1, "grid step must be positive"};
    for (int i = 0;; ++i) {
      // snap so accumulated decimal steps print as the decimals they mean
      double v = std::round((start + step * i) * 1e12) / 1e12;
      if (v > end + step * 1e-9) break;
      out.push_back(v);
    }
    return out;
  }
  for (const std::string& part : split_on(text, ',')) {
    if (trim_ws(part).empty()) continue;
    out.push_back(std::stod(trim_ws(part)));
  }
  if (out.empty()) throw CliError{1, "empty grid: '" + text + "'"};
  return out;
}

// Key = value lines (# comments). Values override already-parsed flags.
using Setter = std::function<void(const std::string&)>;

void apply_config_file(const std::string& path, const std::map<std::string, Setter>& setters) {
  std::ifstream f(path);
  if (!f) throw CliError{1, "cannot open config file: " + path};
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim_ws(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError{1, path + ":" + std::to_string(line_no) + ": expected 'key = value'"};
    }
    std::string key = trim_ws(line.substr(0, eq));
    std::string value = trim_ws(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw CliError{1, path + ":" + std::to_string(line_no) + ": unknown option '" + key + "'"};
    }
    try {
      it->second(value);
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError{1, path + ":" + std::to_string(line_no) + ": bad value for '" + key +
                            "': " + e.what()};
    }
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError{1, "cannot open for writing: " + path};
  f << text;
  if (!f) throw CliError{1, "write failed: " + path};
}

void write_sidecar(const std::string& out_path, const std::string& command, const json& config,
                   const json& outputs) {
  json meta;
  meta["command"] = command;
  meta["config"] = config;
  meta["outputs"] = outputs;
  meta["tool"] = {{"name", "labelbias"}, {"version", lb_version()}};
  write_text_file(out_path + ".meta.json", meta.dump(2) + "\n");
}

json grid_to_json(const std::vector<double>& grid) {
  json j = json::array();
  for (double v : grid) j.push_back(v);
  return j;
}

std::vector<double> sweep_default_beta_grid(double alpha, double gamma, double delta) {
  size_t n = 0;
  check(lb_default_beta_grid(alpha, gamma, delta, nullptr, 0, &n), "sem-sweep");
  if (n == 0) throw CliError{1, "no feasible beta grid for these parameters"};
  std::vector<double> grid(n);
  check(lb_default_beta_grid(alpha, gamma, delta, grid.data(), grid.size(), &n), "sem-sweep");
  return grid;
}

std::vector<double> sweep_default_rho_grid() {
  size_t n = 0;
  check(lb_default_rho_grid(nullptr, 0, &n), "arrest-sweep");
  std::vector<double> grid(n);
  check(lb_default_rho_grid(grid.data(), grid.size(), &n), "arrest-sweep");
  return grid;
}

// ---------------------------------------------------------------------
// sem-sweep
// ---------------------------------------------------------------------

int cmd_sem_sweep(CLI::App& app, int argc, char** argv) {
  CLI::App* sub = app.add_subcommand("sem-sweep", "RMSE of simple vs complex models over beta");
  double alpha = 0.4, gamma = 0.4, delta = 0.4;
  std::string beta_grid_text;
  int64_t n_train = 200000, n_test = 200000;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out, config_path;

  sub->add_option("--alpha", alpha, "neighborhood->arrest weight");
  sub->add_option("--gamma", gamma, "behavior->arrest weight");
  sub->add_option("--delta", delta, "behavior noise covariance");
  sub->add_option("--beta-grid", beta_grid_text, "comma list or start:step:end");
  sub->add_option("--n-train", n_train, "training rows per grid point");
  sub->add_option("--n-test", n_test, "test rows per grid point");
  sub->add_option("--seed", seed, "base RNG seed")->required();
  sub->add_option("--jobs", jobs, "grid-point parallelism");
  sub->add_option("--out", out, "output CSV path")->required();
  sub->add_option("--config", config_path, "key = value file overriding flags");

  app.parse(argc, argv);
  if (!sub->parsed()) return -1;

  if (!config_path.empty()) {
    apply_config_file(config_path,
                      {{"alpha", [&](const std::string& v) { alpha = std::stod(v); }},
                       {"gamma", [&](const std::string& v) { gamma = std::stod(v); }},
                       {"delta", [&](const std::string& v) { delta = std::stod(v); }},
                       {"beta-grid", [&](const std::string& v) { beta_grid_text = v; }},
                       {"n-train", [&](const std::string& v) { n_train = std::stoll(v); }},
                       {"n-test", [&](const std::string& v) { n_test = std::stoll(v); }},
                       {"seed", [&](const std::string& v) { seed = std::stoull(v); }},
                       {"jobs", [&](const std::string& v) { jobs = std::stoi(v); }},
                       {"out", [&](const std::string& v) { out = v; }}});
  }

  std::vector<double> grid = beta_grid_text.empty()
                                 ? sweep_default_beta_grid(alpha, gamma, delta)
                                 : parse_grid(beta_grid_text);

  lb_beta_sweep_config config{};
  check(lb_beta_sweep_config_default(&config), "sem-sweep");
  config.beta_grid = grid.data();
  config.n_beta = grid.size();
  config.alpha = alpha;
  config.gamma = gamma;
  config.delta = delta;
  config.n_train = n_train;
  config.n_test = n_test;
  config.seed = seed;
  config.jobs = jobs;

  lb_sweep* sweep = nullptr;
  check(lb_beta_sweep_run(&config, &sweep), "sem-sweep");
  lb_status st = lb_sweep_write_csv(sweep, out.c_str());
  lb_sweep_free(sweep);
  check(st, "sem-sweep");

  json cfg = {{"alpha", alpha},     {"gamma", gamma},     {"delta", delta},
              {"beta_grid", grid_to_json(grid)},          {"n_train", n_train},
              {"n_test", n_test},   {"seed", seed},       {"jobs", jobs},
              {"out", out}};
  write_sidecar(out, "sem-sweep", cfg, {{"csv", out}});
  return 0;
}

// ---------------------------------------------------------------------
// arrest-sweep
// ---------------------------------------------------------------------

int cmd_arrest_sweep(CLI::App& app, int argc, char** argv) {
  CLI::App* sub = app.add_subcommand("arrest-sweep", "AUC of simple vs complex models over rho");
  lb_arrest_config surrogate{};
  check(lb_arrest_config_default(&surrogate), "arrest-sweep");
  std::string rho_grid_text;
  int n_sim = 20;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out, config_path, input_path, dump_data_path;

  sub->add_option("--n", surrogate.n, "surrogate cohort size");
  sub->add_option("--p-high-policing", surrogate.p_high_policing, "share of cases in high-policing areas");
  sub->add_option("--rate-intercept", surrogate.log_rate_intercept, "prior-arrest log-rate intercept");
  sub->add_option("--rate-behavior", surrogate.log_rate_behavior, "prior-arrest log-rate on behavior");
  sub->add_option("--rate-policing", surrogate.log_rate_policing, "prior-arrest log-rate on policing");
  sub->add_option("--arrest-intercept", surrogate.arrest_intercept, "future-arrest logit intercept");
  sub->add_option("--arrest-age", surrogate.arrest_age, "future-arrest logit on age");
  sub->add_option("--arrest-priors", surrogate.arrest_priors, "future-arrest logit on prior arrests");
  sub->add_option("--kappa", surrogate.arrest_policing, "future-arrest logit on policing");
  sub->add_option("--rho-grid", rho_grid_text, "comma list or start:step:end");
  sub->add_option("--n-sim", n_sim, "true-label draws per grid point");
  sub->add_option("--input", input_path, "load surrogate CSV instead of generating");
  sub->add_option("--dump-data", dump_data_path, "also write the surrogate CSV here");
  sub->add_option("--seed", seed, "base RNG seed")->required();
  sub->add_option("--jobs", jobs, "grid-point parallelism");
  sub->add_option("--out", out, "output CSV path")->required();
  sub->add_option("--config", config_path, "key = value file overriding flags");

  app.parse(argc, argv);
  if (!sub->parsed()) return -1;

  if (!config_path.empty()) {
    apply_config_file(
        config_path,
        {{"n", [&](const std::string& v) { surrogate.n = std::stoll(v); }},
         {"p-high-policing", [&](const std::string& v) { surrogate.p_high_policing = std::stod(v); }},
         {"rate-intercept", [&](const std::string& v) { surrogate.log_rate_intercept = std::stod(v); }},
         {"rate-behavior", [&](const std::string& v) { surrogate.log_rate_behavior = std::stod(v); }},
         {"rate-policing", [&](const std::string& v) { surrogate.log_rate_policing = std::stod(v); }},
         {"arrest-intercept", [&](const std::string& v) { surrogate.arrest_intercept = std::stod(v); }},
         {"arrest-age", [&](const std::string& v) { surrogate.arrest_age = std::stod(v); }},
         {"arrest-priors", [&](const std::string& v) { surrogate.arrest_priors = std::stod(v); }},
         {"kappa", [&](const std::string& v) { surrogate.arrest_policing = std::stod(v); }},
         {"rho-grid", [&](const std::string& v) { rho_grid_text = v; }},
         {"n-sim", [&](const std::string& v) { n_sim = std::stoi(v); }},
         {"input", [&](const std::string& v) { input_path = v; }},
         {"dump-data", [&](const std::string& v) { dump_data_path = v; }},
         {"seed", [&](const std::string& v) { seed = std::stoull(v); }},
         {"jobs", [&](const std::string& v) { jobs = std::stoi(v); }},
         {"out", [&](const std::string& v) { out = v; }}});
  }

  std::vector<double> grid =
      rho_grid_text.empty() ? sweep_default_rho_grid() : parse_grid(rho_grid_text);

  lb_dataset* data = nullptr;
  bool synthetic = input_path.empty();
  if (synthetic) {
    check(lb_generate_arrest_surrogate(&surrogate, lb_derive_seed(seed, nullptr, 0), &data),
          "arrest-sweep");
  } else {
    check(lb_dataset_read_csv(input_path.c_str(), &data), "arrest-sweep");
  }
  if (!dump_data_path.empty()) {
    lb_status st = lb_dataset_write_csv(data, dump_data_path.c_str());
    if (st != LB_OK) {
      lb_dataset_free(data);
      die(st, "arrest-sweep");
    }
  }

  lb_rho_sweep_config config{};
  check(lb_rho_sweep_config_default(&config), "arrest-sweep");
  config.rho_grid = grid.data();
  config.n_rho = grid.size();
  config.n_sim = n_sim;
  config.seed = seed;
  config.jobs = jobs;

  lb_sweep* sweep = nullptr;
  lb_status st = lb_rho_sweep_run(&config, data, &sweep);
  lb_dataset_free(data);
  check(st, "arrest-sweep");
  st = lb_sweep_write_csv(sweep, out.c_str());
  lb_sweep_free(sweep);
  check(st, "arrest-sweep");

  json cfg = {{"n", surrogate.n},
              {"p_high_policing", surrogate.p_high_policing},
              {"rate_intercept", surrogate.log_rate_intercept},
              {"rate_behavior", surrogate.log_rate_behavior},
              {"rate_policing", surrogate.log_rate_policing},
              {"arrest_intercept", surrogate.arrest_intercept},
              {"arrest_age", surrogate.arrest_age},
              {"arrest_priors", surrogate.arrest_priors},
              {"kappa", surrogate.arrest_policing},
              {"rho_grid", grid_to_json(grid)},
              {"n_sim", n_sim},
              {"input", input_path},
              {"dump_data", dump_data_path},
              {"synthetic_data", synthetic},
              {"seed", seed},
              {"jobs", jobs},
              {"out", out}};
  write_sidecar(out, "arrest-sweep", cfg, {{"csv", out}});
  return 0;
}

// ---------------------------------------------------------------------
// health-enroll
// ---------------------------------------------------------------------

int cmd_health_enroll(CLI::App& app, int argc, char** argv) {
  CLI::App* sub = app.add_subcommand("health-enroll", "care-management enrollment curves");
  std::string data_path, column_map_path, capacity_text;
  double ridge = 1e-6, chronic_threshold = 3.0;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out, config_path;

  sub->add_option("--data", data_path, "patient CSV")->required();
  sub->add_option("--column-map", column_map_path, "column map file (default: built-in)");
  sub->add_option("--capacity-grid", capacity_text, "comma list or start:step:end");
  sub->add_option("--ridge", ridge, "ridge penalty for the cost regressions");
  sub->add_option("--chronic-threshold", chronic_threshold, "high-needs chronic-condition cutoff");
  sub->add_option("--seed", seed, "split seed")->required();
  sub->add_option("--jobs", jobs, "accepted for interface parity; the run is single-pass");
  sub->add_option("--out", out, "output CSV path")->required();
  sub->add_option("--config", config_path, "key = value file overriding flags");

  app.parse(argc, argv);
  if (!sub->parsed()) return -1;

  if (!config_path.empty()) {
    apply_config_file(
        config_path,
        {{"data", [&](const std::string& v) { data_path = v; }},
         {"column-map", [&](const std::string& v) { column_map_path = v; }},
         {"capacity-grid", [&](const std::string& v) { capacity_text = v; }},
         {"ridge", [&](const std::string& v) { ridge = std::stod(v); }},
         {"chronic-threshold", [&](const std::string& v) { chronic_threshold = std::stod(v); }},
         {"seed", [&](const std::string& v) { seed = std::stoull(v); }},
         {"jobs", [&](const std::string& v) { jobs = std::stoi(v); }},
         {"out", [&](const std::string& v) { out = v; }}});
  }

  std::vector<double> capacities;
  if (!capacity_text.empty()) {
    capacities = parse_grid(capacity_text);
  } else {
    capacities = {0.01, 0.02, 0.05, 0.10, 0.20, 0.30, 0.50};
  }

  lb_health* health = nullptr;
  check(lb_health_load(data_path.c_str(),
                       column_map_path.empty() ? nullptr : column_map_path.c_str(), &health),
        "health-enroll");

  lb_enrollment_config config{};
  check(lb_enrollment_config_default(&config), "health-enroll");
  config.capacity_grid = capacities.data();
  config.n_capacity = capacities.size();
  config.ridge = ridge;
  config.chronic_threshold = chronic_threshold;
  config.seed = seed;

  lb_curves* curves = nullptr;
  lb_status st = lb_enrollment_run(health, &config, &curves);
  if (st != LB_OK) {
    lb_health_free(health);
    die(st, "health-enroll");
  }
  st = lb_curves_write_csv(curves, out.c_str());
  lb_curves_free(curves);
  check(st, "health-enroll");

  json cfg = {{"data", data_path},
              {"column_map", column_map_path.empty() ? "builtin" : column_map_path},
              {"capacity_grid", grid_to_json(capacities)},
              {"ridge", ridge},
              {"chronic_threshold", chronic_threshold},
              {"n_rows", lb_health_num_rows(health)},
              {"dropped_rows", lb_health_dropped_rows(health)},
              {"n_demographics", lb_health_block_size(health, "demographics")},
              {"n_current_health", lb_health_block_size(health, "current_health")},
              {"n_past_cost", lb_health_block_size(health, "past_cost")},
              {"seed", seed},
              {"jobs", jobs},
              {"out", out}};
  lb_health_free(health);
  write_sidecar(out, "health-enroll", cfg, {{"csv", out}});
  return 0;
}

// ---------------------------------------------------------------------
// criterion-check
// ---------------------------------------------------------------------

int cmd_criterion_check(CLI::App& app, int argc, char** argv) {
  CLI::App* sub = app.add_subcommand("criterion-check", "feature-exclusion report (JSON)");
  double alpha = -1, beta = -1, gamma = -1, delta = -1;
  std::string data_path, y_col, yproxy_col, x_cols_text, z_col, basis_text = "corollary1";
  double assumed_cov = 0.0;
  bool have_assumed = false;
  bool additive_noise = false;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out, config_path;

  auto* o_alpha = sub->add_option("--alpha", alpha, "stylized alpha (analytic mode)");
  auto* o_beta = sub->add_option("--beta", beta, "stylized beta");
  auto* o_gamma = sub->add_option("--gamma", gamma, "stylized gamma");
  auto* o_delta = sub->add_option("--delta", delta, "stylized delta");
  sub->add_option("--data", data_path, "dataset CSV (empirical mode)");
  sub->add_option("--y-col", y_col, "true label column");
  sub->add_option("--yproxy-col", yproxy_col, "proxy label column");
  sub->add_option("--x-cols", x_cols_text, "retained feature columns, comma separated");
  sub->add_option("--z-col", z_col, "candidate feature column");
  sub->add_option("--basis", basis_text, "theorem1 | corollary1");
  auto* o_assumed =
      sub->add_option("--assume-cov-y-z", assumed_cov, "assumed Cov(Y, Z | X) when Y is unobserved");
  sub->add_flag("--additive-noise", additive_noise, "declare Y' = Y + independent noise");
  sub->add_option("--seed", seed, "recorded in metadata (computation is deterministic)");
  sub->add_option("--jobs", jobs, "accepted for interface parity; the check is single-pass");
  sub->add_option("--out", out, "also write the JSON report here");
  sub->add_option("--config", config_path, "key = value file overriding flags");

  app.parse(argc, argv);
  if (!sub->parsed()) return -1;

  bool have_alpha = o_alpha->count() > 0, have_beta = o_beta->count() > 0,
       have_gamma = o_gamma->count() > 0, have_delta = o_delta->count() > 0;
  have_assumed = o_assumed->count() > 0;

  if (!config_path.empty()) {
    apply_config_file(
        config_path,
        {{"alpha", [&](const std::string& v) { alpha = std::stod(v); have_alpha = true; }},
         {"beta", [&](const std::string& v) { beta = std::stod(v); have_beta = true; }},
         {"gamma", [&](const std::string& v) { gamma = std::stod(v); have_gamma = true; }},
         {"delta", [&](const std::string& v) { delta = std::stod(v); have_delta = true; }},
         {"data", [&](const std::string& v) { data_path = v; }},
         {"y-col", [&](const std::string& v) { y_col = v; }},
         {"yproxy-col", [&](const std::string& v) { yproxy_col = v; }},
         {"x-cols", [&](const std::string& v) { x_cols_text = v; }},
         {"z-col", [&](const std::string& v) { z_col = v; }},
         {"basis", [&](const std::string& v) { basis_text = v; }},
         {"assume-cov-y-z", [&](const std::string& v) { assumed_cov = std::stod(v); have_assumed = true; }},
         {"additive-noise", [&](const std::string& v) { additive_noise = v == "1" || v == "true"; }},
         {"seed", [&](const std::string& v) { seed = std::stoull(v); }},
         {"jobs", [&](const std::string& v) { jobs = std::stoi(v); }},
         {"out", [&](const std::string& v) { out = v; }}});
  }

  lb_basis basis;
  if (basis_text == "theorem1") {
    basis = LB_BASIS_THEOREM1;
  } else if (basis_text == "corollary1") {
    basis = LB_BASIS_COROLLARY1;
  } else {
    throw CliError{1, "unknown basis '" + basis_text + "' (use theorem1 or corollary1)"};
  }

  bool stylized = have_alpha || have_beta || have_gamma || have_delta;
  bool empirical = !data_path.empty();
  if (stylized == empirical) {
    throw CliError{1, "pass either --alpha/--beta/--gamma/--delta (analytic) or --data (empirical)"};
  }

  char* report = nullptr;
  json cfg;
  if (stylized) {
    if (!(have_alpha && have_beta && have_gamma && have_delta)) {
      throw CliError{1, "analytic mode needs all of --alpha --beta --gamma --delta"};
    }
    lb_stylized_params params{alpha, beta, gamma, delta};
    check(lb_criterion_check_stylized(params, basis, &report), "criterion-check");
    cfg = {{"mode", "analytic"}, {"alpha", alpha}, {"beta", beta},
           {"gamma", gamma},     {"delta", delta}, {"basis", basis_text},
           {"seed", seed},       {"jobs", jobs},   {"out", out}};
  } else {
    if (yproxy_col.empty() || z_col.empty() || x_cols_text.empty()) {
      throw CliError{1, "empirical mode needs --yproxy-col, --x-cols and --z-col"};
    }
    std::vector<std::string> x_cols;
    for (const std::string& c : split_on(x_cols_text, ',')) {
      if (!trim_ws(c).empty()) x_cols.push_back(trim_ws(c));
    }
    std::vector<const char*> x_ptrs;
    x_ptrs.reserve(x_cols.size());
    for (const auto& c : x_cols) x_ptrs.push_back(c.c_str());

    lb_dataset* data = nullptr;
    check(lb_dataset_read_csv(data_path.c_str(), &data), "criterion-check");

    lb_proxy_roles roles{};
    roles.true_label = y_col.empty() ? nullptr : y_col.c_str();
    roles.proxy_label = yproxy_col.c_str();
    roles.features = x_ptrs.data();
    roles.n_features = x_ptrs.size();
    roles.candidate = z_col.c_str();
    roles.assumed_cov_y_z_given_x = have_assumed ? &assumed_cov : nullptr;
    roles.additive_noise_declared = additive_noise ? 1 : 0;

    lb_status st = lb_criterion_check_dataset(data, &roles, basis, &report);
    lb_dataset_free(data);
    check(st, "criterion-check");
    cfg = {{"mode", "empirical"},
           {"data", data_path},
           {"y_col", y_col},
           {"yproxy_col", yproxy_col},
           {"x_cols", x_cols_text},
           {"z_col", z_col},
           {"basis", basis_text},
           {"assume_cov_y_z", have_assumed ? json(assumed_cov) : json(nullptr)},
           {"additive_noise", additive_noise},
           {"seed", seed},
           {"jobs", jobs},
           {"out", out}};
  }

  std::string report_str = report;
  lb_string_free(report);
  std::cout << report_str << "\n";
  if (!out.empty()) {
    write_text_file(out, report_str + "\n");
    write_sidecar(out, "criterion-check", cfg, {{"json", out}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feature exclusion under label bias"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lb_version());

  std::string subcommand = argc > 1 ? argv[1] : "";
  try {
    if (subcommand == "sem-sweep") return cmd_sem_sweep(app, argc, argv);
    if (subcommand == "arrest-sweep") return cmd_arrest_sweep(app, argc, argv);
    if (subcommand == "health-enroll") return cmd_health_enroll(app, argc, argv);
    if (subcommand == "criterion-check") return cmd_criterion_check(app, argc, argv);
    // let CLI11 produce help/usage for everything else
    app.add_subcommand("sem-sweep", "RMSE of simple vs complex models over beta");
    app.add_subcommand("arrest-sweep", "AUC of simple vs complex models over rho");
    app.add_subcommand("health-enroll", "care-management enrollment curves");
    app.add_subcommand("criterion-check", "feature-exclusion report (JSON)");
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CliError& e) {
    std::cerr << "labelbias: " << e.message << "\n";
    return e.code == 0 ? 1 : e.code;
  } catch (const std::exception& e) {
    std::cerr << "labelbias: " << e.what() << "\n";
    return 1;
  }
}
