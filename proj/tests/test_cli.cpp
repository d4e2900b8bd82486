#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "test_helpers.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args, const std::string& redirect = "2>&1") {
  std::string cmd = std::string(LB_CLI_PATH) + " " + args + " " + redirect;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
  int rc = pclose(pipe);
  return {WEXITSTATUS(rc), output};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("missing required seed fails with usage text") {
  RunResult r = run("sem-sweep --out cli_noseed.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("--seed") != std::string::npos);
  CHECK(!file_exists("cli_noseed.csv"));
}

TEST_CASE("unknown subcommand fails") {
  CHECK(run("florble --seed 1").exit_code != 0);
  CHECK(run("").exit_code != 0);
}

TEST_CASE("version flag") {
  RunResult r = run("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("criterion-check analytic prints a decision") {
  RunResult r = run("criterion-check --alpha 0.4 --beta 0 --gamma 0.4 --delta 0.4",
                    "2>/dev/null");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["decision"] == "ExcludeZ");
  CHECK(j["basis"] == "corollary1");
  CHECK(j["mode"] == "analytic");

  RunResult large_beta =
      run("criterion-check --alpha 0.4 --beta 0.4 --gamma 0.4 --delta 0.4", "2>/dev/null");
  REQUIRE(large_beta.exit_code == 0);
  CHECK(nlohmann::json::parse(large_beta.output)["decision"] != "ExcludeZ");

  RunResult theorem = run(
      "criterion-check --alpha 0.4 --beta 0 --gamma 0.4 --delta 0.4 --basis theorem1",
      "2>/dev/null");
  REQUIRE(theorem.exit_code == 0);
  CHECK(nlohmann::json::parse(theorem.output)["basis"] == "theorem1");
}

TEST_CASE("criterion-check rejects half-specified modes") {
  CHECK(run("criterion-check --alpha 0.4 --beta 0").exit_code != 0);
  CHECK(run("criterion-check").exit_code != 0);
  CHECK(run("criterion-check --basis nope --alpha .4 --beta 0 --gamma .4 --delta .4").exit_code !=
        0);
}

TEST_CASE("criterion-check empirical mode over a CSV") {
  TempFile csv("cli_criterion_data.csv");
  {
    std::ofstream f(csv.path);
    f << "y,yp,x,z\n";
    labelbias::Rng rng(11);
    for (int i = 0; i < 4000; ++i) {
      double x = rng.normal(), z = rng.normal();
      double y = x - 0.5 * z + 0.3 * rng.normal();
      double yp = x + 0.5 * z + 0.3 * rng.normal();
      f << y << "," << yp << "," << x << "," << z << "\n";
    }
  }
  RunResult r = run("criterion-check --data " + csv.path +
                        " --y-col y --yproxy-col yp --x-cols x --z-col z",
                    "2>/dev/null");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["mode"] == "empirical");
  CHECK(j["decision"] == "ExcludeZ");

  // a role column the file does not have
  RunResult miss = run("criterion-check --data " + csv.path +
                       " --y-col y --yproxy-col yp --x-cols x --z-col nope");
  CHECK(miss.exit_code != 0);
  CHECK(miss.output.find("nope") != std::string::npos);
}

TEST_CASE("sem-sweep writes the table and its sidecar") {
  TempFile csv("cli_sem.csv");
  TempFile meta("cli_sem.csv.meta.json");
  RunResult r = run("sem-sweep --beta-grid 0,0.2 --n-train 3000 --n-test 3000 --seed 5 --out " +
                    csv.path);
  REQUIRE(r.exit_code == 0);
  std::string table = read_file(csv.path);
  CHECK(table.rfind("param,value,model,label,metric,metric_value,stderr,n_train,n_test,seed\n",
                    0) == 0);
  CHECK(table.find("beta,0.2,simple,true,rmse,") != std::string::npos);

  auto j = nlohmann::json::parse(read_file(meta.path));
  CHECK(j["command"] == "sem-sweep");
  CHECK(j["config"]["seed"] == 5);
  CHECK(j["config"]["n_train"] == 3000);
  CHECK(j["tool"]["version"] == "0.1.0");
}

TEST_CASE("grids accept start:step:end ranges") {
  TempFile csv("cli_range.csv");
  TempFile meta("cli_range.csv.meta.json");
  RunResult r = run("sem-sweep --beta-grid 0:0.1:0.2 --n-train 1000 --n-test 1000 --seed 3 --out " +
                    csv.path);
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(read_file(meta.path));
  CHECK(j["config"]["beta_grid"] == nlohmann::json::array({0.0, 0.1, 0.2}));
  std::string table = read_file(csv.path);
  CHECK(table.find("beta,0.1,") != std::string::npos);
  CHECK(table.find("beta,0.2,") != std::string::npos);
}

TEST_CASE("sem-sweep refuses an infeasible grid point and names the constraint") {
  RunResult r = run("sem-sweep --beta-grid 0.9 --seed 5 --out cli_bad.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("beta^2 + delta") != std::string::npos);
  CHECK(!file_exists("cli_bad.csv"));
}

TEST_CASE("reruns and worker counts leave the table byte-identical") {
  TempFile a("cli_det_a.csv"), am("cli_det_a.csv.meta.json");
  TempFile b("cli_det_b.csv"), bm("cli_det_b.csv.meta.json");
  TempFile c("cli_det_c.csv"), cm("cli_det_c.csv.meta.json");
  std::string common = "sem-sweep --beta-grid 0,0.2 --n-train 2000 --n-test 2000 --seed 42 ";
  REQUIRE(run(common + "--jobs 1 --out " + a.path).exit_code == 0);
  REQUIRE(run(common + "--jobs 1 --out " + b.path).exit_code == 0);
  REQUIRE(run(common + "--jobs 4 --out " + c.path).exit_code == 0);
  CHECK(read_file(a.path) == read_file(b.path));
  CHECK(read_file(a.path) == read_file(c.path));
  // identical command -> identical sidecar bytes
  std::string meta_a = read_file(am.path);
  std::string meta_b = read_file(bm.path);
  auto ja = nlohmann::json::parse(meta_a);
  auto jb = nlohmann::json::parse(meta_b);
  ja["config"].erase("out");
  jb["config"].erase("out");
  ja.erase("outputs");
  jb.erase("outputs");
  CHECK(ja == jb);
}

TEST_CASE("config file overrides flags") {
  TempFile cfg("cli_override.conf");
  {
    std::ofstream f(cfg.path);
    f << "# override the command line\nseed = 9\nn-train = 1500\n";
  }
  TempFile csv("cli_cfg.csv");
  TempFile meta("cli_cfg.csv.meta.json");
  RunResult r = run("sem-sweep --beta-grid 0 --n-train 3000 --n-test 1000 --seed 5 --config " +
                    cfg.path + " --out " + csv.path);
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(read_file(meta.path));
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["config"]["n_train"] == 1500);
  CHECK(j["config"]["n_test"] == 1000);  // untouched by the file

  TempFile bad("cli_badkey.conf");
  {
    std::ofstream f(bad.path);
    f << "no-such-option = 3\n";
  }
  CHECK(run("sem-sweep --beta-grid 0 --seed 5 --config " + bad.path + " --out x.csv").exit_code !=
        0);
}

TEST_CASE("arrest-sweep runs end to end at a small scale") {
  TempFile csv("cli_arrest.csv");
  TempFile meta("cli_arrest.csv.meta.json");
  TempFile dump("cli_arrest_data.csv");
  RunResult r = run("arrest-sweep --n 3000 --rho-grid -0.5,0.5 --n-sim 3 --seed 8 --dump-data " +
                    dump.path + " --out " + csv.path);
  REQUIRE(r.exit_code == 0);
  CHECK(read_file(csv.path).find("rho,-0.5,simple,true,auc,") != std::string::npos);
  auto j = nlohmann::json::parse(read_file(meta.path));
  CHECK(j["config"]["synthetic_data"] == true);
  CHECK(j["config"]["n"] == 3000);

  std::string data = read_file(dump.path);
  CHECK(data.rfind("age,high_policing,past_behavior,prior_arrests,future_arrest\n", 0) == 0);

  // reuse the dumped surrogate as input
  TempFile csv2("cli_arrest2.csv");
  TempFile meta2("cli_arrest2.csv.meta.json");
  RunResult r2 = run("arrest-sweep --input " + dump.path +
                     " --rho-grid -0.5,0.5 --n-sim 3 --seed 8 --out " + csv2.path);
  REQUIRE(r2.exit_code == 0);
  CHECK(read_file(csv2.path) == read_file(csv.path));
  CHECK(nlohmann::json::parse(read_file(meta2.path))["config"]["synthetic_data"] == false);

  CHECK(run("arrest-sweep --input /no/such.csv --seed 1 --out cli_x.csv").exit_code != 0);
}

TEST_CASE("health-enroll runs on the fixture") {
  TempFile fixture("cli_health.csv");
  testutil::write_health_fixture(fixture.path, 600, 99);
  TempFile csv("cli_enroll.csv");
  TempFile meta("cli_enroll.csv.meta.json");

  RunResult r = run("health-enroll --data " + fixture.path + " --seed 2 --out " + csv.path);
  REQUIRE(r.exit_code == 0);
  CHECK(read_file(csv.path).rfind("capacity,model,n_enrolled,high_needs_enrolled,black_fraction\n",
                                  0) == 0);
  auto j = nlohmann::json::parse(read_file(meta.path));
  CHECK(j["config"]["n_current_health"] == 128);
  CHECK(j["config"]["n_demographics"] == 8);
  CHECK(j["config"]["n_past_cost"] == 14);

  // capacity outside (0, 1]
  CHECK(run("health-enroll --data " + fixture.path + " --capacity-grid 0.5,1.5 --seed 2 --out " +
            csv.path)
            .exit_code != 0);

  // column map that forgets the race column
  TempFile map("cli_norace.map");
  {
    std::ofstream f(map.path);
    f << "cost_t = future_cost\ngagne_sum_t = chronic_count\ndem_female = demographics\n"
      << "dem_age_band_* = demographics\ncost_*_tm1 = past_cost\n*_tm1 = current_health\n";
  }
  RunResult norace = run("health-enroll --data " + fixture.path + " --column-map " + map.path +
                         " --seed 2 --out cli_y.csv");
  CHECK(norace.exit_code != 0);
  CHECK(norace.output.find("race") != std::string::npos);

  CHECK(run("health-enroll --data /no/such.csv --seed 2 --out cli_z.csv").exit_code != 0);
}

TEST_CASE("criterion-check writes report and sidecar when asked") {
  TempFile out("cli_report.json");
  TempFile meta("cli_report.json.meta.json");
  RunResult r = run("criterion-check --alpha 0.4 --beta 0 --gamma 0.4 --delta 0.4 --out " +
                        out.path,
                    "2>/dev/null");
  REQUIRE(r.exit_code == 0);
  auto file_report = nlohmann::json::parse(read_file(out.path));
  auto stdout_report = nlohmann::json::parse(r.output);
  CHECK(file_report == stdout_report);
  CHECK(nlohmann::json::parse(read_file(meta.path))["command"] == "criterion-check");
}
