#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace fs = std::filesystem;
using ucld::test::data_path;
using ucld::test::write_temp_file;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(UCLD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("solve writes artifacts and reports feasibility in the exit code") {
  const fs::path out = fresh_dir("ucld_cli_solve");
  const int rc = run_cli("solve " + data_path("tiny2.inst").string() +
                         " --pop 20 --gens 200 --seed 1 --out " + out.string());
  CHECK(rc == 0);
  CHECK(fs::exists(out / "schedule.csv"));
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "trace.csv"));
  const std::string report = slurp(out / "report.json");
  CHECK(report.find("\"feasible\": true") != std::string::npos);
}

TEST_CASE("identical seeds reproduce identical artifacts") {
  const fs::path a = fresh_dir("ucld_cli_det_a");
  const fs::path b = fresh_dir("ucld_cli_det_b");
  const std::string common = "solve " + data_path("tiny2.inst").string() +
                             " --pop 16 --gens 120 --seed 7 --out ";
  REQUIRE(run_cli(common + a.string()) == 0);
  REQUIRE(run_cli(common + b.string()) == 0);
  CHECK(slurp(a / "schedule.csv") == slurp(b / "schedule.csv"));
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("missing instance file exits with 1") {
  CHECK(run_cli("solve /nonexistent/foo.inst --pop 8 --gens 5") == 1);
}

TEST_CASE("unserviceable demand exits with 2 and a positive supply penalty") {
  const auto inst = write_temp_file(
      "ucld_cli_overload.inst",
      R"({"thermal": [{"g_min": 1, "g_max": 5, "mdt": 0}],
          "demand": {"net_demand": [8, 8], "alpha": 0, "beta": 0}})");
  const fs::path out = fresh_dir("ucld_cli_overload");
  const int rc = run_cli("solve " + inst.string() +
                         " --pop 12 --gens 60 --seed 1 --out " + out.string());
  CHECK(rc == 2);
  const std::string report = slurp(out / "report.json");
  CHECK(report.find("\"feasible\": false") != std::string::npos);
  // 3 p.u. short in each of the two hours.
  CHECK(report.find("\"supply_residual_sum\": 6.0") != std::string::npos);
}

TEST_CASE("oracle command") {
  const fs::path out = fresh_dir("ucld_cli_oracle");
  SUBCASE("prints the optimum and exits 0") {
    CHECK(run_cli("oracle " + data_path("tiny2.inst").string() + " --out " +
                  out.string()) == 0);
    CHECK(fs::exists(out / "oracle_schedule.csv"));
  }
  SUBCASE("budget violations exit 3") {
    CHECK(run_cli("oracle " + data_path("tiny2.inst").string() +
                  " --budget 3 --out " + out.string()) == 3);
  }
}

TEST_CASE("plot data emits supply and reserve curves") {
  const fs::path out = fresh_dir("ucld_cli_plot");
  REQUIRE(run_cli("solve " + data_path("tinyhydro.inst").string() +
                  " --pop 16 --gens 100 --seed 2 --plot-data --out " +
                  out.string()) != 1);
  CHECK(fs::exists(out / "plot_supply.csv"));
  CHECK(fs::exists(out / "plot_reserve.csv"));
  const std::string supply = slurp(out / "plot_supply.csv");
  CHECK(supply.find("t,net_demand,thermal_total,hydro_total,supply_total") !=
        std::string::npos);
}

TEST_CASE("batch summarizes runs and excludes infeasible ones from stats") {
  const fs::path out = fresh_dir("ucld_cli_batch");
  const int rc = run_cli("batch " + data_path("tiny2.inst").string() +
                         " --runs 3 --seed-base 1 --pop 16 --gens 150 --out " +
                         out.string());
  CHECK(rc == 0);
  const std::string csv = slurp(out / "batch.csv");
  CHECK(csv.find("seed,cost,fitness,total_penalty,reserve_penalty,feasible") !=
        std::string::npos);
  // Header plus three data rows.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const std::string summary = slurp(out / "batch_summary.json");
  CHECK(summary.find("\"runs\": 3") != std::string::npos);
  CHECK(summary.find("feasible_rate_percent") != std::string::npos);
}
