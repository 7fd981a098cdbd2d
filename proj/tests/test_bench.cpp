#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vsrspa/bench.hpp"

using namespace vsrspa;
namespace fs = std::filesystem;

namespace {

std::string sweep_csv(const BenchConfig& c, std::size_t threads) {
  std::ostringstream out;
  write_sweep_csv(out, run_sweep(c, threads));
  return out.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VSRSPA_BENCH_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

BenchConfig small_sweep() {
  BenchConfig c;
  c.angles_deg = {-30.0};
  c.snapshots = 100;
  c.snr_list = {0.0, 10.0};
  c.trials = 6;
  c.algorithms = {Algorithm::music, Algorithm::vsrspa, Algorithm::spice_plus};
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const BenchConfig d = BenchConfig::parse("{}");
  CHECK(d.angles_deg == std::vector<double>{-30.0});
  CHECK(d.snapshots == 1000);
  CHECK(d.seed == 1);
  CHECK(d.trials == 100);
  CHECK(d.algorithms == all_algorithms());
  CHECK(d.snr_list.size() == 11);

  const BenchConfig c = BenchConfig::parse(R"({
    "scenario": {"angles_deg": [-30, 20], "snapshots": 50, "snr_db": 0, "seed": 9, "noise": false},
    "algorithms": ["music", "spice+"],
    "grid_step_deg": 0.5,
    "sweep": {"snr_db": [0, 5], "trials": 3}
  })");
  CHECK(c.angles_deg == std::vector<double>{-30.0, 20.0});
  CHECK(c.snapshots == 50);
  CHECK(c.seed == 9);
  CHECK_FALSE(c.noise);
  CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::music, Algorithm::spice_plus});
  CHECK(c.grid().size() == 720);
  CHECK(c.trials == 3);

  for (const char* bad : {
           "not json", "[]", R"({"extra": 1})", R"({"scenario": {"angle": [1]}})",
           R"({"scenario": {"angles_deg": []}})", R"({"scenario": {"angles_deg": [10, 370]}})",
           R"({"scenario": {"snapshots": 0}})", R"({"scenario": {"snapshots": 1.5}})",
           R"({"scenario": {"seed": -1}})", R"({"algorithms": ["esprit"]})", R"({"algorithms": []})",
           R"({"grid_step_deg": 0.7})", R"({"sweep": {"trials": 0}})", R"({"sweep": {"snr_db": "x"}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(BenchConfig::parse(bad), ConfigError);
  }
  CHECK_THROWS_AS(BenchConfig::load("/nonexistent/config.json"), IoError);
}

TEST_CASE("shipped configs load") {
  for (const auto& entry : fs::directory_iterator(VSRSPA_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(BenchConfig::load(entry.path()));
  }
}

TEST_CASE("format_number") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.123456789) == "0.123457");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-180.0) == "-180");
}

TEST_CASE("sweep output") {
  const BenchConfig c = small_sweep();
  const SweepResult r = run_sweep(c, 1);
  CHECK(r.rows.size() == 6);
  CHECK(r.records.size() == 2 * 6 * 3);
  for (const SweepRow& row : r.rows) {
    CHECK(row.trials + row.failures == 6);
    CHECK(row.resolution_prob >= 0.0);
    CHECK(row.resolution_prob <= 1.0);
  }
  const std::string csv = sweep_csv(c, 1);
  CHECK(csv.rfind("snr_db,algorithm,rmse_deg,resolution_prob,trials,failures\n", 0) == 0);
  CHECK(line_count(csv) == 7);
}

TEST_CASE("sweep does not depend on the thread count") {
  BenchConfig c = small_sweep();
  c.angles_deg = {-30.0, 20.0};
  c.algorithms = {Algorithm::vsrspa, Algorithm::iaa};
  CHECK(sweep_csv(c, 1) == sweep_csv(c, 3));
}

TEST_CASE("noiseless sweep is exact") {
  BenchConfig c;
  c.noise = false;
  c.snapshots = 100;
  c.snr_list = {10.0};
  c.trials = 1;
  c.algorithms = {Algorithm::vsrspa};
  const SweepResult r = run_sweep(c, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].rmse_deg == 0.0);
  CHECK(r.rows[0].resolution_prob == 1.0);
}

TEST_CASE("single-source error falls with SNR") {
  BenchConfig c;
  c.snr_list = {-10.0, 0.0, 10.0};
  c.trials = 100;
  c.algorithms = {Algorithm::vsrspa};
  const SweepResult r = run_sweep(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].rmse_deg > r.rows[1].rmse_deg);
  CHECK(r.rows[1].rmse_deg > r.rows[2].rmse_deg);
}

TEST_CASE("spectrum run") {
  BenchConfig c;
  c.angles_deg = {-30.0, 20.0};
  c.snapshots = 200;
  const auto a = run_spectrum(c);
  const auto b = run_spectrum(c);
  REQUIRE(a.size() == all_algorithms().size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(to_string(a[i].algorithm));
    REQUIRE(a[i].spectrum.has_value());
    CHECK(a[i].spectrum->values() == b[i].spectrum->values());
    const auto& v = a[i].spectrum->values();
    CHECK(*std::max_element(v.begin(), v.end()) == 1.0);
  }
  std::ostringstream out;
  write_spectrum_csv(out, a);
  CHECK(out.str().rfind("angle_deg,algorithm,value\n", 0) == 0);
  CHECK(line_count(out.str()) == 1 + 360 * a.size());
}

TEST_CASE("selftest passes") {
  for (const SelfTestCheck& c : run_selftest()) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}

TEST_CASE("command line exit codes") {
  const fs::path good = temp_file("vsrspa_test_good.json");
  const fs::path bad = temp_file("vsrspa_test_bad.json");
  const fs::path out = temp_file("vsrspa_test_out.csv");
  std::ofstream(good) << R"({"scenario": {"snapshots": 50}, "algorithms": ["music"],
                            "sweep": {"snr_db": [0], "trials": 2}})";
  std::ofstream(bad) << R"({"scenario": {"snapshots": -5}})";

  CHECK(run_cli("selftest") == 0);
  CHECK(run_cli("spectrum --config " + good.string() + " --out " + out.string()) == 0);
  CHECK(fs::file_size(out) > 0);
  CHECK(run_cli("sweep --config " + good.string() + " --out " + out.string() + " --threads 2") == 0);
  CHECK(run_cli("sweep --config " + bad.string() + " --out " + out.string()) == 2);
  CHECK(run_cli("sweep --config /nonexistent.json --out " + out.string()) == 3);
  CHECK(run_cli("spectrum --config " + good.string() + " --out /nonexistent/dir/x.csv") == 3);
  CHECK(run_cli("") != 0);

  fs::remove(good);
  fs::remove(bad);
  fs::remove(out);
}
