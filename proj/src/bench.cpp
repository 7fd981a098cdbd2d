#include "vsrspa/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vsrspa/reconstruction.hpp"
#include "vsrspa/spa.hpp"

namespace vsrspa {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return item.key() == k; });
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  return j;
}

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ConfigError(what + " must be a positive integer");
  return j.get<std::size_t>();
}

std::vector<double> get_numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, what));
  return out;
}

}  // namespace

BenchConfig BenchConfig::parse(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, {"scenario", "algorithms", "grid_step_deg", "sweep"}, "config");

  BenchConfig c;
  if (root.contains("scenario")) {
    const json& s = require_object(root["scenario"], "scenario");
    reject_unknown(s, {"angles_deg", "snapshots", "snr_db", "seed", "noise"}, "scenario");
    if (s.contains("angles_deg")) c.angles_deg = get_numbers(s["angles_deg"], "scenario.angles_deg");
    if (s.contains("snapshots")) c.snapshots = get_count(s["snapshots"], "scenario.snapshots");
    if (s.contains("snr_db")) c.snr_db = get_number(s["snr_db"], "scenario.snr_db");
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) throw ConfigError("scenario.seed must be a nonnegative integer");
      c.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("noise")) {
      if (!s["noise"].is_boolean()) throw ConfigError("scenario.noise must be true or false");
      c.noise = s["noise"].get<bool>();
    }
  }
  if (root.contains("algorithms")) {
    const json& a = root["algorithms"];
    if (!a.is_array()) throw ConfigError("algorithms must be an array of names");
    c.algorithms.clear();
    for (const auto& name : a) {
      if (!name.is_string()) throw ConfigError("algorithms must be an array of names");
      try {
        c.algorithms.push_back(parse_algorithm(name.get<std::string>()));
      } catch (const InvalidInputError& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (root.contains("grid_step_deg")) c.grid_step_deg = get_number(root["grid_step_deg"], "grid_step_deg");
  if (root.contains("sweep")) {
    const json& s = require_object(root["sweep"], "sweep");
    reject_unknown(s, {"snr_db", "trials"}, "sweep");
    if (s.contains("snr_db")) c.snr_list = get_numbers(s["snr_db"], "sweep.snr_db");
    if (s.contains("trials")) c.trials = get_count(s["trials"], "sweep.trials");
  }
  c.validate();
  return c;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file " + path.string());
  return parse(text.str());
}

void BenchConfig::validate() const {
  if (angles_deg.empty()) throw ConfigError("scenario.angles_deg must list at least one angle");
  for (double a : angles_deg)
    if (!std::isfinite(a)) throw ConfigError("scenario.angles_deg must be finite");
  if (snapshots < 1) throw ConfigError("scenario.snapshots must be positive");
  if (!std::isfinite(snr_db)) throw ConfigError("scenario.snr_db must be finite");
  if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
  if (snr_list.empty()) throw ConfigError("sweep.snr_db must not be empty");
  for (double s : snr_list)
    if (!std::isfinite(s)) throw ConfigError("sweep.snr_db must be finite");
  if (trials < 1) throw ConfigError("sweep.trials must be positive");
  try {
    (void)grid();
    scenario(snr_db, seed).validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInputError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<AngleDeg> BenchConfig::angles() const {
  std::vector<AngleDeg> out;
  for (double a : angles_deg) out.emplace_back(a);
  return out;
}

Scenario BenchConfig::scenario(double snr, std::uint64_t scenario_seed) const {
  Scenario s = Scenario::equal_power(angles(), snr, snapshots, scenario_seed);
  s.noise_enabled = noise;
  return s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<SpectrumEntry> run_spectrum(const BenchConfig& config) {
  config.validate();
  const AngleGrid grid = config.grid();
  const Scenario scenario = config.scenario(config.snr_db, config.seed);
  const SnapshotBlock x = synthesize(scenario);
  std::vector<SpectrumEntry> out;
  for (Algorithm a : config.algorithms) {
    SpectrumEntry entry;
    entry.algorithm = a;
    try {
      const DoaEstimate est = estimate(a, x, scenario.source_count(), grid);
      entry.spectrum = est.spectrum->normalized();
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumEntry>& entries) {
  out << "angle_deg,algorithm,value\n";
  for (const SpectrumEntry& e : entries) {
    if (!e.spectrum) continue;
    const auto& grid = e.spectrum->grid();
    for (std::size_t i = 0; i < grid.size(); ++i)
      out << format_number(grid[i].deg()) << ',' << to_string(e.algorithm) << ','
          << format_number(e.spectrum->values()[i]) << '\n';
  }
}

SweepResult run_sweep(const BenchConfig& config, std::size_t threads) {
  config.validate();
  const AngleGrid grid = config.grid();
  const std::size_t n_snr = config.snr_list.size();
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t z_count = config.trials;
  const std::size_t items = n_snr * z_count;
  const std::size_t k = config.angles_deg.size();

  // slot (snr, trial, algorithm); empty optional marks a failed estimate
  std::vector<std::optional<TrialRecord>> slots(items * n_alg);

  auto work = [&](std::size_t item) {
    const std::size_t si = item / z_count;
    const std::size_t z = item % z_count;
    const double snr = config.snr_list[si];
    const Scenario scenario = config.scenario(snr, derive_seed(config.seed, si, z));
    const SnapshotBlock x = synthesize(scenario);
    for (std::size_t ai = 0; ai < n_alg; ++ai) {
      const Algorithm a = config.algorithms[ai];
      try {
        const DoaEstimate est = estimate(a, x, k, grid);
        TrialRecord r;
        r.true_angles = scenario.angles;
        r.est_angles = est.angles;
        r.resolved = est.resolved;
        r.algorithm = std::string(to_string(a));
        r.snr_db = snr;
        r.trial_index = z;
        slots[item * n_alg + ai] = std::move(r);
      } catch (const Error&) {
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, items);
  if (threads <= 1) {
    for (std::size_t i = 0; i < items; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < items; i = next++) work(i);
      });
  }

  SweepResult result;
  for (std::size_t si = 0; si < n_snr; ++si)
    for (std::size_t ai = 0; ai < n_alg; ++ai) {
      SweepRow row;
      row.snr_db = config.snr_list[si];
      row.algorithm = config.algorithms[ai];
      std::vector<TrialRecord> ok;
      std::size_t resolved = 0;
      for (std::size_t z = 0; z < z_count; ++z) {
        auto& slot = slots[(si * z_count + z) * n_alg + ai];
        if (!slot) {
          ++row.failures;
          continue;
        }
        if (resolution_indicator(*slot)) ++resolved;
        ok.push_back(*slot);
      }
      row.trials = ok.size();
      row.rmse_deg = ok.empty() ? std::numeric_limits<double>::quiet_NaN() : rmse(ok);
      row.resolution_prob = static_cast<double>(resolved) / static_cast<double>(z_count);
      result.rows.push_back(row);
      result.records.insert(result.records.end(), std::make_move_iterator(ok.begin()),
                            std::make_move_iterator(ok.end()));
    }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "snr_db,algorithm,rmse_deg,resolution_prob,trials,failures\n";
  for (const SweepRow& r : result.rows)
    out << format_number(r.snr_db) << ',' << to_string(r.algorithm) << ','
        << format_number(r.rmse_deg) << ',' << format_number(r.resolution_prob) << ','
        << r.trials << ',' << r.failures << '\n';
}

namespace {

SelfTestCheck check(std::string name, double value, double tolerance) {
  SelfTestCheck c;
  c.name = std::move(name);
  c.passed = value <= tolerance;
  c.detail = "value " + format_number(value) + ", tolerance " + format_number(tolerance);
  return c;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

}  // namespace

std::vector<SelfTestCheck> run_selftest() {
  std::vector<SelfTestCheck> checks;
  const CMatrix& g = g_matrix();

  const std::array<double, 3> noise = {1.0, 0.5, 0.5};
  const CMatrix white = g * HermitianMatrix::diagonal(noise).matrix() * g.adjoint();
  checks.push_back(check("whitening G diag(1,1/2,1/2) G^H = I", max_abs_diff(white, CMatrix::identity(3)), 1e-15));

  double steer = 0.0;
  for (int i = 0; i < 3600; ++i) {
    const AngleDeg theta(-180.0 + 0.1 * i);
    const RealVec3 a = steering_vector(theta);
    const ComplexVec3 phi = reconstructed_steering(theta);
    double d = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
      Complex ga{};
      for (std::size_t c = 0; c < 3; ++c) ga += g(r, c) * a[c];
      d += std::norm(phi[r] - ga);
    }
    steer = std::max(steer, std::sqrt(d));
  }
  checks.push_back(check("steering phi(theta) = G a(theta)", steer, 1e-13));

  Scenario sc = Scenario::equal_power({AngleDeg(-30.0), AngleDeg(20.0)}, 3.0, 1, 0);
  const HermitianMatrix ry = reconstructed_covariance(analytic_covariance(sc));
  checks.push_back(check("reconstructed covariance is Toeplitz", toeplitz_defect(ry), 1e-12));

  try {
    const SdpSolution s = solve_block_sdp(HermitianMatrix::identity(3), HermitianMatrix::identity(3));
    const double err = std::max({std::abs(s.u_opt.u1 - 1.0), std::abs(s.u_opt.u2),
                                 std::abs(s.u_opt.u3), std::abs(s.objective - 6.0)});
    checks.push_back(check("SDP with B = W = I gives u = (1, 0, 0)", err, 1e-6));
    const FitReport fit = fit_spa(ry, 1000);
    checks.push_back(check("SPA recovers an exact Toeplitz covariance",
                           max_abs_diff(fit.fitted().matrix(), ry.matrix()), 1e-6));
  } catch (const Error& e) {
    checks.push_back({"SDP solver", false, e.what()});
  }
  return checks;
}

}  // namespace vsrspa
