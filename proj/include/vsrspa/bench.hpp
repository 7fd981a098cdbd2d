#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vsrspa/estimators.hpp"
#include "vsrspa/metrics.hpp"

namespace vsrspa {

/// Benchmark configuration, read from JSON:
///
///   {
///     "scenario": {"angles_deg": [-30, 20], "snapshots": 1000,
///                  "snr_db": 10, "seed": 1, "noise": true},
///     "algorithms": ["cbf", "mvdr", "music", "iaa", "spice", "spice+", "vsrspa"],
///     "grid_step_deg": 1,
///     "sweep": {"snr_db": [-10, -8, ..., 10], "trials": 100}
///   }
///
/// Every key is optional; missing ones take the defaults below. Unknown keys
/// are rejected.
struct BenchConfig {
  std::vector<double> angles_deg{-30.0};
  std::size_t snapshots = 1000;
  double snr_db = 10.0;
  std::uint64_t seed = 1;
  bool noise = true;
  std::vector<Algorithm> algorithms = all_algorithms();
  double grid_step_deg = 1.0;
  std::vector<double> snr_list = {-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10};
  std::size_t trials = 100;

  static constexpr std::size_t kFullTrials = 400;

  /// Throws ConfigError.
  static BenchConfig parse(const std::string& json_text);
  /// Throws IoError if the file cannot be read, ConfigError if it is invalid.
  static BenchConfig load(const std::filesystem::path& path);

  void validate() const;
  AngleGrid grid() const { return AngleGrid::full_circle(grid_step_deg); }
  std::vector<AngleDeg> angles() const;
  Scenario scenario(double snr, std::uint64_t scenario_seed) const;
};

struct SpectrumEntry {
  Algorithm algorithm = Algorithm::vsrspa;
  std::optional<SpatialSpectrum> spectrum;  // normalised to unit maximum
  std::optional<std::string> error;
};

/// One data block, every configured algorithm's spectrum on it.
std::vector<SpectrumEntry> run_spectrum(const BenchConfig& config);

/// angle_deg,algorithm,value
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumEntry>& entries);

struct SweepRow {
  double snr_db = 0.0;
  Algorithm algorithm = Algorithm::vsrspa;
  double rmse_deg = 0.0;  // NaN if every trial failed
  double resolution_prob = 0.0;
  std::size_t trials = 0;  // trials that produced an estimate
  std::size_t failures = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // SNR-major, algorithms in config order
  std::vector<TrialRecord> records;
};

/// Monte Carlo sweep. Trial z at SNR index i draws its data from
/// derive_seed(seed, i, z), and every algorithm sees the same data, so the
/// result does not depend on the thread count. threads == 0 means one per
/// hardware thread.
SweepResult run_sweep(const BenchConfig& config, std::size_t threads = 0);

/// snr_db,algorithm,rmse_deg,resolution_prob,trials,failures
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// %.6g
std::string format_number(double v);

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Analytic identities that must hold exactly or to rounding.
std::vector<SelfTestCheck> run_selftest();

}  // namespace vsrspa
