#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <random>
#include <vector>

#include "vsrspa/numerics.hpp"

namespace vsrspa {

/// Azimuth in degrees, normalized into [-180, 180).
class AngleDeg {
 public:
  constexpr AngleDeg() = default;
  explicit AngleDeg(double degrees) : value_(normalize(degrees)) {}

  double deg() const noexcept { return value_; }
  double rad() const noexcept;

  static double normalize(double degrees);

  auto operator<=>(const AngleDeg&) const = default;

 private:
  double value_ = 0.0;
};

using RealVec3 = std::array<double, 3>;
using ComplexVec3 = std::array<Complex, 3>;

/// Per-channel noise variances (p, vx, vy) = (σ², σ²/2, σ²/2).
struct NoiseModel {
  double sigma_n2 = 1.0;

  RealVec3 channel_variances() const { return {sigma_n2, 0.5 * sigma_n2, 0.5 * sigma_n2}; }
};

struct Scenario {
  std::vector<AngleDeg> angles;
  std::vector<double> source_powers;
  double snr_db = 0.0;
  std::size_t snapshots = 1;
  std::uint64_t seed = 0;
  NoiseModel noise;
  /// Diagnostic switch: false drops the noise term entirely.
  bool noise_enabled = true;

  /// Equal-power sources at 10^(snr_db/10) over unit pressure-channel noise.
  static Scenario equal_power(std::vector<AngleDeg> angles, double snr_db,
                              std::size_t snapshots, std::uint64_t seed);

  std::size_t source_count() const noexcept { return angles.size(); }

  /// Throws InvalidInputError when the invariants do not hold.
  void validate() const;
};

/// 3 x T received data, rows ordered (p, vx, vy).
class SnapshotBlock {
 public:
  explicit SnapshotBlock(CMatrix data);

  std::size_t snapshots() const noexcept { return data_.cols(); }
  const CMatrix& matrix() const noexcept { return data_; }

  friend SnapshotBlock operator*(Complex s, const SnapshotBlock& x) {
    return SnapshotBlock(s * x.data_);
  }

 private:
  CMatrix data_;
};

/// Explicitly threaded random source. Draws use mt19937_64 for the bits and
/// a hand-written Box-Muller transform so the stream is identical on every
/// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform_open();                 // (0, 1]
  Complex complex_gaussian(double variance);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64-style mixing of a base seed with two stream indices.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

RealVec3 steering_vector(AngleDeg theta);

double snr_db_to_power(double snr_db);

SnapshotBlock synthesize(const Scenario& scenario);
SnapshotBlock synthesize(const Scenario& scenario, Rng& rng);

/// Σ σ_k² a(θ_k) a(θ_k)^T + diag(σ², σ²/2, σ²/2)
HermitianMatrix analytic_covariance(const Scenario& scenario);

/// (1/T) X X^H
HermitianMatrix sample_covariance(const CMatrix& x);
HermitianMatrix sample_covariance(const SnapshotBlock& x);

}  // namespace vsrspa
