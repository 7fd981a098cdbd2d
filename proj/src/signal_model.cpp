#include "vsrspa/signal_model.hpp"

#include <cmath>
#include <numbers>

namespace vsrspa {

double AngleDeg::normalize(double degrees) {
  if (!std::isfinite(degrees)) throw InvalidInputError("AngleDeg: non-finite angle");
  double v = std::fmod(degrees + 180.0, 360.0);
  if (v < 0.0) v += 360.0;
  v -= 180.0;
  // fmod can land exactly on 180 after the shift for tiny negative inputs.
  return v >= 180.0 ? v - 360.0 : v;
}

double AngleDeg::rad() const noexcept { return value_ * std::numbers::pi / 180.0; }

Scenario Scenario::equal_power(std::vector<AngleDeg> angles, double snr_db,
                               std::size_t snapshots, std::uint64_t seed) {
  Scenario s;
  s.source_powers.assign(angles.size(), snr_db_to_power(snr_db));
  s.angles = std::move(angles);
  s.snr_db = snr_db;
  s.snapshots = snapshots;
  s.seed = seed;
  return s;
}

void Scenario::validate() const {
  if (source_powers.size() != angles.size())
    throw InvalidInputError("Scenario: angles and source_powers differ in length");
  for (double p : source_powers)
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInputError("Scenario: source powers must be positive");
  for (std::size_t i = 0; i < angles.size(); ++i)
    for (std::size_t j = i + 1; j < angles.size(); ++j)
      if (angles[i] == angles[j]) throw InvalidInputError("Scenario: angles must be distinct");
  if (snapshots < 1) throw InvalidInputError("Scenario: need at least one snapshot");
  if (!(noise.sigma_n2 > 0.0)) throw InvalidInputError("Scenario: noise power must be positive");
}

SnapshotBlock::SnapshotBlock(CMatrix data) : data_(std::move(data)) {
  if (data_.rows() != 3 || data_.cols() < 1)
    throw InvalidInputError("SnapshotBlock: expected a 3 x T matrix with T >= 1");
  if (!all_finite(data_)) throw InvalidInputError("SnapshotBlock: non-finite sample");
}

double Rng::uniform_open() {
  // 53 random mantissa bits mapped onto (0, 1].
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

Complex Rng::complex_gaussian(double variance) {
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  const double scale = std::sqrt(0.5 * variance);
  return {scale * r * std::cos(phi), scale * r * std::sin(phi)};
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

RealVec3 steering_vector(AngleDeg theta) {
  const double t = theta.rad();
  return {1.0, std::cos(t), std::sin(t)};
}

double snr_db_to_power(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

SnapshotBlock synthesize(const Scenario& scenario) {
  Rng rng(derive_seed(scenario.seed, 0, 0));
  return synthesize(scenario, rng);
}

SnapshotBlock synthesize(const Scenario& scenario, Rng& rng) {
  scenario.validate();
  const std::size_t k_count = scenario.source_count();
  const std::size_t t_count = scenario.snapshots;
  std::vector<RealVec3> steer;
  steer.reserve(k_count);
  for (const auto& a : scenario.angles) steer.push_back(steering_vector(a));
  const RealVec3 noise_var = scenario.noise.channel_variances();

  CMatrix x(3, t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    for (std::size_t k = 0; k < k_count; ++k) {
      const Complex s = rng.complex_gaussian(scenario.source_powers[k]);
      for (std::size_t ch = 0; ch < 3; ++ch) x(ch, t) += steer[k][ch] * s;
    }
    if (scenario.noise_enabled)
      for (std::size_t ch = 0; ch < 3; ++ch) x(ch, t) += rng.complex_gaussian(noise_var[ch]);
  }
  return SnapshotBlock(std::move(x));
}

HermitianMatrix analytic_covariance(const Scenario& scenario) {
  scenario.validate();
  CMatrix r(3, 3);
  for (std::size_t k = 0; k < scenario.source_count(); ++k) {
    const RealVec3 a = steering_vector(scenario.angles[k]);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) r(i, j) += scenario.source_powers[k] * a[i] * a[j];
  }
  if (scenario.noise_enabled) {
    const RealVec3 v = scenario.noise.channel_variances();
    for (std::size_t i = 0; i < 3; ++i) r(i, i) += v[i];
  }
  return HermitianMatrix(r);
}

HermitianMatrix sample_covariance(const CMatrix& x) {
  if (x.cols() < 1) throw InvalidInputError("sample_covariance: no snapshots");
  const std::size_t n = x.rows();
  CMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Complex acc{};
      for (std::size_t t = 0; t < x.cols(); ++t) acc += x(i, t) * std::conj(x(j, t));
      r(i, j) = acc / static_cast<double>(x.cols());
      r(j, i) = std::conj(r(i, j));
    }
  return HermitianMatrix(r);
}

HermitianMatrix sample_covariance(const SnapshotBlock& x) { return sample_covariance(x.matrix()); }

}  // namespace vsrspa
