#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsrspa/numerics.hpp"
#include "vsrspa/signal_model.hpp"
#include "vsrspa/spa.hpp"

namespace vsrspa {

/// Uniform azimuth grid covering [-180, 180).
class AngleGrid {
 public:
  /// Throws InvalidInputError unless step_deg is positive and divides 360.
  static AngleGrid full_circle(double step_deg = 1.0);

  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return angles_.size(); }
  const std::vector<AngleDeg>& angles() const noexcept { return angles_; }
  AngleDeg operator[](std::size_t i) const { return angles_[i]; }

 private:
  AngleGrid(double step, std::vector<AngleDeg> angles) : step_(step), angles_(std::move(angles)) {}

  double step_ = 1.0;
  std::vector<AngleDeg> angles_;
};

class SpatialSpectrum {
 public:
  /// values must be finite, nonnegative and as long as the grid.
  SpatialSpectrum(AngleGrid grid, std::vector<double> values);

  const AngleGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Grid angle of the largest value; ties go to the smaller angle.
  AngleDeg argmax() const;

  /// Scaled so the maximum is 1. An all-zero spectrum is returned unchanged.
  SpatialSpectrum normalized() const;

 private:
  AngleGrid grid_;
  std::vector<double> values_;
};

struct PeakPick {
  std::vector<AngleDeg> angles;  // ascending
  std::size_t local_maxima = 0;
  /// At least K distinct local maxima were found.
  bool resolved = false;
};

/// Indices of the local maxima of a spectrum on the circular grid. A plateau
/// counts once, at its smallest index, if it rises above both neighbours.
std::vector<std::size_t> local_maxima(const SpatialSpectrum& spectrum);

/// The K largest local maxima (ties to the smaller angle), sorted by angle.
/// Short lists are padded with the largest remaining grid points and marked
/// unresolved.
PeakPick pick_peaks(const SpatialSpectrum& spectrum, std::size_t k);

enum class Algorithm { cbf, mvdr, music, iaa, spice, spice_plus, vsrspa };

std::string_view to_string(Algorithm a);

/// Accepts the names produced by to_string ("spice+" for spice_plus).
Algorithm parse_algorithm(std::string_view name);

const std::vector<Algorithm>& all_algorithms();

struct DoaEstimate {
  std::vector<AngleDeg> angles;  // ascending, length K
  Algorithm algorithm = Algorithm::vsrspa;
  std::optional<SpatialSpectrum> spectrum;
  std::size_t local_maxima = 0;
  bool resolved = false;
};

using Steering = std::function<ComplexVec3(AngleDeg)>;

/// a(θ) = [1, cos θ, sin θ] as a complex vector.
ComplexVec3 sensor_steering(AngleDeg theta);

/// 1 / (v^H U_N U_N^H v) with U_N the 3 - K weakest eigenvectors of r.
/// Values are capped at 1e12. Throws TooManySourcesError for K >= 3.
SpatialSpectrum music_spectrum(const HermitianMatrix& r, const Steering& steering, std::size_t k,
                               const AngleGrid& grid);

/// a^H R a / ‖a‖²
SpatialSpectrum cbf_spectrum(const HermitianMatrix& r, const AngleGrid& grid);

/// 1 / (a^H R^{-1} a), with diagonal loading 1e-6 tr(R)/3 if R is
/// numerically singular.
SpatialSpectrum mvdr_spectrum(const HermitianMatrix& r, const AngleGrid& grid);

/// Result of one of the iterative grid fits (IAA, SPICE, SPICE+).
struct SparseFit {
  std::vector<double> powers;         // one per grid point
  std::vector<double> noise_powers;   // SPICE: per channel; SPICE+: one tied value
  std::vector<double> criterion_history;
  int iterations = 0;
  bool breakdown = false;
};

/// Iterative adaptive approach: p ← a^H R^{-1} R̃ R^{-1} a / (a^H R^{-1} a)²
/// with R = Σ p a a^H; 15 iterations or relative change below 1e-6.
SparseFit iaa_fit(const HermitianMatrix& sample, const AngleGrid& grid);

/// SPICE cyclic updates over the grid plus three identity (noise) atoms;
/// tied_noise gives SPICE+, where a single atom I carries a common noise
/// power. The iterates keep Σ w q = 1 with w = b^H R̃^{-1} b / 3, or
/// w = ‖b‖²/tr(R̃) when R̃ is singular. criterion_history records
/// tr(R^{-1} R̃) at each iterate; it never increases. Stops after 50
/// iterations or at relative change below 1e-6.
SparseFit spice_fit(const HermitianMatrix& sample, const AngleGrid& grid, bool tied_noise);

DoaEstimate cbf_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid);
DoaEstimate mvdr_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid);
DoaEstimate music_baseline(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid);
DoaEstimate iaa_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid);
DoaEstimate spice_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid);
DoaEstimate spice_plus_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid);

/// Reconstruct, fit a Toeplitz covariance, then MUSIC with φ(θ) on T(u_opt).
DoaEstimate vsrspa_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid,
                            const SdpOptions& options = {});

DoaEstimate estimate(Algorithm algorithm, const SnapshotBlock& x, std::size_t k,
                     const AngleGrid& grid);

}  // namespace vsrspa
