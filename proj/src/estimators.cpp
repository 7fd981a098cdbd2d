#include "vsrspa/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "vsrspa/reconstruction.hpp"

namespace vsrspa {

AngleGrid AngleGrid::full_circle(double step_deg) {
  if (!std::isfinite(step_deg) || step_deg <= 0.0)
    throw InvalidInputError("AngleGrid: step must be positive");
  const double count = 360.0 / step_deg;
  const double rounded = std::round(count);
  if (rounded < 1.0 || std::abs(count - rounded) > 1e-9 * rounded)
    throw InvalidInputError("AngleGrid: step must divide 360 degrees");
  const auto n = static_cast<std::size_t>(rounded);
  std::vector<AngleDeg> angles;
  angles.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    angles.emplace_back(-180.0 + static_cast<double>(i) * step_deg);
  return AngleGrid(step_deg, std::move(angles));
}

SpatialSpectrum::SpatialSpectrum(AngleGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidInputError("SpatialSpectrum: value count does not match the grid");
  for (double v : values_)
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidInputError("SpatialSpectrum: values must be finite and nonnegative");
}

AngleDeg SpatialSpectrum::argmax() const {
  if (values_.empty()) throw InvalidInputError("SpatialSpectrum: empty spectrum");
  // max_element keeps the first of equal maxima, i.e. the smallest angle.
  const auto it = std::max_element(values_.begin(), values_.end());
  return grid_[static_cast<std::size_t>(it - values_.begin())];
}

SpatialSpectrum SpatialSpectrum::normalized() const {
  const double peak = values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
  if (peak <= 0.0) return *this;
  std::vector<double> scaled(values_);
  for (double& v : scaled) v /= peak;
  return SpatialSpectrum(grid_, std::move(scaled));
}

std::vector<std::size_t> local_maxima(const SpatialSpectrum& spectrum) {
  const auto& v = spectrum.values();
  const std::size_t n = v.size();
  std::vector<std::size_t> peaks;
  if (n < 2) return peaks;

  // Start at the beginning of a plateau so no run is split by the walk.
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] != v[(i + n - 1) % n]) {
      start = i;
      break;
    }
  if (start == n) return peaks;  // flat

  std::size_t visited = 0;
  std::size_t i = start;
  while (visited < n) {
    std::size_t len = 1;
    while (len < n && v[(i + len) % n] == v[i]) ++len;
    const double before = v[(i + n - 1) % n];
    const double after = v[(i + len) % n];
    if (v[i] > before && v[i] > after) {
      std::size_t first = i;
      for (std::size_t k = 0; k < len; ++k) first = std::min(first, (i + k) % n);
      peaks.push_back(first);
    }
    visited += len;
    i = (i + len) % n;
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

PeakPick pick_peaks(const SpatialSpectrum& spectrum, std::size_t k) {
  if (k == 0) throw InvalidInputError("pick_peaks: K must be at least 1");
  if (k > spectrum.size()) throw InvalidInputError("pick_peaks: K exceeds the grid size");
  const auto& v = spectrum.values();
  auto stronger = [&](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); };

  std::vector<std::size_t> peaks = local_maxima(spectrum);
  PeakPick out;
  out.local_maxima = peaks.size();
  out.resolved = peaks.size() >= k;

  std::sort(peaks.begin(), peaks.end(), stronger);
  if (peaks.size() > k) peaks.resize(k);
  if (peaks.size() < k) {
    std::vector<std::size_t> rest(v.size());
    std::iota(rest.begin(), rest.end(), std::size_t{0});
    std::sort(rest.begin(), rest.end(), stronger);
    for (std::size_t idx : rest) {
      if (peaks.size() == k) break;
      if (std::find(peaks.begin(), peaks.end(), idx) == peaks.end()) peaks.push_back(idx);
    }
  }
  std::sort(peaks.begin(), peaks.end());
  for (std::size_t idx : peaks) out.angles.push_back(spectrum.grid()[idx]);
  return out;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::cbf: return "cbf";
    case Algorithm::mvdr: return "mvdr";
    case Algorithm::music: return "music";
    case Algorithm::iaa: return "iaa";
    case Algorithm::spice: return "spice";
    case Algorithm::spice_plus: return "spice+";
    case Algorithm::vsrspa: return "vsrspa";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : all_algorithms())
    if (to_string(a) == name) return a;
  throw InvalidInputError("unknown algorithm '" + std::string(name) + "'");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {Algorithm::cbf,   Algorithm::mvdr,
                                             Algorithm::music, Algorithm::iaa,
                                             Algorithm::spice, Algorithm::spice_plus,
                                             Algorithm::vsrspa};
  return all;
}

ComplexVec3 sensor_steering(AngleDeg theta) {
  const RealVec3 a = steering_vector(theta);
  return {Complex(a[0]), Complex(a[1]), Complex(a[2])};
}

namespace {

constexpr double kMusicCap = 1e12;

// v^H M v for Hermitian M.
double quad_form(const CMatrix& m, const ComplexVec3& v) {
  Complex s{};
  for (std::size_t i = 0; i < 3; ++i) {
    Complex row{};
    for (std::size_t j = 0; j < 3; ++j) row += m(i, j) * v[j];
    s += std::conj(v[i]) * row;
  }
  return s.real();
}

double norm_sq(const ComplexVec3& v) {
  return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
}

void require_3x3(const HermitianMatrix& r, const char* who) {
  if (r.dim() != 3) throw InvalidInputError(std::string(who) + ": expected a 3x3 covariance");
}

// R^{-1}, retrying once with diagonal loading if R is numerically singular.
HermitianMatrix loaded_inverse(const HermitianMatrix& r, double loading) {
  try {
    return herm_inverse(r);
  } catch (const SingularMatrixError&) {
    const double eps = loading * r.trace() / 3.0;
    return herm_inverse(r + eps * HermitianMatrix::identity(r.dim()));
  }
}

std::vector<ComplexVec3> dictionary(const AngleGrid& grid) {
  std::vector<ComplexVec3> atoms;
  atoms.reserve(grid.size());
  for (AngleDeg a : grid.angles()) atoms.push_back(sensor_steering(a));
  return atoms;
}

void add_outer(CMatrix& r, const ComplexVec3& v, double p) {
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) += p * v[i] * std::conj(v[j]);
}

double relative_change(const std::vector<double>& next, const std::vector<double>& prev) {
  double diff = 0.0;
  double base = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    diff += (next[i] - prev[i]) * (next[i] - prev[i]);
    base += prev[i] * prev[i];
  }
  return base > 0.0 ? std::sqrt(diff / base) : (diff > 0.0 ? 1.0 : 0.0);
}

void check_k(std::size_t k, const AngleGrid& grid) {
  if (k == 0) throw InvalidInputError("estimate: K must be at least 1");
  if (k > grid.size()) throw InvalidInputError("estimate: K exceeds the grid size");
}

DoaEstimate from_spectrum(Algorithm algorithm, SpatialSpectrum spectrum, std::size_t k) {
  PeakPick peaks = pick_peaks(spectrum, k);
  DoaEstimate est;
  est.algorithm = algorithm;
  est.angles = std::move(peaks.angles);
  est.local_maxima = peaks.local_maxima;
  est.resolved = peaks.resolved;
  est.spectrum = std::move(spectrum);
  return est;
}

std::vector<double> clamp_nonnegative(std::vector<double> v) {
  for (double& x : v) x = std::max(x, 0.0);
  return v;
}

}  // namespace

SpatialSpectrum music_spectrum(const HermitianMatrix& r, const Steering& steering, std::size_t k,
                               const AngleGrid& grid) {
  require_3x3(r, "music_spectrum");
  if (k == 0) throw InvalidInputError("music_spectrum: K must be at least 1");
  if (k >= 3) throw TooManySourcesError("music_spectrum: at most 2 sources with 3 channels");

  const EigDecomposition e = herm_eig(r);
  CMatrix noise_proj(3, 3);
  for (std::size_t c = 0; c < 3 - k; ++c)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        noise_proj(i, j) += e.vectors(i, c) * std::conj(e.vectors(j, c));

  std::vector<double> values;
  values.reserve(grid.size());
  for (AngleDeg theta : grid.angles()) {
    const double den = quad_form(noise_proj, steering(theta));
    values.push_back(den > 1.0 / kMusicCap ? 1.0 / den : kMusicCap);
  }
  return SpatialSpectrum(grid, std::move(values));
}

SpatialSpectrum cbf_spectrum(const HermitianMatrix& r, const AngleGrid& grid) {
  require_3x3(r, "cbf_spectrum");
  std::vector<double> values;
  values.reserve(grid.size());
  for (AngleDeg theta : grid.angles()) {
    const ComplexVec3 a = sensor_steering(theta);
    values.push_back(quad_form(r.matrix(), a) / norm_sq(a));
  }
  return SpatialSpectrum(grid, clamp_nonnegative(std::move(values)));
}

SpatialSpectrum mvdr_spectrum(const HermitianMatrix& r, const AngleGrid& grid) {
  require_3x3(r, "mvdr_spectrum");
  const HermitianMatrix inv = loaded_inverse(r, 1e-6);
  std::vector<double> values;
  values.reserve(grid.size());
  for (AngleDeg theta : grid.angles())
    values.push_back(1.0 / quad_form(inv.matrix(), sensor_steering(theta)));
  return SpatialSpectrum(grid, std::move(values));
}

SparseFit iaa_fit(const HermitianMatrix& sample, const AngleGrid& grid) {
  require_3x3(sample, "iaa_fit");
  const std::vector<ComplexVec3> atoms = dictionary(grid);
  SparseFit fit;
  fit.powers.resize(atoms.size());
  for (std::size_t g = 0; g < atoms.size(); ++g) {
    const double n2 = norm_sq(atoms[g]);
    fit.powers[g] = std::max(quad_form(sample.matrix(), atoms[g]), 0.0) / (n2 * n2);
  }

  constexpr int kMaxIterations = 15;
  for (int it = 0; it < kMaxIterations; ++it) {
    CMatrix r(3, 3);
    for (std::size_t g = 0; g < atoms.size(); ++g) add_outer(r, atoms[g], fit.powers[g]);
    const HermitianMatrix model(r);
    if (!(model.trace() > 0.0)) {
      fit.breakdown = true;
      break;
    }
    const CMatrix inv = loaded_inverse(model, 1e-10).matrix();
    const CMatrix p = inv * sample.matrix() * inv;

    std::vector<double> next(atoms.size());
    for (std::size_t g = 0; g < atoms.size(); ++g) {
      const double den = quad_form(inv, atoms[g]);
      next[g] = std::max(quad_form(p, atoms[g]), 0.0) / (den * den);
    }
    const double change = relative_change(next, fit.powers);
    fit.powers = std::move(next);
    fit.iterations = it + 1;
    if (change < 1e-6) break;
  }
  return fit;
}

SparseFit spice_fit(const HermitianMatrix& sample, const AngleGrid& grid, bool tied_noise) {
  require_3x3(sample, "spice_fit");
  const std::vector<ComplexVec3> atoms = dictionary(grid);
  const std::size_t n_grid = atoms.size();
  const std::size_t n_noise = tied_noise ? 1 : 3;
  const double tr = sample.trace();

  SparseFit fit;
  fit.powers.assign(n_grid, 0.0);
  fit.noise_powers.assign(n_noise, 0.0);
  if (!(tr > 0.0)) {
    fit.breakdown = true;
    return fit;
  }
  const CMatrix root = herm_sqrt(sample).matrix();

  // Weights w = b^H R̃^{-1} b / 3 make the iteration minimise h1. A singular
  // R̃ falls back to w = ‖b‖² / tr(R̃).
  std::optional<CMatrix> sample_inv;
  try {
    sample_inv = herm_inverse(sample).matrix();
  } catch (const SingularMatrixError&) {
  }

  // q holds the grid powers followed by the noise powers.
  std::vector<double> w(n_grid + n_noise);
  std::vector<double> q(n_grid + n_noise);
  for (std::size_t g = 0; g < n_grid; ++g) {
    const double n2 = norm_sq(atoms[g]);
    w[g] = sample_inv ? quad_form(*sample_inv, atoms[g]) / 3.0 : n2 / tr;
    q[g] = std::max(quad_form(sample.matrix(), atoms[g]), 0.0) / (n2 * n2);
  }
  if (tied_noise) {
    w[n_grid] = sample_inv ? trace(*sample_inv).real() / 3.0 : 3.0 / tr;
    q[n_grid] = tr / 3.0;
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      w[n_grid + i] = sample_inv ? (*sample_inv)(i, i).real() / 3.0 : 1.0 / tr;
      q[n_grid + i] = sample(i, i).real();
    }
  }
  const double mass = std::inner_product(w.begin(), w.end(), q.begin(), 0.0);
  for (double& v : q) v /= mass;

  auto model = [&](const std::vector<double>& powers) {
    CMatrix r(3, 3);
    for (std::size_t g = 0; g < n_grid; ++g) add_outer(r, atoms[g], powers[g]);
    for (std::size_t i = 0; i < 3; ++i) r(i, i) += powers[n_grid + (tied_noise ? 0 : i)];
    return HermitianMatrix(r);
  };

  constexpr int kMaxIterations = 50;
  for (int it = 0;; ++it) {
    const CMatrix inv = loaded_inverse(model(q), 1e-10).matrix();
    fit.criterion_history.push_back(real_trace_product(inv, sample.matrix()));
    if (it == kMaxIterations) break;

    const CMatrix m = inv * root;
    const CMatrix p = m * m.adjoint();
    std::vector<double> c(q.size());
    for (std::size_t g = 0; g < n_grid; ++g) c[g] = std::sqrt(std::max(quad_form(p, atoms[g]), 0.0));
    if (tied_noise) {
      c[n_grid] = frobenius_norm(m);
    } else {
      for (std::size_t i = 0; i < 3; ++i) c[n_grid + i] = std::sqrt(std::max(p(i, i).real(), 0.0));
    }
    double rho = 0.0;
    for (std::size_t g = 0; g < q.size(); ++g) rho += std::sqrt(w[g]) * q[g] * c[g];
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      fit.breakdown = true;
      break;
    }
    std::vector<double> next(q.size());
    for (std::size_t g = 0; g < q.size(); ++g) next[g] = q[g] * c[g] / (std::sqrt(w[g]) * rho);
    const double change = relative_change(next, q);
    q = std::move(next);
    fit.iterations = it + 1;
    if (change < 1e-6) {
      fit.criterion_history.push_back(
          real_trace_product(loaded_inverse(model(q), 1e-10).matrix(), sample.matrix()));
      break;
    }
  }

  if (fit.breakdown) {
    fit.powers.assign(n_grid, 0.0);
    return fit;
  }
  std::copy(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n_grid), fit.powers.begin());
  std::copy(q.begin() + static_cast<std::ptrdiff_t>(n_grid), q.end(), fit.noise_powers.begin());
  return fit;
}

DoaEstimate cbf_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid) {
  check_k(k, grid);
  return from_spectrum(Algorithm::cbf, cbf_spectrum(sample_covariance(x), grid), k);
}

DoaEstimate mvdr_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid) {
  check_k(k, grid);
  return from_spectrum(Algorithm::mvdr, mvdr_spectrum(sample_covariance(x), grid), k);
}

DoaEstimate music_baseline(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid) {
  return from_spectrum(Algorithm::music,
                       music_spectrum(sample_covariance(x), sensor_steering, k, grid), k);
}

DoaEstimate iaa_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid) {
  check_k(k, grid);
  SparseFit fit = iaa_fit(sample_covariance(x), grid);
  DoaEstimate est = from_spectrum(Algorithm::iaa, SpatialSpectrum(grid, std::move(fit.powers)), k);
  if (fit.breakdown) est.resolved = false;
  return est;
}

namespace {

DoaEstimate spice_common(Algorithm algorithm, const SnapshotBlock& x, std::size_t k,
                         const AngleGrid& grid) {
  check_k(k, grid);
  SparseFit fit = spice_fit(sample_covariance(x), grid, algorithm == Algorithm::spice_plus);
  DoaEstimate est = from_spectrum(algorithm, SpatialSpectrum(grid, std::move(fit.powers)), k);
  if (fit.breakdown) est.resolved = false;
  return est;
}

}  // namespace

DoaEstimate spice_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid) {
  return spice_common(Algorithm::spice, x, k, grid);
}

DoaEstimate spice_plus_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid) {
  return spice_common(Algorithm::spice_plus, x, k, grid);
}

DoaEstimate vsrspa_estimate(const SnapshotBlock& x, std::size_t k, const AngleGrid& grid,
                            const SdpOptions& options) {
  if (k == 0) throw InvalidInputError("vsrspa_estimate: K must be at least 1");
  if (k >= 3) throw TooManySourcesError("vsrspa_estimate: at most 2 sources with 3 channels");
  const ReconstructedSnapshots y = reconstruct(x);
  const FitReport fit = fit_spa(sample_covariance(y), y.snapshots(), options);
  return from_spectrum(Algorithm::vsrspa,
                       music_spectrum(fit.fitted(), reconstructed_steering, k, grid), k);
}

DoaEstimate estimate(Algorithm algorithm, const SnapshotBlock& x, std::size_t k,
                     const AngleGrid& grid) {
  switch (algorithm) {
    case Algorithm::cbf: return cbf_estimate(x, k, grid);
    case Algorithm::mvdr: return mvdr_estimate(x, k, grid);
    case Algorithm::music: return music_baseline(x, k, grid);
    case Algorithm::iaa: return iaa_estimate(x, k, grid);
    case Algorithm::spice: return spice_estimate(x, k, grid);
    case Algorithm::spice_plus: return spice_plus_estimate(x, k, grid);
    case Algorithm::vsrspa: return vsrspa_estimate(x, k, grid);
  }
  throw InvalidInputError("estimate: unknown algorithm");
}

}  // namespace vsrspa
