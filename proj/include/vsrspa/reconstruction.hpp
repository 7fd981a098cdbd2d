#pragma once

#include "vsrspa/numerics.hpp"
#include "vsrspa/signal_model.hpp"

namespace vsrspa {

/// G = [[0, 1, -j], [1, 0, 0], [0, 1, j]]. Maps the (p, vx, vy) channels onto
/// (vx - j vy, p, vx + j vy), a virtual three-element uniform line array
/// with white noise: G diag(1, 1/2, 1/2) G^H = I.
const CMatrix& g_matrix();

/// Y = G X; rows ordered (vx - j vy, p, vx + j vy).
class ReconstructedSnapshots {
 public:
  explicit ReconstructedSnapshots(CMatrix data) : data_(std::move(data)) {}

  std::size_t snapshots() const noexcept { return data_.cols(); }
  const CMatrix& matrix() const noexcept { return data_; }

 private:
  CMatrix data_;
};

ReconstructedSnapshots reconstruct(const SnapshotBlock& x);

/// φ(θ) = [e^{-jθ}, 1, e^{jθ}] = G a(θ).
ComplexVec3 reconstructed_steering(AngleDeg theta);

/// G R G^H
HermitianMatrix reconstructed_covariance(const HermitianMatrix& r);

HermitianMatrix sample_covariance(const ReconstructedSnapshots& y);

}  // namespace vsrspa
