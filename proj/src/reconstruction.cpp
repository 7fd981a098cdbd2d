#include "vsrspa/reconstruction.hpp"

#include <cmath>

namespace vsrspa {

const CMatrix& g_matrix() {
  static const CMatrix g{{0.0, 1.0, Complex(0.0, -1.0)},
                         {1.0, 0.0, 0.0},
                         {0.0, 1.0, Complex(0.0, 1.0)}};
  return g;
}

ReconstructedSnapshots reconstruct(const SnapshotBlock& x) {
  const CMatrix& in = x.matrix();
  CMatrix y(3, in.cols());
  for (std::size_t t = 0; t < in.cols(); ++t) {
    const Complex p = in(0, t);
    const Complex vx = in(1, t);
    const Complex jvy = Complex(0.0, 1.0) * in(2, t);
    y(0, t) = vx - jvy;
    y(1, t) = p;
    y(2, t) = vx + jvy;
  }
  return ReconstructedSnapshots(std::move(y));
}

ComplexVec3 reconstructed_steering(AngleDeg theta) {
  const double t = theta.rad();
  return {std::polar(1.0, -t), Complex(1.0), std::polar(1.0, t)};
}

HermitianMatrix reconstructed_covariance(const HermitianMatrix& r) {
  if (r.dim() != 3) throw InvalidInputError("reconstructed_covariance: expected 3x3 input");
  const CMatrix& g = g_matrix();
  return HermitianMatrix(g * r.matrix() * g.adjoint());
}

HermitianMatrix sample_covariance(const ReconstructedSnapshots& y) {
  return sample_covariance(y.matrix());
}

}  // namespace vsrspa
