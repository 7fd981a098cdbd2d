#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "vsrspa/numerics.hpp"
#include "vsrspa/toeplitz.hpp"

namespace testing {

using vsrspa::CMatrix;
using vsrspa::Complex;
using vsrspa::HermitianMatrix;

inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline HermitianMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  const CMatrix m = random_matrix(rng, n, n);
  return HermitianMatrix(m + m.adjoint());
}

/// M M^H + shift I
inline HermitianMatrix random_pd(std::mt19937_64& rng, std::size_t n, double shift = 0.1) {
  const CMatrix m = random_matrix(rng, n, n);
  return HermitianMatrix(m * m.adjoint() + Complex(shift) * CMatrix::identity(n));
}

/// Random positive definite Hermitian-Toeplitz parameter.
inline vsrspa::ToeplitzParam random_pd_toeplitz(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    vsrspa::ToeplitzParam u{std::abs(n(rng)) + 1.0, Complex(n(rng), n(rng)) * 0.4,
                            Complex(n(rng), n(rng)) * 0.4};
    if (vsrspa::min_eigenvalue(vsrspa::toeplitz(u)) > 0.05) return u;
  }
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

inline double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return max_abs_diff(a.matrix(), b.matrix());
}

}  // namespace testing
