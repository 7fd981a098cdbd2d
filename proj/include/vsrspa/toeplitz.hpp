#pragma once

#include <array>

#include "vsrspa/numerics.hpp"

namespace vsrspa {

/// First row (u1, u2, u3) of a 3x3 Hermitian-Toeplitz matrix. u1 sits on the
/// diagonal and is real by construction.
struct ToeplitzParam {
  double u1 = 0.0;
  Complex u2{};
  Complex u3{};

  std::array<Complex, 3> values() const { return {Complex(u1), u2, u3}; }
  bool operator==(const ToeplitzParam&) const = default;
};

/// [[u1, u2, u3], [u2*, u1, u2], [u3*, u2*, u1]]
HermitianMatrix toeplitz(const ToeplitzParam& u);

/// Averages each diagonal of a 3x3 Hermitian matrix: the Frobenius-nearest
/// Hermitian-Toeplitz matrix.
ToeplitzParam toeplitz_projection(const HermitianMatrix& h);

/// Largest deviation of any entry from the mean of its diagonal.
double toeplitz_defect(const HermitianMatrix& h);

}  // namespace vsrspa
