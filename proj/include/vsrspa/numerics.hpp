#pragma once

// Small dense complex linear algebra. Matrices here are at most a few
// dozen entries wide, so everything is stored row-major in a flat vector
// and the algorithms favour robustness over asymptotic speed.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "vsrspa/errors.hpp"

namespace vsrspa {

using Complex = std::complex<double>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  CMatrix adjoint() const;

  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator-=(const CMatrix& rhs);
  CMatrix& operator*=(Complex s);

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix lhs, const CMatrix& rhs);
CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs);
CMatrix operator*(CMatrix m, Complex s);
CMatrix operator*(Complex s, CMatrix m);

double frobenius_norm(const CMatrix& m);
Complex trace(const CMatrix& m);
bool all_finite(const CMatrix& m);

/// Re tr(A B), the real inner product on Hermitian matrices.
double real_trace_product(const CMatrix& a, const CMatrix& b);

/// Square complex matrix that is exactly Hermitian.
///
/// Construction averages the input with its conjugate transpose and zeroes
/// the imaginary part of the diagonal, so entries(i, j) == conj(entries(j, i))
/// holds bit-for-bit afterwards.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix zeros(std::size_t n);

  std::size_t dim() const noexcept { return m_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return m_(i, j);
  }
  const CMatrix& matrix() const noexcept { return m_; }
  double trace() const;
  double frobenius_norm() const { return vsrspa::frobenius_norm(m_); }

 private:
  CMatrix m_;
};

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, const HermitianMatrix& a);

struct EigDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k pairs with values[k]
};

/// Cyclic complex Jacobi eigensolver.
EigDecomposition herm_eig(const HermitianMatrix& h);

/// V f(Λ) V^H for the given spectrum.
HermitianMatrix herm_from_spectrum(const CMatrix& vectors, std::span<const double> values);

/// Principal square root of a PSD matrix. Eigenvalues slightly below zero
/// (down to -1e-6 ‖H‖_F) are clamped; anything more negative throws NotPsdError.
HermitianMatrix herm_sqrt(const HermitianMatrix& h);

/// Solves H X = B for positive definite H. Throws SingularMatrixError when H
/// is not positive definite or its condition number exceeds 1e12.
CMatrix herm_solve(const HermitianMatrix& h, const CMatrix& b);

HermitianMatrix herm_inverse(const HermitianMatrix& h);
HermitianMatrix herm_inverse_sqrt(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);

class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// [[Re H, -Im H], [Im H, Re H]]: a real symmetric 2n x 2n matrix whose
/// spectrum is that of H with every eigenvalue repeated twice.
RMatrix real_embedding(const HermitianMatrix& h);
HermitianMatrix from_real_embedding(const RMatrix& e);

/// Solves A x = rhs for real symmetric positive definite A by Cholesky.
std::vector<double> cholesky_solve(const RMatrix& a, std::span<const double> rhs);

}  // namespace vsrspa
