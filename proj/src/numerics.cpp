#include "vsrspa/numerics.hpp"

#include "vsrspa/detail/dense_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace vsrspa {

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw InvalidInputError("CMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InvalidInputError("CMatrix: dimension mismatch in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InvalidInputError("CMatrix: dimension mismatch in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator+(CMatrix lhs, const CMatrix& rhs) { return lhs += rhs; }
CMatrix operator-(CMatrix lhs, const CMatrix& rhs) { return lhs -= rhs; }
CMatrix operator*(CMatrix m, Complex s) { return m *= s; }
CMatrix operator*(Complex s, CMatrix m) { return m *= s; }

CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw InvalidInputError("CMatrix: dimension mismatch in *");
  CMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& v : m.data()) s += std::norm(v);
  return std::sqrt(s);
}

Complex trace(const CMatrix& m) {
  Complex t{};
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

bool all_finite(const CMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double real_trace_product(const CMatrix& a, const CMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += (a(i, k) * b(k, i)).real();
  return s;
}

// ---------------------------------------------------------------------------

HermitianMatrix::HermitianMatrix(const CMatrix& m) : m_(m.rows(), m.cols()) {
  if (m.rows() != m.cols()) throw InvalidInputError("HermitianMatrix: matrix is not square");
  if (!all_finite(m)) throw InvalidInputError("HermitianMatrix: non-finite entry");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(CMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::zeros(std::size_t n) { return HermitianMatrix(CMatrix(n, n)); }

double HermitianMatrix::trace() const { return vsrspa::trace(m_).real(); }

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.matrix() + b.matrix());
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.matrix() - b.matrix());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(Complex(s) * a.matrix());
}

// ---------------------------------------------------------------------------

EigDecomposition herm_eig(const HermitianMatrix& h) {
  if (!all_finite(h.matrix())) throw InvalidInputError("herm_eig: non-finite input");
  const std::size_t n = h.dim();
  const auto data = h.matrix().data();
  detail::EigResult<double> r =
      detail::jacobi_eig<double>(std::vector<Complex>(data.begin(), data.end()), n);
  EigDecomposition out;
  out.values = std::move(r.values);
  out.vectors = CMatrix(n, n);
  std::copy(r.vectors.begin(), r.vectors.end(), out.vectors.data().begin());
  return out;
}

HermitianMatrix herm_from_spectrum(const CMatrix& vectors, std::span<const double> values) {
  const std::size_t n = vectors.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = values[k] * vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(vectors(j, k));
    }
  }
  return HermitianMatrix(out);
}

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) throw InvalidInputError("min_eigenvalue: empty matrix");
  return herm_eig(h).values.front();
}

HermitianMatrix herm_sqrt(const HermitianMatrix& h) {
  const double norm = h.frobenius_norm();
  EigDecomposition e = herm_eig(h);
  for (double& lambda : e.values) {
    if (lambda < -1e-6 * norm)
      throw NotPsdError("herm_sqrt: matrix has a significantly negative eigenvalue");
    lambda = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  return herm_from_spectrum(e.vectors, e.values);
}

namespace {

constexpr double kMaxCondition = 1e12;

EigDecomposition checked_pd_eig(const HermitianMatrix& h, const char* who) {
  EigDecomposition e = herm_eig(h);
  if (e.values.empty()) throw InvalidInputError(std::string(who) + ": empty matrix");
  const double lo = e.values.front();
  const double hi = e.values.back();
  if (!(lo > 0.0) || hi / lo > kMaxCondition)
    throw SingularMatrixError(std::string(who) + ": matrix is singular or ill-conditioned");
  return e;
}

CMatrix apply_inverse(const EigDecomposition& e, const CMatrix& b) {
  // V Λ^{-1} V^H B
  CMatrix w = e.vectors.adjoint() * b;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) /= e.values[i];
  return e.vectors * w;
}

}  // namespace

CMatrix herm_solve(const HermitianMatrix& h, const CMatrix& b) {
  if (b.rows() != h.dim()) throw InvalidInputError("herm_solve: dimension mismatch");
  const EigDecomposition e = checked_pd_eig(h, "herm_solve");
  CMatrix x = apply_inverse(e, b);
  // One step of iterative refinement.
  const CMatrix r = b - h.matrix() * x;
  x += apply_inverse(e, r);
  return x;
}

HermitianMatrix herm_inverse(const HermitianMatrix& h) {
  return HermitianMatrix(herm_solve(h, CMatrix::identity(h.dim())));
}

HermitianMatrix herm_inverse_sqrt(const HermitianMatrix& h) {
  EigDecomposition e = checked_pd_eig(h, "herm_inverse_sqrt");
  for (double& lambda : e.values) lambda = 1.0 / std::sqrt(lambda);
  return herm_from_spectrum(e.vectors, e.values);
}

// ---------------------------------------------------------------------------

RMatrix real_embedding(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  RMatrix e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = h(i, j);
      e(i, j) = v.real();
      e(i + n, j + n) = v.real();
      e(i, j + n) = -v.imag();
      e(i + n, j) = v.imag();
    }
  return e;
}

HermitianMatrix from_real_embedding(const RMatrix& e) {
  if (e.rows() != e.cols() || e.rows() % 2 != 0)
    throw InvalidInputError("from_real_embedding: expected an even square matrix");
  const std::size_t n = e.rows() / 2;
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(e(i, j), e(i + n, j));
  return HermitianMatrix(m);
}

std::vector<double> cholesky_solve(const RMatrix& a, std::span<const double> rhs) {
  const std::size_t n = a.rows();
  if (a.cols() != n || rhs.size() != n) throw InvalidInputError("cholesky_solve: dimension mismatch");
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = a(i, j);
  return detail::cholesky_solve<double>(flat, n, rhs);
}

}  // namespace vsrspa
