#pragma once

// Scalar-generic kernels shared by the double-precision public API and the
// extended-precision interior-point solver. Matrices are square, row-major,
// stored in flat vectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "vsrspa/errors.hpp"

namespace vsrspa::detail {

template <class T>
struct EigResult {
  std::vector<T> values;                // ascending
  std::vector<std::complex<T>> vectors; // column k pairs with values[k]
};

/// Cyclic complex Jacobi. Each pivot is phase-aligned so the 2x2 block is
/// real symmetric, then annihilated with the classical rotation.
template <class T>
EigResult<T> jacobi_eig(std::vector<std::complex<T>> a, std::size_t n) {
  using C = std::complex<T>;
  auto at = [&](std::vector<C>& m, std::size_t i, std::size_t j) -> C& { return m[i * n + j]; };

  std::vector<C> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = T(1);

  T scale = 0;
  for (const C& z : a) scale += std::norm(z);
  scale = std::sqrt(scale);
  const T eps = std::numeric_limits<T>::epsilon();

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    T off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(at(a, i, j));
    off = std::sqrt(off);
    if (off == T(0) || off <= eps * T(0.1) * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const C b = at(a, p, q);
        const T mag = std::abs(b);
        if (mag == T(0)) continue;
        if (mag <= eps * eps * scale) {
          at(a, p, q) = at(a, q, p) = C(0);
          continue;
        }
        const C phase = std::conj(b) / mag;
        const T theta = (at(a, q, q).real() - at(a, p, p).real()) / (T(2) * mag);
        const T t = (theta >= T(0) ? T(1) : T(-1)) /
                    (std::abs(theta) + std::sqrt(theta * theta + T(1)));
        const T c = T(1) / std::sqrt(t * t + T(1));
        const T s = t * c;
        const C jpp = c;
        const C jpq = s;
        const C jqp = -s * phase;
        const C jqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const C akp = at(a, k, p);
          const C akq = at(a, k, q);
          at(a, k, p) = akp * jpp + akq * jqp;
          at(a, k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const C apk = at(a, p, k);
          const C aqk = at(a, q, k);
          at(a, p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          at(a, q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        at(a, p, q) = at(a, q, p) = C(0);
        at(a, p, p) = at(a, p, p).real();
        at(a, q, q) = at(a, q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const C vkp = at(v, k, p);
          const C vkq = at(v, k, q);
          at(v, k, p) = vkp * jpp + vkq * jqp;
          at(v, k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * n + i].real() < a[j * n + j].real();
  });

  EigResult<T> out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]].real();
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

/// Solves A x = rhs for symmetric positive definite A (n x n, row-major).
template <class T>
std::vector<T> cholesky_solve(std::span<const T> a, std::size_t n, std::span<const T> rhs) {
  std::vector<T> l(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    T d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > T(0))) throw SingularMatrixError("cholesky_solve: matrix is not positive definite");
    const T ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      T s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  std::vector<T> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l[i * n + k] * y[k];
    y[i] /= l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l[k * n + i] * y[k];
    y[i] /= l[i * n + i];
  }
  return y;
}

}  // namespace vsrspa::detail
