#include "vsrspa/sdp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vsrspa/detail/dense_kernels.hpp"

namespace vsrspa {

namespace {

// Iterations run in extended precision. When T(u) at the optimum is rank
// deficient (noiseless data) the problem is degenerate and double precision
// stalls around a gap of 1e-11, before u is accurate to 1e-6.
using Real = long double;
using C = std::complex<Real>;

constexpr std::size_t kN = 6;
constexpr std::size_t kVars = 14;

struct Mat {
  std::array<C, kN * kN> a{};

  C& operator()(std::size_t i, std::size_t j) { return a[i * kN + j]; }
  const C& operator()(std::size_t i, std::size_t j) const { return a[i * kN + j]; }
};

Mat operator+(Mat x, const Mat& y) {
  for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] += y.a[k];
  return x;
}

Mat operator-(Mat x, const Mat& y) {
  for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] -= y.a[k];
  return x;
}

Mat operator*(Real s, Mat x) {
  for (auto& v : x.a) v *= s;
  return x;
}

Mat operator*(const Mat& x, const Mat& y) {
  Mat out;
  for (std::size_t i = 0; i < kN; ++i)
    for (std::size_t k = 0; k < kN; ++k) {
      const C v = x(i, k);
      if (v == C(0)) continue;
      for (std::size_t j = 0; j < kN; ++j) out(i, j) += v * y(k, j);
    }
  return out;
}

Mat hermitian_part(const Mat& m) {
  Mat out;
  for (std::size_t i = 0; i < kN; ++i) {
    out(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < kN; ++j) {
      const C v = Real(0.5) * (m(i, j) + std::conj(m(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

// Re tr(X Y)
Real inner(const Mat& x, const Mat& y) {
  Real s = 0;
  for (std::size_t i = 0; i < kN; ++i)
    for (std::size_t k = 0; k < kN; ++k) s += (x(i, k) * y(k, i)).real();
  return s;
}

detail::EigResult<Real> eig(const Mat& m) {
  return detail::jacobi_eig<Real>(std::vector<C>(m.a.begin(), m.a.end()), kN);
}

Mat from_spectrum(const detail::EigResult<Real>& e, const std::array<Real, kN>& f) {
  Mat out;
  for (std::size_t k = 0; k < kN; ++k)
    for (std::size_t i = 0; i < kN; ++i) {
      const C vi = f[k] * e.vectors[i * kN + k];
      for (std::size_t j = 0; j < kN; ++j) out(i, j) += vi * std::conj(e.vectors[j * kN + k]);
    }
  return out;
}

Mat inverse_pd(const Mat& s) {
  const auto e = eig(s);
  std::array<Real, kN> f{};
  for (std::size_t k = 0; k < kN; ++k) {
    if (!(e.values[k] > Real(0)))
      throw SolverBreakdownError("solve_block_sdp: iterate left the PSD cone");
    f[k] = Real(1) / e.values[k];
  }
  return from_spectrum(e, f);
}

// Largest alpha such that base + alpha * dir stays PSD.
Real max_step(const Mat& base, const Mat& dir) {
  const auto e = eig(base);
  std::array<Real, kN> f{};
  for (std::size_t k = 0; k < kN; ++k) {
    if (!(e.values[k] > Real(0))) return 0;
    f[k] = Real(1) / std::sqrt(e.values[k]);
  }
  const Mat inv_sqrt = from_spectrum(e, f);
  const Real lo = eig(hermitian_part(inv_sqrt * dir * inv_sqrt)).values.front();
  return lo >= Real(0) ? std::numeric_limits<Real>::infinity() : Real(-1) / lo;
}

// Variable layout:
//   0-2   diag(Q)
//   3-8   Q01, Q02, Q12 as (re, im) pairs
//   9     u1
//   10-13 u2, u3 as (re, im) pairs
using Basis = std::array<Mat, kVars>;
using Vec = std::array<Real, kVars>;

void set_pair(Mat& f, std::size_t i, std::size_t j, C v) {
  f(i, j) = v;
  f(j, i) = std::conj(v);
}

const Basis& lmi_basis() {
  static const Basis basis = [] {
    Basis b;
    const C one(1, 0);
    const C imag(0, 1);
    for (std::size_t i = 0; i < 3; ++i) b[i](i, i) = one;
    const std::array<std::pair<std::size_t, std::size_t>, 3> off = {{{0, 1}, {0, 2}, {1, 2}}};
    for (std::size_t k = 0; k < 3; ++k) {
      set_pair(b[3 + 2 * k], off[k].first, off[k].second, one);
      set_pair(b[4 + 2 * k], off[k].first, off[k].second, imag);
    }
    for (std::size_t i = 3; i < kN; ++i) b[9](i, i) = one;
    for (std::size_t i = 3; i + 1 < kN; ++i) {
      set_pair(b[10], i, i + 1, one);
      set_pair(b[11], i, i + 1, imag);
    }
    set_pair(b[12], 3, 5, one);
    set_pair(b[13], 3, 5, imag);
    return b;
  }();
  return basis;
}

Mat combine(const Vec& x) {
  const Basis& f = lmi_basis();
  Mat s;
  for (std::size_t k = 0; k < kVars; ++k)
    if (x[k] != Real(0)) s = s + x[k] * f[k];
  return s;
}

Real norm2(const Vec& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), Real(0)));
}

struct Direction {
  Vec dx{};
  Mat ds;
  Mat dxm;
};

class NewtonSystem {
 public:
  NewtonSystem(const Mat& x, const Mat& s_inv) : x_(x), s_inv_(s_inv), m_(kVars * kVars) {
    const Basis& f = lmi_basis();
    std::array<Mat, kVars> xfs;
    for (std::size_t j = 0; j < kVars; ++j) xfs[j] = x * f[j] * s_inv;
    for (std::size_t i = 0; i < kVars; ++i)
      for (std::size_t j = i; j < kVars; ++j) {
        const Real v = Real(0.5) * (inner(f[i], xfs[j]) + inner(f[j], xfs[i]));
        m_[i * kVars + j] = v;
        m_[j * kVars + i] = v;
      }
  }

  // Newton step for the complementarity target dX + X dS S^{-1} = g, also
  // removing the equality residual rp.
  Direction solve(const Mat& g, const Vec& rp) const {
    const Basis& f = lmi_basis();
    Vec rhs{};
    for (std::size_t i = 0; i < kVars; ++i) rhs[i] = inner(f[i], g) - rp[i];
    const std::vector<Real> dx = detail::cholesky_solve<Real>(m_, kVars, rhs);
    Direction d;
    std::copy(dx.begin(), dx.end(), d.dx.begin());
    d.ds = combine(d.dx);
    d.dxm = hermitian_part(g - x_ * d.ds * s_inv_);
    return d;
  }

 private:
  const Mat& x_;
  const Mat& s_inv_;
  std::vector<Real> m_;
};

C widen(Complex z) { return {z.real(), z.imag()}; }

Complex narrow(Real re, Real im) {
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

SdpSolution solve_block_sdp(const HermitianMatrix& b, const HermitianMatrix& weight,
                            const SdpOptions& options) {
  if (b.dim() != 3 || weight.dim() != 3)
    throw InvalidInputError("solve_block_sdp: expected 3x3 data");
  const double w_trace = weight.trace();
  const double w_min = min_eigenvalue(weight);
  if (!(w_trace > 0.0) || w_min < -1e-12 * weight.frobenius_norm())
    throw InvalidInputError("solve_block_sdp: weight must be PSD and nonzero");

  const double b_norm = b.frobenius_norm();
  if (b_norm == 0.0) {
    SdpSolution zero;
    zero.q_opt = HermitianMatrix::zeros(3);
    zero.objective_history = {0.0};
    return zero;
  }

  // Normalise: B = beta * Bn, W = omega * Wn. The optimum maps back as
  // Q = beta*sqrt(omega)*Qn, u = beta/sqrt(omega)*un, objective scales by
  // beta*sqrt(omega).
  const Real beta = static_cast<Real>(b_norm) / std::sqrt(Real(3));
  const Real omega = static_cast<Real>(w_trace) / Real(3);
  const Real obj_scale = beta * std::sqrt(omega);

  Mat c0;
  Mat target;  // blockdiag(I, Wn); objective is <target, S>
  for (std::size_t i = 0; i < 3; ++i) {
    target(i, i) = Real(1);
    for (std::size_t j = 0; j < 3; ++j) {
      c0(i, j + 3) = widen(b(i, j)) / beta;
      c0(j + 3, i) = std::conj(widen(b(i, j))) / beta;
      target(i + 3, j + 3) = widen(weight(i, j)) / omega;
    }
  }

  const Basis& f = lmi_basis();
  Vec cost{};
  for (std::size_t k = 0; k < kVars; ++k) cost[k] = inner(target, f[k]);
  const Real cost_norm = norm2(cost);

  // Strictly feasible start for the LMI: Q = T(u) = alpha I with alpha > ‖Bn‖_2.
  Vec x{};
  Real bn_sq = 0;
  for (const C& v : c0.a) bn_sq += std::norm(v);
  const Real alpha = std::sqrt(bn_sq / 2) + Real(1);
  x[0] = x[1] = x[2] = x[9] = alpha;

  // blockdiag(I, Wn) satisfies the equality constraints exactly; lift it off
  // the boundary if Wn is singular.
  Mat xm = target;
  if (w_min / static_cast<double>(omega) < 1e-8)
    for (std::size_t i = 3; i < kN; ++i) xm(i, i) += Real(1e-3);

  SdpSolution sol;
  Real gap = 0;
  Real residual = 0;
  bool converged = false;
  bool stalled = false;
  int iter = 0;
  const Real gap_tol = static_cast<Real>(options.gap_tolerance) / obj_scale;
  const Real feas_tol = options.feasibility_tolerance;

  for (;; ++iter) {
    const Mat s = c0 + combine(x);
    gap = inner(xm, s);
    Vec rp{};
    for (std::size_t k = 0; k < kVars; ++k) rp[k] = cost[k] - inner(f[k], xm);
    residual = norm2(rp) / (Real(1) + cost_norm);
    const Real objective = std::inner_product(cost.begin(), cost.end(), x.begin(), Real(0));
    sol.objective_history.push_back(static_cast<double>(objective * obj_scale));

    if (gap <= gap_tol && residual <= feas_tol) {
      converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;

    const Real mu = gap / Real(kN);
    Direction step;
    Real step_len = 0;
    try {
      const Mat s_inv = inverse_pd(s);
      const NewtonSystem newton(xm, s_inv);

      // Predictor (affine scaling).
      const Direction aff = newton.solve(Real(-1) * xm, rp);
      const Real ax = std::min(Real(1), max_step(xm, aff.dxm));
      const Real as = std::min(Real(1), max_step(s, aff.ds));
      const Real gap_aff = inner(xm + ax * aff.dxm, s + as * aff.ds);
      const Real ratio = std::max(gap_aff, Real(0)) / gap;
      const Real sigma = std::min(ratio * ratio * ratio, Real(1));

      // Corrector: G = (sigma mu I - X S - dXa dSa) S^{-1}.
      const Mat g = (sigma * mu) * s_inv - xm - aff.dxm * aff.ds * s_inv;
      step = newton.solve(g, rp);
      // A common step length keeps the iterates near the central path,
      // which is what makes u accurate to O(mu) rather than O(sqrt(mu)).
      step_len = std::min({Real(1), Real(0.95) * max_step(xm, step.dxm),
                           Real(0.95) * max_step(s, step.ds)});

      // The centring and second-order terms can push the objective up. The
      // predictor never does from a feasible point (its change is
      // -c^T M^{-1} c), so fall back to it for this iteration.
      const auto rise = [&](const Direction& d) {
        return std::inner_product(cost.begin(), cost.end(), d.dx.begin(), Real(0));
      };
      if (rise(step) > Real(0) && rise(aff) <= Real(0)) {
        step = aff;
        step_len = std::min({Real(1), Real(0.95) * max_step(xm, aff.dxm),
                             Real(0.95) * max_step(s, aff.ds)});
      }
    } catch (const SingularMatrixError&) {
      stalled = true;
      break;
    } catch (const SolverBreakdownError&) {
      stalled = true;
      break;
    }

    if (step_len < Real(1e-14)) {
      stalled = true;
      break;
    }
    xm = hermitian_part(xm + step_len * step.dxm);
    for (std::size_t k = 0; k < kVars; ++k) x[k] += step_len * step.dx[k];
  }

  const double reported_gap = static_cast<double>(gap * obj_scale);
  const bool feasible = residual <= feas_tol;
  if (!converged && !(reported_gap <= options.accept_gap && feasible)) {
    if (stalled)
      throw SolverBreakdownError("solve_block_sdp: step length collapsed at duality gap " +
                                 std::to_string(reported_gap));
    throw ConvergenceError("solve_block_sdp: no convergence within iteration limit",
                           reported_gap);
  }

  const Real u_scale = beta / std::sqrt(omega);
  CMatrix q(3, 3);
  for (std::size_t i = 0; i < 3; ++i) q(i, i) = static_cast<double>(obj_scale * x[i]);
  const std::array<std::pair<std::size_t, std::size_t>, 3> off = {{{0, 1}, {0, 2}, {1, 2}}};
  for (std::size_t k = 0; k < 3; ++k) {
    const Complex v = narrow(obj_scale * x[3 + 2 * k], obj_scale * x[4 + 2 * k]);
    q(off[k].first, off[k].second) = v;
    q(off[k].second, off[k].first) = std::conj(v);
  }
  sol.q_opt = HermitianMatrix(q);
  sol.u_opt = ToeplitzParam{static_cast<double>(u_scale * x[9]),
                            narrow(u_scale * x[10], u_scale * x[11]),
                            narrow(u_scale * x[12], u_scale * x[13])};
  sol.objective = sol.objective_history.back();
  sol.duality_gap = reported_gap;
  sol.iterations = iter;
  sol.dual_residual = static_cast<double>(residual);

  CMatrix block(kN, kN);
  const HermitianMatrix t = toeplitz(sol.u_opt);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      block(i, j) = sol.q_opt(i, j);
      block(i, j + 3) = b(i, j);
      block(i + 3, j) = std::conj(b(j, i));
      block(i + 3, j + 3) = t(i, j);
    }
  sol.block_min_eigenvalue = min_eigenvalue(HermitianMatrix(block));
  return sol;
}

}  // namespace vsrspa
