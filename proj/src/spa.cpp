#include "vsrspa/spa.hpp"

#include <algorithm>
#include <cmath>

namespace vsrspa {

HermitianMatrix toeplitz(const ToeplitzParam& u) {
  CMatrix t(3, 3);
  for (std::size_t i = 0; i < 3; ++i) t(i, i) = u.u1;
  t(0, 1) = t(1, 2) = u.u2;
  t(1, 0) = t(2, 1) = std::conj(u.u2);
  t(0, 2) = u.u3;
  t(2, 0) = std::conj(u.u3);
  return HermitianMatrix(t);
}

ToeplitzParam toeplitz_projection(const HermitianMatrix& h) {
  if (h.dim() != 3) throw InvalidInputError("toeplitz_projection: expected 3x3 input");
  return {(h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0,
          0.5 * (h(0, 1) + h(1, 2)), h(0, 2)};
}

double toeplitz_defect(const HermitianMatrix& h) {
  const HermitianMatrix t = toeplitz(toeplitz_projection(h));
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(h(i, j) - t(i, j)));
  return worst;
}

std::string_view to_string(Criterion c) { return c == Criterion::h1 ? "h1" : "h2"; }

double criterion_h1(const HermitianMatrix& model, const HermitianMatrix& sample) {
  const HermitianMatrix model_isqrt = herm_inverse_sqrt(model);
  const HermitianMatrix sample_isqrt = herm_inverse_sqrt(sample);
  const CMatrix m = model_isqrt.matrix() * (sample - model).matrix() * sample_isqrt.matrix();
  const double f = frobenius_norm(m);
  return f * f;
}

double criterion_h2(const HermitianMatrix& model, const HermitianMatrix& sample) {
  const CMatrix diff = (sample - model).matrix();
  const CMatrix w = herm_solve(model, diff);
  return real_trace_product(diff, w);
}

FitReport fit_spa(const HermitianMatrix& sample, std::size_t snapshots, const SdpOptions& options) {
  if (sample.dim() != 3) throw InvalidInputError("fit_spa: expected a 3x3 sample covariance");
  if (snapshots == 0) throw InvalidInputError("fit_spa: snapshot count must be positive");
  const double tr = sample.trace();
  const EigDecomposition e = herm_eig(sample);
  const bool invertible = e.values.front() > 1e-10 * tr / 3.0 && snapshots >= 3;

  FitReport report;
  SdpSolution sol;
  if (invertible) {
    // Q absorbs R^{1/2} T^{-1} R^{1/2}, so the objective equals h1 + 2M.
    std::vector<double> root(e.values), inv(e.values);
    for (std::size_t k = 0; k < 3; ++k) {
      root[k] = std::sqrt(e.values[k]);
      inv[k] = 1.0 / e.values[k];
    }
    sol = solve_block_sdp(herm_from_spectrum(e.vectors, root), herm_from_spectrum(e.vectors, inv),
                          options);
    report.criterion_used = Criterion::h1;
    report.criterion_value = sol.objective - 6.0;
  } else {
    // Objective equals h2 + 2 tr(R).
    sol = solve_block_sdp(sample, HermitianMatrix::identity(3), options);
    report.criterion_used = Criterion::h2;
    report.criterion_value = sol.objective - 2.0 * tr;
  }
  report.u_opt = sol.u_opt;
  report.duality_gap = sol.duality_gap;
  report.iterations = sol.iterations;
  return report;
}

}  // namespace vsrspa
