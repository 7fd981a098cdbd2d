#pragma once

#include <vector>

#include "vsrspa/numerics.hpp"
#include "vsrspa/toeplitz.hpp"

namespace vsrspa {

struct SdpOptions {
  int max_iterations = 100;
  /// Stop once <X, S> (in the caller's units) drops to this level...
  /// Degenerate (rank deficient) optima need a gap well below the accuracy
  /// wanted in u, roughly its square.
  double gap_tolerance = 1e-12;
  /// ...and the relative equality residual of the dual variable is below this.
  double feasibility_tolerance = 1e-9;
  /// A run that stalls is still accepted if its gap is at most this.
  double accept_gap = 1e-7;
};

struct SdpSolution {
  ToeplitzParam u_opt;
  HermitianMatrix q_opt;
  double objective = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  /// Relative residual of the equality constraints <F_i, X> = c_i.
  double dual_residual = 0.0;
  /// Minimum eigenvalue of [[Q, B], [B^H, T(u)]] at the returned point.
  double block_min_eigenvalue = 0.0;
  /// c^T x before the first step and after every accepted step. Never
  /// increases when the weight is nonsingular (the start is then feasible).
  std::vector<double> objective_history;
};

/// minimize  Tr(Q) + Tr(W T(u))
/// over      Hermitian Q (3x3), u = (u1 real, u2, u3 complex)
/// s.t.      [[Q, B], [B^H, T(u)]] ⪰ 0
///
/// Primal-dual path-following interior-point method (HKM direction,
/// Mehrotra predictor-corrector) on the 6x6 Hermitian block, carried out
/// in long double. The data is rescaled internally so that B and W have
/// unit average eigenvalue; the
/// problem is homogeneous in (Q, u, B) and in W up to a change of variables,
/// so the rescaling is exact.
///
/// Throws ConvergenceError if max_iterations is reached with gap above
/// accept_gap, SolverBreakdownError if step lengths collapse first, and
/// InvalidInputError for non-3x3 data or a weight that is not PSD and nonzero.
SdpSolution solve_block_sdp(const HermitianMatrix& b, const HermitianMatrix& weight,
                            const SdpOptions& options = {});

}  // namespace vsrspa
