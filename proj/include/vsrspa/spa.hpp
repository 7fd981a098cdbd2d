#pragma once

#include <cstddef>
#include <string_view>

#include "vsrspa/numerics.hpp"
#include "vsrspa/sdp.hpp"
#include "vsrspa/toeplitz.hpp"

namespace vsrspa {

enum class Criterion { h1, h2 };

std::string_view to_string(Criterion c);

struct FitReport {
  ToeplitzParam u_opt;
  Criterion criterion_used = Criterion::h1;
  double criterion_value = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;

  /// The fitted covariance T(u_opt).
  HermitianMatrix fitted() const { return toeplitz(u_opt); }
};

/// ‖R^{-1/2} (R_sample - R) R_sample^{-1/2}‖_F². Both arguments must be
/// positive definite.
double criterion_h1(const HermitianMatrix& model, const HermitianMatrix& sample);

/// tr[(R_sample - R) R^{-1} (R_sample - R)]. Only the model has to be
/// invertible.
double criterion_h2(const HermitianMatrix& model, const HermitianMatrix& sample);

/// Fits a Hermitian-Toeplitz covariance to a 3x3 sample covariance.
///
/// Uses the h1 program (B = R^{1/2}, W = R^{-1}) when the sample covariance
/// is comfortably invertible (min eigenvalue above 1e-10 tr(R)/3) and came
/// from at least 3 snapshots; otherwise the h2 program (B = R, W = I).
FitReport fit_spa(const HermitianMatrix& sample, std::size_t snapshots,
                  const SdpOptions& options = {});

}  // namespace vsrspa
