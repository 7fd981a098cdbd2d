#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vsrspa/signal_model.hpp"

namespace vsrspa {

struct TrialRecord {
  std::vector<AngleDeg> true_angles;
  std::vector<AngleDeg> est_angles;
  /// The estimator's spectrum had at least K local maxima.
  bool resolved = false;
  std::string algorithm;
  double snr_db = 0.0;
  std::size_t trial_index = 0;
};

/// Smallest absolute difference modulo 360, in [0, 180].
double circular_error(AngleDeg a, AngleDeg b);

/// perm[k] is the index into est_angles paired with true_angles[k]. Chooses
/// the pairing with least total squared circular error; among equal
/// pairings the identity order wins. Throws InvalidInputError on length
/// mismatch.
std::vector<std::size_t> match_estimates(std::span<const AngleDeg> true_angles,
                                         std::span<const AngleDeg> est_angles);

/// Circular errors of the matched pairs, in true-angle order.
std::vector<double> matched_errors(const TrialRecord& record);

/// sqrt(Σ matched squared errors / (K Z)). Throws InvalidInputError for an
/// empty list or records with differing K.
double rmse(std::span<const TrialRecord> records);

/// Peak-count flag AND every matched error below half the smallest true
/// separation. With a single source only the flag matters.
bool resolution_indicator(const TrialRecord& record);

}  // namespace vsrspa
