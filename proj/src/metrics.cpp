#include "vsrspa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vsrspa {

double circular_error(AngleDeg a, AngleDeg b) {
  const double d = std::fmod(std::abs(a.deg() - b.deg()), 360.0);
  return std::min(d, 360.0 - d);
}

std::vector<std::size_t> match_estimates(std::span<const AngleDeg> true_angles,
                                         std::span<const AngleDeg> est_angles) {
  if (true_angles.size() != est_angles.size())
    throw InvalidInputError("match_estimates: true and estimated angle counts differ");
  std::vector<std::size_t> perm(true_angles.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  // Permutations come in lexicographic order starting from the identity, so
  // a strict comparison keeps the identity on ties.
  do {
    double cost = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const double e = circular_error(true_angles[k], est_angles[perm[k]]);
      cost += e * e;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<double> matched_errors(const TrialRecord& record) {
  const auto perm = match_estimates(record.true_angles, record.est_angles);
  std::vector<double> errors(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k)
    errors[k] = circular_error(record.true_angles[k], record.est_angles[perm[k]]);
  return errors;
}

double rmse(std::span<const TrialRecord> records) {
  if (records.empty()) throw InvalidInputError("rmse: no records");
  const std::size_t k = records.front().true_angles.size();
  if (k == 0) throw InvalidInputError("rmse: records carry no angles");
  double sum = 0.0;
  for (const TrialRecord& r : records) {
    if (r.true_angles.size() != k) throw InvalidInputError("rmse: records differ in K");
    for (double e : matched_errors(r)) sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(k * records.size()));
}

bool resolution_indicator(const TrialRecord& record) {
  if (!record.resolved) return false;
  const auto& truth = record.true_angles;
  if (truth.size() < 2) return true;
  double min_sep = 180.0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = i + 1; j < truth.size(); ++j)
      min_sep = std::min(min_sep, circular_error(truth[i], truth[j]));
  const auto errors = matched_errors(record);
  return std::all_of(errors.begin(), errors.end(), [&](double e) { return e < 0.5 * min_sep; });
}

}  // namespace vsrspa
