#include <doctest.h>

#include <cmath>
#include <random>

#include "vsrspa/metrics.hpp"

using namespace vsrspa;

namespace {

std::vector<AngleDeg> deg(std::initializer_list<double> v) {
  std::vector<AngleDeg> out;
  for (double x : v) out.emplace_back(x);
  return out;
}

TrialRecord record(std::initializer_list<double> truth, std::initializer_list<double> est,
                   bool resolved = true) {
  TrialRecord r;
  r.true_angles = deg(truth);
  r.est_angles = deg(est);
  r.resolved = resolved;
  r.algorithm = "test";
  return r;
}

}  // namespace

TEST_CASE("circular_error") {
  CHECK(circular_error(AngleDeg(10.0), AngleDeg(20.0)) == 10.0);
  CHECK(circular_error(AngleDeg(179.0), AngleDeg(-179.0)) == doctest::Approx(2.0));
  CHECK(circular_error(AngleDeg(0.0), AngleDeg(180.0)) == 180.0);
  CHECK(circular_error(AngleDeg(-30.0), AngleDeg(-30.0)) == 0.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-180.0, 180.0);
  for (int i = 0; i < 1000; ++i) {
    const AngleDeg a(u(rng)), b(u(rng)), c(u(rng));
    const double ab = circular_error(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 180.0);
    CHECK(ab == circular_error(b, a));
    CHECK(circular_error(a, c) <= ab + circular_error(b, c) + 1e-12);
  }
}

TEST_CASE("match_estimates") {
  const auto truth = deg({-30.0, 20.0});
  CHECK(match_estimates(truth, deg({-29.0, 21.0})) == std::vector<std::size_t>{0, 1});
  CHECK(match_estimates(truth, deg({21.0, -29.0})) == std::vector<std::size_t>{1, 0});
  // equally good pairings keep the identity order
  CHECK(match_estimates(deg({0.0, 10.0}), deg({5.0, 5.0})) == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(match_estimates(truth, deg({1.0})), InvalidInputError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-180.0, 180.0);
  for (int i = 0; i < 500; ++i) {
    const auto t = deg({u(rng), u(rng)});
    const auto e = deg({u(rng), u(rng)});
    const auto perm = match_estimates(t, e);
    double matched = 0.0, identity = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      matched += std::pow(circular_error(t[k], e[perm[k]]), 2);
      identity += std::pow(circular_error(t[k], e[k]), 2);
    }
    CHECK(matched <= identity);
  }
}

TEST_CASE("rmse") {
  const std::vector<TrialRecord> one{record({-30.0}, {-28.0}), record({-30.0}, {-31.0})};
  CHECK(rmse(one) == doctest::Approx(std::sqrt(2.5)));

  const std::vector<TrialRecord> two{record({-30.0, 20.0}, {21.0, -29.0})};
  CHECK(rmse(two) == doctest::Approx(1.0));

  CHECK_THROWS_AS(rmse(std::vector<TrialRecord>{}), InvalidInputError);
  const std::vector<TrialRecord> mixed{record({1.0}, {1.0}), record({1.0, 2.0}, {1.0, 2.0})};
  CHECK_THROWS_AS(rmse(mixed), InvalidInputError);

  SUBCASE("invariant under permutation of estimates and common rotation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-180.0, 180.0);
    std::vector<TrialRecord> base, swapped, rotated;
    for (int i = 0; i < 50; ++i) {
      const double t0 = u(rng), t1 = u(rng), e0 = u(rng), e1 = u(rng), d = u(rng);
      base.push_back(record({t0, t1}, {e0, e1}));
      swapped.push_back(record({t0, t1}, {e1, e0}));
      rotated.push_back(record({t0 + d, t1 + d}, {e0 + d, e1 + d}));
    }
    CHECK(rmse(swapped) == doctest::Approx(rmse(base)).epsilon(1e-12));
    CHECK(rmse(rotated) == doctest::Approx(rmse(base)).epsilon(1e-9));
  }
}

TEST_CASE("resolution_indicator") {
  // half the separation of -30 and 20 is 25 degrees
  CHECK(resolution_indicator(record({-30.0, 20.0}, {-29.0, 21.0})));
  CHECK_FALSE(resolution_indicator(record({-30.0, 20.0}, {-29.0, 21.0}, false)));
  CHECK_FALSE(resolution_indicator(record({-30.0, 20.0}, {-5.0, 21.0})));
  CHECK(resolution_indicator(record({-30.0, 20.0}, {-5.5, 21.0})));
  CHECK(resolution_indicator(record({-30.0}, {100.0})));
  CHECK_FALSE(resolution_indicator(record({-30.0}, {-30.0}, false)));
}
