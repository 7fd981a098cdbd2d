#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vsrspa/reconstruction.hpp"
#include "vsrspa/spa.hpp"

using namespace vsrspa;
using testing::max_abs_diff;

namespace {

double param_error(const ToeplitzParam& a, const ToeplitzParam& b) {
  return std::max({std::abs(a.u1 - b.u1), std::abs(a.u2 - b.u2), std::abs(a.u3 - b.u3)});
}

HermitianMatrix rank_one(const ComplexVec3& v) {
  const CMatrix c{{v[0]}, {v[1]}, {v[2]}};
  return HermitianMatrix(c * c.adjoint());
}

}  // namespace

TEST_CASE("toeplitz layout and projection") {
  const ToeplitzParam u{2.0, Complex(1, 1), Complex(0, -1)};
  const HermitianMatrix t = toeplitz(u);
  CHECK(t(0, 0) == Complex(2.0));
  CHECK(t(2, 2) == Complex(2.0));
  CHECK(t(0, 1) == Complex(1, 1));
  CHECK(t(1, 2) == Complex(1, 1));
  CHECK(t(1, 0) == Complex(1, -1));
  CHECK(t(0, 2) == Complex(0, -1));
  CHECK(t(2, 0) == Complex(0, 1));
  CHECK(toeplitz_projection(t) == u);
  CHECK(toeplitz_defect(t) == 0.0);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const HermitianMatrix h = testing::random_hermitian(rng, 3);
    const HermitianMatrix p = toeplitz(toeplitz_projection(h));
    // The residual is orthogonal to every Toeplitz direction.
    const ToeplitzParam r = toeplitz_projection(h - p);
    CHECK(std::abs(r.u1) < 1e-14);
    CHECK(std::abs(r.u2) < 1e-14);
    CHECK(std::abs(r.u3) < 1e-14);
  }
}

TEST_CASE("criterion_h1") {
  const HermitianMatrix eye = HermitianMatrix::identity(3);
  CHECK(criterion_h1(eye, eye) == doctest::Approx(0.0));
  // model 2I against sample I: ‖(1/√2)(-I)‖² = 3/2
  CHECK(criterion_h1(2.0 * eye, eye) == doctest::Approx(1.5));

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const HermitianMatrix r = testing::random_pd(rng, 3);
    CHECK(std::abs(criterion_h1(r, r)) < 1e-10);
    const HermitianMatrix m = testing::random_pd(rng, 3);
    // tr(M^{-1} R) + tr(R^{-1} M) - 6
    const double expect = real_trace_product(herm_inverse(m).matrix(), r.matrix()) +
                          real_trace_product(herm_inverse(r).matrix(), m.matrix()) - 6.0;
    CHECK(criterion_h1(m, r) == doctest::Approx(expect).epsilon(1e-8));
  }
  const std::array<double, 3> d{1.0, 1.0, 0.0};
  CHECK_THROWS_AS(criterion_h1(eye, HermitianMatrix::diagonal(d)), SingularMatrixError);
}

TEST_CASE("criterion_h2") {
  const HermitianMatrix eye = HermitianMatrix::identity(3);
  CHECK(criterion_h2(eye, eye) == doctest::Approx(0.0));
  CHECK(criterion_h2(2.0 * eye, eye) == doctest::Approx(1.5));

  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const HermitianMatrix m = testing::random_pd(rng, 3);
    const HermitianMatrix r = testing::random_pd(rng, 3, 0.0);
    const double expect =
        real_trace_product(r.matrix(), herm_solve(m, r.matrix())) - 2.0 * r.trace() + m.trace();
    CHECK(criterion_h2(m, r) == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
    CHECK(criterion_h2(m, r) >= -1e-10);
  }
  const std::array<double, 3> d{1.0, 1.0, 0.0};
  CHECK_THROWS_AS(criterion_h2(HermitianMatrix::diagonal(d), eye), SingularMatrixError);
  CHECK_NOTHROW(criterion_h2(eye, HermitianMatrix::diagonal(d)));
}

TEST_CASE("fit_spa examples") {
  SUBCASE("identity") {
    const FitReport f = fit_spa(HermitianMatrix::identity(3), 100);
    CHECK(f.criterion_used == Criterion::h1);
    CHECK(param_error(f.u_opt, ToeplitzParam{1.0, {}, {}}) < 1e-6);
    CHECK(std::abs(f.criterion_value) < 1e-8);
  }
  SUBCASE("rank one steering outer product is recovered with h2") {
    const HermitianMatrix r = rank_one(reconstructed_steering(AngleDeg(-30.0)));
    const FitReport f = fit_spa(r, 1);
    CHECK(f.criterion_used == Criterion::h2);
    CHECK(max_abs_diff(f.fitted(), r) < 1e-6);
    CHECK(std::abs(f.criterion_value) < 1e-6);
  }
  SUBCASE("h1 needs three snapshots") {
    CHECK(fit_spa(HermitianMatrix::identity(3), 2).criterion_used == Criterion::h2);
  }
  SUBCASE("exact Toeplitz input") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 50; ++trial) {
      const ToeplitzParam u0 = testing::random_pd_toeplitz(rng);
      const FitReport f = fit_spa(toeplitz(u0), 100);
      CHECK(param_error(f.u_opt, u0) < 1e-6);
    }
  }
}

TEST_CASE("fit_spa properties on sample covariances") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> ang(-180.0, 180.0), snr(-10.0, 20.0);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<AngleDeg> angles{AngleDeg(ang(rng))};
    if (trial % 2 == 1) angles.emplace_back(AngleDeg(ang(rng)));
    const std::size_t t = trial % 3 == 0 ? 2 : 20;
    const Scenario s = Scenario::equal_power(angles, snr(rng), t, 1000 + trial);
    const HermitianMatrix r = sample_covariance(reconstruct(synthesize(s)));
    const FitReport f = fit_spa(r, t);
    CAPTURE(trial);

    const HermitianMatrix fitted = f.fitted();
    CHECK(min_eigenvalue(fitted) >= -1e-8 * fitted.trace());
    CHECK(f.criterion_value >= -1e-9 * std::max(1.0, r.trace()));

    if (f.criterion_used == Criterion::h1) {
      CHECK(f.criterion_value == doctest::Approx(criterion_h1(fitted, r)).epsilon(1e-5).scale(1.0));
    } else if (min_eigenvalue(fitted) > 1e-6 * fitted.trace()) {
      CHECK(f.criterion_value == doctest::Approx(criterion_h2(fitted, r)).epsilon(1e-5).scale(r.trace()));
    }

    // No nearby positive definite Toeplitz point fits better.
    if (min_eigenvalue(fitted) > 1e-3 * fitted.trace()) {
      const auto value = [&](const HermitianMatrix& m) {
        return f.criterion_used == Criterion::h1 ? criterion_h1(m, r) : criterion_h2(m, r);
      };
      const double best = value(fitted);
      for (int k = 0; k < 20; ++k) {
        const double h = 1e-3 * fitted.trace();
        const ToeplitzParam d{h * n(rng), h * Complex(n(rng), n(rng)), h * Complex(n(rng), n(rng))};
        const ToeplitzParam moved{f.u_opt.u1 + d.u1, f.u_opt.u2 + d.u2, f.u_opt.u3 + d.u3};
        // h1 and h2 are only defined where T(u) is invertible.
        if (min_eigenvalue(toeplitz(moved)) < 1e-6 * fitted.trace()) continue;
        CHECK(value(toeplitz(moved)) >= best - 1e-9 * std::max(1.0, std::abs(best)));
      }
    }
  }
}

TEST_CASE("h2 fit scales with the covariance") {
  std::mt19937_64 rng(46);
  const HermitianMatrix r = testing::random_pd(rng, 3, 0.0);
  const FitReport base = fit_spa(r, 1);
  REQUIRE(base.criterion_used == Criterion::h2);
  for (double c : {1e-3, 10.0, 1e4}) {
    const FitReport f = fit_spa(c * r, 1);
    const ToeplitzParam expect{c * base.u_opt.u1, c * base.u_opt.u2, c * base.u_opt.u3};
    CHECK(param_error(f.u_opt, expect) <= 1e-6 * c * base.u_opt.u1);
  }
}

TEST_CASE("fit_spa rejects bad input") {
  CHECK_THROWS_AS(fit_spa(HermitianMatrix::identity(2), 10), InvalidInputError);
  CHECK_THROWS_AS(fit_spa(HermitianMatrix::identity(3), 0), InvalidInputError);
  CHECK(to_string(Criterion::h1) == "h1");
  CHECK(to_string(Criterion::h2) == "h2");
}
