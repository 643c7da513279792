#include <doctest.h>

#include <cmath>

#include "tailwalk/errors.hpp"
#include "tailwalk/experiment.hpp"
#include "tailwalk/residual_law.hpp"
#include "tailwalk/rng.hpp"

using namespace tailwalk;

TEST_CASE("left endpoint z0 by closed-form inversion") {
  const ResidualLaw ra(canonical_config_a());
  CHECK(ra.z0() == doctest::Approx(3118.0).epsilon(1e-12));

  const ResidualLaw rb(canonical_config_b());
  CHECK(rb.z0() == doctest::Approx(std::pow(0.8, -1.25) - 3.25).epsilon(1e-12));

  // Config C solves in the linear region below the step support: z0 = -2.
  const ResidualLaw rc(canonical_config_c());
  CHECK(rc.z0() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(rc.z0() < rc.step().support_left());

  for (const ResidualLaw& r : {ra, rb, rc}) {
    CHECK(r.tail(r.z0() - 1.0) == 1.0);
    CHECK(r.tail(r.z0() + 1.0) < 1.0);
    CHECK(r.step().integrated_tail(r.z0()) ==
          doctest::Approx(r.abs_mean()).epsilon(1e-10));
  }
}

TEST_CASE("residual tail values from the spec") {
  const ResidualLaw ra(canonical_config_a());
  CHECK(ra.tail(99993.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ra.tail(0.0) == 1.0);  // clamp region: I(0)/|EX| > 1
}

TEST_CASE("residual density equals sf/|EX| via finite differences") {
  const ResidualLaw rb(canonical_config_b());
  for (double t : {rb.z0() + 0.5, 1.0, 25.0}) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    const double fd = -(rb.tail(t + h) - rb.tail(t - h)) / (2 * h);
    CHECK(fd == doctest::Approx(rb.density(t)).epsilon(1e-6));
  }
  CHECK(rb.density(rb.z0() - 1.0) == 0.0);
}

TEST_CASE("residual quantile inverts the tail on both branches") {
  const ResidualLaw ra(canonical_config_a());
  CHECK(ra.quantile(0.5) == doctest::Approx(99993.0).epsilon(1e-12));
  CHECK(ra.quantile(1.0) == ra.z0());
  CHECK_THROWS_AS(ra.quantile(0.0), DomainError);
  CHECK_THROWS_AS(ra.quantile(1.0000001), DomainError);

  // Config C exercises the linear branch (u above I(lo)/|EX|).
  const ResidualLaw rc(canonical_config_c());
  for (double u : {0.999, 0.9, 0.7, 0.5, 0.1, 1e-3, 1e-8}) {
    CHECK(rc.tail(rc.quantile(u)) == doctest::Approx(u).epsilon(1e-10));
  }
  for (double u : {0.999, 0.5, 1e-6}) {
    const ResidualLaw& r = ra;
    CHECK(r.tail(r.quantile(u)) == doctest::Approx(u).epsilon(1e-10));
  }
}

TEST_CASE("empirical residual tail matches the closed form") {
  const ResidualLaw ra(canonical_config_a());
  Rng rng(99, 3);
  const std::size_t n = 1'000'000;
  std::size_t above = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ra.sample(rng) > 99993.0) ++above;
  }
  const double p = 0.5;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(static_cast<double>(above) / n - p) < 3.0 * se);
}
