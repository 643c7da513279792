#include <doctest.h>

#include <cmath>
#include <vector>

#include "tailwalk/errors.hpp"
#include "tailwalk/rng.hpp"
#include "tailwalk/stats.hpp"

using namespace tailwalk;

TEST_CASE("hill estimator recovers the index of exact Pareto data") {
  Rng rng(2718, 0);
  const std::size_t n = 100'000;
  std::vector<double> sample(n);
  for (auto& x : sample) x = std::pow(rng.uniform_open(), -1.0 / 2.0);  // Pareto(2)
  const double est = hill_estimator(sample, 1000);
  CHECK(est > 1.8);
  CHECK(est < 2.2);
}

TEST_CASE("hill estimator degenerate and error cases") {
  const std::vector<double> constant(100, 3.0);
  CHECK(hill_estimator(constant, 10) == 0.0);

  const std::vector<double> with_zero = {1.0, 2.0, 0.0, 4.0};
  CHECK_THROWS_AS(hill_estimator(with_zero, 2), DomainError);
  const std::vector<double> small = {1.0, 2.0};
  CHECK_THROWS_AS(hill_estimator(small, 2), DomainError);
  CHECK_THROWS_AS(hill_estimator(small, 0), DomainError);
}

TEST_CASE("KS distance of identical samples is zero") {
  const std::vector<double> a = {0.1, 0.4, 0.9, 2.0};
  const KsResult r = ks_two_sample(a, a);
  CHECK(r.statistic == 0.0);
  CHECK_FALSE(r.reject);
}

TEST_CASE("KS threshold is calibrated on equal uniform samples") {
  Rng rng(14142, 0);
  const std::size_t n = 10'000;
  int accepted = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = rng.uniform01();
    for (auto& x : b) x = rng.uniform01();
    if (!ks_two_sample(a, b).reject) ++accepted;
  }
  // 5% nominal false-reject rate; demand at least 90% acceptance.
  CHECK(accepted >= 0.90 * reps);
}

TEST_CASE("KS rejects a 0.1 location shift at n = 1e4") {
  Rng rng(161803, 0);
  const std::size_t n = 10'000;
  std::vector<double> a(n), b(n);
  for (auto& x : a) x = rng.uniform01();
  for (auto& x : b) x = rng.uniform01() + 0.1;
  CHECK(ks_two_sample(a, b).reject);
}

TEST_CASE("linear fit recovers an exact line and flags noise") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {3, 5, 7, 9, 11};
  const LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> noisy = {3, 6, 6, 10, 10};
  CHECK(linear_fit(x, noisy).r_squared < 1.0);
  const std::vector<double> flat = {1.0, 1.0};
  const std::vector<double> rise = {2.0, 3.0};
  CHECK_THROWS_AS(linear_fit(flat, rise), DomainError);
}

TEST_CASE("sample mean and binomial standard errors") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const auto m = sample_mean(v);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.n == 4);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

  CHECK(binomial_std_error(0.5, 100) == doctest::Approx(0.05));
  CHECK(binomial_std_error(0.0, 100) == 0.0);
}
