#include <doctest.h>

#include <cmath>

#include "tailwalk/errors.hpp"
#include "tailwalk/quadrature.hpp"

using namespace tailwalk;

TEST_CASE("polynomial and trig integrals converge to machine accuracy") {
  auto square = [](double x) { return x * x; };
  auto r = integrate_adaptive(square, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  auto sine = [](double x) { return std::sin(x); };
  r = integrate_adaptive(sine, 0.0, std::acos(-1.0));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("geometric breakpoints handle long decaying tails") {
  auto decay = [](double x) { return std::exp(-x); };
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  auto r = integrate_adaptive(decay, geometric_breakpoints(0.0, 80.0, 0.5), opt);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity x^-1/2") {
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  opt.max_panels = 4000;
  auto r = integrate_adaptive(f, 0.0, 1.0, opt);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("divergent integrand exhausts the budget instead of lying") {
  auto f = [](double x) { return 1.0 / x; };
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  opt.max_panels = 256;
  auto r = integrate_adaptive(f, 0.0, 1.0, opt);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(integrate_or_throw(f, {0.0, 1.0}, opt, "divergent"),
                  QuadratureError);
}

TEST_CASE("two sided grading covers both endpoint humps") {
  // f concentrated near both endpoints of [0, 1000].
  auto f = [](double x) { return std::exp(-x) + std::exp(x - 1000.0); };
  QuadratureOptions opt;
  opt.rel_tol = 1e-11;
  auto r = integrate_adaptive(f, two_sided_geometric_breakpoints(0.0, 1000.0, 0.5), opt);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
}
