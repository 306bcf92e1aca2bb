// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gem/quadrature.hpp"

using namespace gem;

TEST_CASE("polynomials are integrated to machine precision") {
  auto r = integrate_gk([](double x) { return x * x; }, 0, 1);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3).epsilon(1e-14));

  r = integrate_gk([](double x) { return 3 * x * x - 2 * x + 7; }, -2, 5);
  CHECK(r.value == doctest::Approx(161.0).epsilon(1e-13));
}

TEST_CASE("orientation and empty interval") {
  auto fwd = integrate_gk([](double x) { return std::exp(x); }, 0, 1);
  auto rev = integrate_gk([](double x) { return std::exp(x); }, 1, 0);
  CHECK(fwd.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
  CHECK(rev.value == doctest::Approx(-fwd.value).epsilon(1e-14));
  CHECK(integrate_gk([](double) { return 1.0; }, 2, 2).value == 0.0);
}

TEST_CASE("gaussian tail against erf") {
  auto f = [](double x) { return std::exp(-x * x); };
  const double ref = std::sqrt(std::numbers::pi) / 2 * std::erf(4.0);
  auto r = integrate_gk(f, 0, 4, 1e-12);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("needle-sharp Lorentzian area") {
  // hwhm 1e-5 inside a +-1 window: area = hwhm * (atan(b/h) - atan(a/h))
  const double h = 1e-5;
  auto f = [&](double x) { return h * h / (x * x + h * h); };
  const double ref = h * (std::atan(1.0 / h) - std::atan(-1.0 / h));
  auto r = integrate_gk(f, -1, 1, 1e-9);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("non-convergence is reported and thrown") {
  // infinitely oscillatory near the origin; no interval budget reaches
  // 1e-14 relative
  auto f = [](double x) { return std::sin(1.0 / (x + 1e-12)); };
  auto r = integrate_gk(f, 0, 1, 1e-14, 1e-300, 64);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(integrate_gk_checked(f, 0, 1, 1e-14, 1e-300),
                  std::runtime_error);
}
