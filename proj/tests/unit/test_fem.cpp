#include <doctest.h>

#include <cmath>
#include <random>

#include "plap/errors.hpp"
#include "plap/fem.hpp"

using namespace plap;

TEST_SUITE("fem") {
  TEST_CASE("signed powers") {
    CHECK(signed_pow(-8.0, 1.0 / 3.0) == doctest::Approx(-2.0));
    CHECK(signed_pow(0.0, 0.0) == 0.0);
    CHECK(signed_pow(4.0, 0.5) == doctest::Approx(2.0));
    CHECK(abs_pow(-2.0, 3.0) == doctest::Approx(8.0));
  }

  TEST_CASE("parameter constraint") {
    CHECK(SystemParams::with_derived_beta(10, 5, 1).beta == doctest::Approx(4.5));
    CHECK(SystemParams::with_derived_beta(3, 10, 1).beta == doctest::Approx(20.0 / 3.0));
    CHECK(SystemParams::with_derived_beta(10, 2, 1).beta == doctest::Approx(1.8));
    try {
      SystemParams(2, 2, 3, 1);
      FAIL("expected a constraint error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("1.000000") != std::string::npos);
    }
    CHECK_THROWS(SystemParams(1.0, 2, 1, 1));
    CHECK_THROWS(SystemParams(2, 2, 0.5, 1.5));
    auto d = SystemParams::diagonal(6);
    CHECK(d.alpha == 3.0);
    CHECK(d.constraint_residual() == 0.0);
  }

  TEST_CASE("gradient energy of a linear field is exact") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.5)));
    auto lin = interpolate_raw(sq, [](const Point& x) { return 3 * x.x + 4 * x.y; });
    CHECK(grad_energy(lin, 2) == doctest::Approx(25.0 * 4.0));
    CHECK(grad_energy(lin, 3) == doctest::Approx(125.0 * 4.0));
    auto disc = make_space(generate_radial(10));
    auto r = interpolate_raw(disc, [](const Point& x) { return x.x; });
    CHECK(grad_energy(r, 5) == doctest::Approx(0.5));  // int_0^1 r dr
  }

  TEST_CASE("Lp power and inner product") {
    auto line = make_space(generate_interval(0, 1, 50));
    auto x = interpolate_raw(line, [](const Point& p) { return p.x; });
    CHECK(lp_power(x, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(inner_product(x, x) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("Rayleigh quotient scaling invariance") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.25)));
    for (int trial = 0; trial < 10; ++trial) {
      const double p = 1.5 + 8.0 * unif(rng);
      const double q = 1.5 + 8.0 * unif(rng);
      const double alpha = 1.0 + (p - 1.0) * 0.5 * unif(rng);
      if (q * (1.0 - alpha / p) < 1.0) continue;
      auto params = SystemParams::with_derived_beta(p, q, alpha);
      auto u = interpolate(sq, [&](const Point& x) { return x.x * (2 - x.x) * x.y * (2 - x.y) + 0.1 * unif(rng); });
      auto v = interpolate(sq, [&](const Point& x) { return std::sin(x.x) * std::sin(x.y) + 0.1 * unif(rng); });
      const double base = rayleigh(u, v, params);
      const double t = 0.05 + 20.0 * unif(rng);
      FemFunction us = u, vs = v;
      us.values *= std::pow(t, 1.0 / p);
      vs.values *= std::pow(t, 1.0 / q);
      CHECK(std::abs(rayleigh(us, vs, params) - base) <= 1e-12 * base);
    }
  }

  TEST_CASE("Rayleigh quotient rejects inadmissible pairs") {
    auto line = make_space(generate_interval(0, 1, 10));
    auto u = interpolate(line, [](const Point& x) { return x.x * (1 - x.x); });
    FemFunction v = u;
    v.values = -u.values;
    CHECK_THROWS_AS(rayleigh(u, v, SystemParams(2, 2, 1, 1)), InadmissiblePair);
    CHECK_THROWS_AS(rayleigh(u, FemFunction(line), SystemParams(2, 2, 1, 1)), InadmissiblePair);
  }
}
