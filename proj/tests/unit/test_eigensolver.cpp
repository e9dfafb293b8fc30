#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plap/eigensolver.hpp"
#include "plap/errors.hpp"

using namespace plap;

namespace {

// First Dirichlet eigenvalue of -Delta_p on an interval of length 1.
double interval_eigenvalue(double p) {
  const double pi_p = 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
  return (p - 1.0) * std::pow(pi_p, p);
}

// Shooting for the same eigenvalue: with w = |u'|^(p-2) u', integrate
// u' = |w|^(p'-2) w, w' = -lambda |u|^(p-2) u from u = 0, w = 1 by RK4 and
// bisect on lambda until w vanishes at x = 1/2.
double shooting_eigenvalue(double p) {
  const double pp = p / (p - 1.0);
  auto crossing = [&](double lambda) {
    double u = 0.0, w = 1.0, x = 0.0;
    const double dx = 1e-4;
    auto f = [&](double uu, double ww) {
      return std::pair{signed_pow(ww, pp - 1.0), -lambda * signed_pow(uu, p - 1.0)};
    };
    while (x < 2.0) {
      auto [k1u, k1w] = f(u, w);
      auto [k2u, k2w] = f(u + 0.5 * dx * k1u, w + 0.5 * dx * k1w);
      auto [k3u, k3w] = f(u + 0.5 * dx * k2u, w + 0.5 * dx * k2w);
      auto [k4u, k4w] = f(u + dx * k3u, w + dx * k3w);
      const double wn = w + dx / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
      if (wn <= 0.0) return x + dx * w / (w - wn);
      u += dx / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
      w = wn;
      x += dx;
    }
    return x;
  };
  double lo = 1.0, hi = 1e4;
  for (int i = 0; i < 100; ++i) {
    const double mid = std::sqrt(lo * hi);
    (crossing(mid) > 0.5 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

OuterConfig tight(double tol = 1e-11) {
  OuterConfig cfg;
  cfg.tolerance = tol;
  cfg.max_outer = 200;
  return cfg;
}

}  // namespace

TEST_SUITE("eigensolver") {
  TEST_CASE("disc trajectory from the quadratic guess") {
    auto space = make_space(generate_radial(500));
    OuterConfig cfg;
    cfg.guess = GuessKind::supplied;
    cfg.guess_u = interpolate_raw(space, [](const Point& x) { return (1 - x.x) * (1 - x.x); }).values;
    cfg.guess_v = cfg.guess_u;
    auto res = solve_eigenpair(space, SystemParams(2, 2, 1, 1), cfg);
    CHECK(res.converged);
    REQUIRE(res.history.size() >= 4);
    CHECK(res.history[0].lambda == doctest::Approx(10.0).epsilon(1e-5));
    CHECK(res.history[1].lambda == doctest::Approx(5.9232).epsilon(1e-4));
    CHECK(res.history[2].lambda == doctest::Approx(5.78817).epsilon(1e-5));
    CHECK(res.history[3].lambda == doctest::Approx(5.78337).epsilon(1e-5));
    CHECK(res.lambda == doctest::Approx(kBesselZero * kBesselZero).epsilon(1e-5));
  }

  TEST_CASE("closed-form and shooting oracles agree") {
    for (double p : {1.5, 2.0, 3.0, 6.0}) {
      CAPTURE(p);
      CHECK(shooting_eigenvalue(p) == doctest::Approx(interval_eigenvalue(p)).epsilon(1e-6));
    }
  }

  TEST_CASE("scalar interval eigenvalue matches the closed form") {
    auto line = make_space(generate_interval(0, 1, 500));
    for (double p : {1.5, 2.0, 3.0, 6.0}) {
      auto res = solve_scalar(line, p, tight(1e-10));
      CAPTURE(p);
      CHECK(res.converged);
      CHECK(res.lambda == doctest::Approx(interval_eigenvalue(p)).epsilon(2e-4));
      CHECK(lp_power(res.u, p) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("equal exponents collapse to the scalar problem") {
    std::vector<SpacePtr> spaces = {make_space(generate_interval(0, 1, 200)), make_space(generate_radial(200)),
                                    make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.25)))};
    for (const auto& space : spaces) {
      for (double p : {3.0, 4.0}) {
        auto sys = solve_eigenpair(space, SystemParams::diagonal(p), tight());
        auto scalar = solve_scalar(space, p, tight());
        CHECK(sys.lambda == doctest::Approx(scalar.lambda).epsilon(1e-8));
        CHECK((sys.u.values - sys.v.values).lpNorm<Eigen::Infinity>() <= 1e-6 * sys.u.max_abs());
      }
    }
  }

  TEST_CASE("results are normalized to unit coupling") {
    auto sq = make_space(generate_structured_2d(DomainSpec::lshape(3, 1, 0.25)));
    auto params = SystemParams::with_derived_beta(4, 3, 2);
    auto res = solve_eigenpair(sq, params);
    CHECK(integrate_coupling(res.u, params.alpha, res.v, params.beta) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rayleigh(res.u, res.v, params) == doctest::Approx(res.lambda).epsilon(1e-9));
    CHECK(res.u.values.minCoeff() >= 0.0);
    CHECK(res.v.values.minCoeff() >= 0.0);
  }

  TEST_CASE("the limit does not depend on the initial guess") {
    auto line = make_space(generate_interval(0, 1, 200));
    auto params = SystemParams::with_derived_beta(5, 2.5, 2);
    NewtonConfig newton;
    newton.regularization = 0.0;
    auto a = solve_eigenpair(line, params, tight(), newton);
    auto cfg = tight();
    cfg.guess = GuessKind::scalar_pair;
    auto b = solve_eigenpair(line, params, cfg, newton);
    cfg.guess = GuessKind::supplied;
    cfg.guess_u = interpolate_raw(line, [](const Point& x) { return std::sin(std::numbers::pi * x.x); }).values;
    cfg.guess_v = interpolate_raw(line, [](const Point& x) { return x.x * x.x * (1 - x.x); }).values;
    auto c = solve_eigenpair(line, params, cfg, newton);
    CHECK(b.lambda == doctest::Approx(a.lambda).epsilon(1e-8));
    CHECK(c.lambda == doctest::Approx(a.lambda).epsilon(1e-8));
  }

  TEST_CASE("eigenvalue estimates decrease monotonically") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto line = make_space(generate_interval(0, 1, 100));
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.25)));
    int tried = 0;
    while (tried < 10) {
      const double p = 1.5 + 8.5 * unif(rng);
      const double q = 1.5 + 8.5 * unif(rng);
      const double alpha = 1.0 + (p - 1.0) * unif(rng);
      if (q * (1.0 - alpha / p) < 1.0) continue;
      auto params = SystemParams::with_derived_beta(p, q, alpha);
      auto res = solve_eigenpair(tried % 2 ? sq : line, params);
      CAPTURE(p);
      CAPTURE(q);
      CAPTURE(alpha);
      CHECK(res.converged);
      for (std::size_t k = 1; k < res.history.size(); ++k) {
        CHECK(res.history[k].lambda <= res.history[k - 1].lambda * (1 + 1e-10));
      }
      ++tried;
    }
  }

  TEST_CASE("power gradient system reproduces the coupled system") {
    auto line = make_space(generate_interval(0, 1, 200));
    auto main = solve_eigenpair(line, SystemParams(3, 6, 2, 2), tight());
    auto grad = solve_gradient_system(line, 3, 6, GradientNonlinearity::power(2, 2, 0.5), tight());
    CHECK(grad.lambda == doctest::Approx(main.lambda).epsilon(1e-8));
  }

  TEST_CASE("unequal powers obey the rescaling identity") {
    auto line = make_space(generate_interval(0, 1, 200));
    const double p = 4, q = 3, alpha = 2;
    const double beta = q * (1 - alpha / p);
    auto main = solve_eigenpair(line, SystemParams(p, q, alpha, beta), tight());
    auto grad = solve_gradient_system(line, p, q, GradientNonlinearity::power(alpha, beta), tight());
    const double expected = main.lambda * std::pow(alpha / beta, beta / q) / alpha;
    CHECK(grad.lambda == doctest::Approx(expected).epsilon(1e-7));
  }

  TEST_CASE("resonant system with equal exponents and unequal powers") {
    auto line = make_space(generate_interval(0, 1, 200));
    auto res = solve_gradient_system(line, 4, 4, GradientNonlinearity::resonant(1, 3, Coefficient::one()));
    CHECK(res.converged);
    CHECK((res.u.values - res.v.values).lpNorm<Eigen::Infinity>() > 1e-3);
  }

  TEST_CASE("gradient system rejects bad degrees") {
    auto line = make_space(generate_interval(0, 1, 20));
    CHECK_THROWS_AS(solve_gradient_system(line, 4, 4, GradientNonlinearity::power(1, 1)), std::invalid_argument);
  }

  TEST_CASE("weighted scalar problem") {
    auto line = make_space(generate_interval(0, 1, 400));
    auto plain = solve_scalar(line, 3, tight());
    auto doubled = solve_weighted_scalar(line, 3, Coefficient::constant(2.0), tight());
    CHECK(doubled.lambda == doctest::Approx(plain.lambda / 2).epsilon(1e-8));
    CHECK_THROWS_AS(solve_weighted_scalar(line, 3, Coefficient::constant(-1.0)), std::invalid_argument);
    auto touching = Coefficient::function([](const Point& x) { return x.x; });
    CHECK_THROWS_AS(solve_weighted_scalar(line, 3, touching), std::invalid_argument);
  }

  TEST_CASE("inadmissible initial guess") {
    auto line = make_space(generate_interval(0, 1, 50));
    OuterConfig cfg;
    cfg.guess = GuessKind::supplied;
    cfg.guess_u = default_guess(line).values;
    cfg.guess_v = -cfg.guess_u;
    CHECK_THROWS_AS(solve_eigenpair(line, SystemParams(2, 2, 1, 1), cfg), InadmissiblePair);
  }

  TEST_CASE("iteration cap reports non-convergence") {
    auto line = make_space(generate_interval(0, 1, 50));
    OuterConfig cfg;
    cfg.max_outer = 1;
    auto res = solve_eigenpair(line, SystemParams::with_derived_beta(6, 3, 2), cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.outer_iters == 1);
  }

  TEST_CASE("concurrent solves give identical results") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.25)));
    auto params = SystemParams::with_derived_beta(5, 3, 2);
    auto one = solve_eigenpair(sq, params);
    OuterConfig cfg;
    cfg.threads = 2;
    auto two = solve_eigenpair(sq, params, cfg);
    CHECK(one.lambda == two.lambda);
    CHECK(one.history.size() == two.history.size());
  }

  TEST_CASE("inner failure names the outer iteration") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.125)));
    NewtonConfig newton;
    newton.max_iters = 1;
    try {
      solve_eigenpair(sq, SystemParams::with_derived_beta(6, 3, 2), {}, newton);
      FAIL("expected an inner failure");
    } catch (const EigenSolveError& e) {
      CHECK(e.outer_iteration() >= 1);
    }
  }

  TEST_CASE("default guess and Bessel profile") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.5)));
    auto g = default_guess(sq);
    for (std::size_t i = 0; i < sq->num_nodes(); ++i) {
      CHECK((sq->is_dirichlet(i) ? g[i] == 0.0 : g[i] > 0.0));
    }
    CHECK(std::abs(bessel_ground_state(1.0)) < 1e-12);
    CHECK(bessel_ground_state(0.0) == 1.0);
  }
}
