#include <doctest.h>

#include <cmath>

#include "plap/fem.hpp"
#include "plap/space.hpp"

using namespace plap;

TEST_SUITE("space") {
  TEST_CASE("Dirichlet flags follow the mesh") {
    auto line = make_space(generate_interval(0, 1, 4));
    CHECK(line->is_dirichlet(0));
    CHECK(line->is_dirichlet(4));
    CHECK(line->num_dirichlet() == 2);
    auto disc = make_space(generate_radial(4));
    CHECK_FALSE(disc->is_dirichlet(0));
    CHECK(disc->is_dirichlet(4));
    CHECK(disc->radial());
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.5)));
    CHECK(sq->num_dirichlet() == 16);
    CHECK(sq->boundary_segments().size() == 16);
  }

  TEST_CASE("quadrature is exact for quadratics") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(1, 1, 0.25)));
    const double xy2 = integrate(*sq, [](const Element&, const QuadPoint& q) {
      return q.x.x * q.x.x + q.x.x * q.x.y;
    });
    CHECK(xy2 == doctest::Approx(1.0 / 3.0 + 0.25).epsilon(1e-13));

    auto line = make_space(generate_interval(0, 2, 3));
    CHECK(integrate(*line, [](const Element&, const QuadPoint& q) { return q.x.x * q.x.x; }) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-13));

    // Radial weight: int_0^1 r * r^2 dr = 1/4 (cubic, still exact).
    auto disc = make_space(generate_radial(7));
    CHECK(integrate(*disc, [](const Element&, const QuadPoint& q) { return q.x.x * q.x.x; }) ==
          doctest::Approx(0.25).epsilon(1e-13));
  }

  TEST_CASE("coupling integral examples") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(1, 1, 0.25)));
    auto one = interpolate_raw(sq, [](const Point&) { return 1.0; });
    CHECK(integrate_coupling(one, 1, one, 1) == doctest::Approx(1.0).epsilon(1e-12));

    auto disc = make_space(generate_radial(500));
    auto w = interpolate_raw(disc, [](const Point& x) { return (1 - x.x) * (1 - x.x); });
    CHECK(std::abs(integrate_coupling(w, 1, w, 1) - 1.0 / 30.0) <= 1e-6);

    auto neg = w;
    neg.values = -w.values;
    CHECK(integrate_coupling(w, 1, neg, 1) <= 0.0);
  }

  TEST_CASE("interpolation zeroes Dirichlet nodes") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.5)));
    auto f = interpolate(sq, [](const Point&) { return 3.0; });
    for (std::size_t i = 0; i < sq->num_nodes(); ++i) {
      CHECK(f[i] == (sq->is_dirichlet(i) ? 0.0 : 3.0));
    }
  }

  TEST_CASE("load vectors integrate the source") {
    auto sq = make_space(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.25)));
    auto b = assemble_load(*sq, [](const Element&, const QuadPoint& q) { return q.x.x; });
    CHECK(b.sum() == doctest::Approx(4.0).epsilon(1e-13));
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(sq->num_nodes()));
    CHECK(load_from_nodal(*sq, ones).sum() == doctest::Approx(4.0).epsilon(1e-13));
  }

  TEST_CASE("coefficients") {
    auto line = make_space(generate_interval(0, 2, 4));
    auto step = Coefficient::function([](const Point& x) { return x.x <= 1 ? 1.0 : 2.0; });
    CHECK(step.minimum(*line) == 1.0);
    CHECK(integrate(*line, [&](const Element& e, const QuadPoint& q) { return step.at(e, q); }) ==
          doctest::Approx(3.0));
    auto nodal = Coefficient::nodal(interpolate_raw(line, [](const Point& x) { return x.x - 0.5; }));
    CHECK(nodal.minimum(*line) == doctest::Approx(-0.5));
    CHECK(Coefficient::one().is_unit());
    CHECK_FALSE(Coefficient::constant(2).is_unit());
  }

  TEST_CASE("fields on different spaces are rejected") {
    auto a = make_space(generate_interval(0, 1, 4));
    auto b = make_space(generate_interval(0, 1, 4));
    FemFunction u(a), v(b);
    CHECK_THROWS_AS(require_same_space(u, v), std::invalid_argument);
    CHECK_THROWS_AS(integrate_coupling(u, 1, v, 1), std::invalid_argument);
  }
}
