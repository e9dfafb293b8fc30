#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "plap/errors.hpp"
#include "plap/mesh.hpp"

using namespace plap;

namespace {

// Number of triangles owning each undirected edge.
std::map<std::pair<std::size_t, std::size_t>, int> edge_counts(const Mesh2D& m) {
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  for (const auto& t : m.triangles()) {
    for (int i = 0; i < 3; ++i) {
      auto a = t[i], b = t[(i + 1) % 3];
      counts[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  return counts;
}

const std::string kOneTriangle = "NODES 3\n0 0\n1 0\n0 1\nELEMENTS 1\n0 1 2\n";

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("interval generation") {
    auto m = generate_interval(0.0, 1.0, 500);
    CHECK(m.num_nodes() == 501);
    CHECK(m.nodes()[1] - m.nodes()[0] == doctest::Approx(0.002));
    auto one = generate_interval(0.0, 1.0, 1);
    CHECK(one.nodes() == std::vector<double>{0.0, 1.0});
    auto four = generate_interval(0.0, 2.0, 4);
    CHECK(four.nodes() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK_THROWS_AS(generate_interval(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_interval(1.0, 1.0, 3), std::invalid_argument);
  }

  TEST_CASE("1D mesh invariants") {
    CHECK_THROWS(Mesh1D({0.0, 0.5, 0.5, 1.0}));
    CHECK_THROWS(Mesh1D({0.1, 1.0}, Weight::radial, Boundary::natural, Boundary::dirichlet));
    CHECK_THROWS(Mesh1D({0.0, 1.0}, Weight::radial, Boundary::dirichlet, Boundary::dirichlet));
    auto r = generate_radial(10);
    CHECK(r.weight() == Weight::radial);
    CHECK(r.left() == Boundary::natural);
    CHECK(r.right() == Boundary::dirichlet);
  }

  TEST_CASE("structured rectangle and L-shape counts") {
    auto sq = generate_structured_2d(DomainSpec::rectangle(2, 2, 1.0));
    CHECK(sq.num_triangles() == 8);
    CHECK(sq.num_nodes() == 9);
    auto l = generate_structured_2d(DomainSpec::lshape(3, 1, 1.0));
    CHECK(l.num_triangles() == 10);
    CHECK(domain_area(l) == doctest::Approx(5.0).epsilon(1e-12));
    // Cell size h on the 2x2 square; documented not to reproduce the
    // unstructured reference counts of 4904 nodes and 2390 elements.
    auto fine = generate_structured_2d(DomainSpec::rectangle(2, 2, 1.0 / 16));
    CHECK(fine.num_nodes() == 1089);
    CHECK(fine.num_triangles() == 2048);
  }

  TEST_CASE("refinement quadruples the triangle count") {
    for (double h : {0.5, 0.25, 0.125}) {
      auto a = generate_structured_2d(DomainSpec::rectangle(2, 2, h));
      auto b = generate_structured_2d(DomainSpec::rectangle(2, 2, h / 2));
      CHECK(b.num_triangles() == 4 * a.num_triangles());
      auto la = generate_structured_2d(DomainSpec::lshape(3, 1, h));
      auto lb = generate_structured_2d(DomainSpec::lshape(3, 1, h / 2));
      CHECK(lb.num_triangles() == 4 * la.num_triangles());
      auto ta = generate_structured_2d(DomainSpec::isosceles_triangle(1, 1, h));
      auto tb = generate_structured_2d(DomainSpec::isosceles_triangle(1, 1, h / 2));
      CHECK(tb.num_triangles() == 4 * ta.num_triangles());
      CHECK(domain_area(tb) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  TEST_CASE("edge multiplicities and orientation") {
    for (const auto& spec : {DomainSpec::rectangle(2, 2, 0.25), DomainSpec::lshape(3, 1, 0.5),
                             DomainSpec::isosceles_triangle(1, 1, 0.125)}) {
      auto m = generate_structured_2d(spec);
      std::size_t boundary_edges = 0;
      for (const auto& [edge, count] : edge_counts(m)) {
        CHECK((count == 1 || count == 2));
        if (count == 1) {
          ++boundary_edges;
          CHECK(m.is_boundary(edge.first));
          CHECK(m.is_boundary(edge.second));
        }
      }
      CHECK(boundary_edges == m.boundary_edges().size());
      for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(m.area(t) > 0.0);
    }
  }

  TEST_CASE("h larger than the diameter is rejected") {
    CHECK_THROWS(generate_structured_2d(DomainSpec::rectangle(2, 2, 10.0)));
    CHECK_THROWS(generate_structured_2d(DomainSpec::rectangle(2, 2, -1.0)));
  }

  TEST_CASE("clockwise input triangles are reoriented") {
    Mesh2D m({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
    CHECK(m.area(0) == doctest::Approx(0.5));
  }

  TEST_CASE("mesh file parsing") {
    auto m = parse_mesh(kOneTriangle);
    CHECK(m.num_triangles() == 1);
    CHECK(m.boundary_nodes().size() == 3);

    auto with_comments = parse_mesh("# header\nNODES 3\n0 0\n\n1 0 # node\n0 1\nELEMENTS 1\n0 1 2\n");
    CHECK(with_comments.num_nodes() == 3);

    try {
      parse_mesh("NODES 3\n0 0\n1 0\n0 1\nELEMENTS 1\n0 1 99\n");
      FAIL("expected an error");
    } catch (const MeshError& e) {
      CHECK(std::string(e.what()).find("index out of range") != std::string::npos);
      CHECK(e.line() == 6);
    }
    try {
      parse_mesh("NODES 3\n0 0\n1 0\n2 0\nELEMENTS 1\n0 1 2\n");
      FAIL("expected an error");
    } catch (const MeshError& e) {
      CHECK(std::string(e.what()).find("degenerate") != std::string::npos);
      CHECK(e.line() == 6);
    }
    CHECK_THROWS_AS(parse_mesh("NODES 4\n0 0\n1 0\n0 1\nELEMENTS 1\n0 1 2\n"), MeshError);
    CHECK_THROWS_AS(parse_mesh("NODES 3\n0 0\n1 0\n0 1\nELEMENTS 2\n0 1 2\n"), MeshError);
    CHECK_THROWS_AS(parse_mesh("NODES x\n"), MeshError);
    CHECK_THROWS_AS(read_mesh("/nonexistent/mesh.txt"), std::runtime_error);
  }

  TEST_CASE("write then read is the identity") {
    auto m = generate_structured_2d(DomainSpec::lshape(3, 1, 0.5));
    auto back = parse_mesh(format_mesh(m));
    REQUIRE(back.num_nodes() == m.num_nodes());
    REQUIRE(back.num_triangles() == m.num_triangles());
    for (std::size_t i = 0; i < m.num_nodes(); ++i) {
      CHECK(back.nodes()[i].x == m.nodes()[i].x);
      CHECK(back.nodes()[i].y == m.nodes()[i].y);
    }
    CHECK(back.triangles() == m.triangles());
    CHECK(back.boundary_nodes() == m.boundary_nodes());
  }

  TEST_CASE("domain area") {
    CHECK(domain_area(generate_structured_2d(DomainSpec::rectangle(1, 1, 0.25))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(domain_area(generate_structured_2d(DomainSpec::rectangle(2, 2, 0.25))) ==
          doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("domain area is invariant under node relabeling") {
    auto m = generate_structured_2d(DomainSpec::lshape(3, 1, 0.25));
    std::vector<std::size_t> perm(m.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(7);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Point> nodes(m.num_nodes());
    for (std::size_t i = 0; i < m.num_nodes(); ++i) nodes[perm[i]] = m.nodes()[i];
    std::vector<Triangle> tris;
    for (const auto& t : m.triangles()) tris.push_back({perm[t[0]], perm[t[1]], perm[t[2]]});
    Mesh2D shuffled(nodes, tris);
    CHECK(domain_area(shuffled) == doctest::Approx(domain_area(m)).epsilon(1e-13));
    CHECK(shuffled.boundary_nodes().size() == m.boundary_nodes().size());
  }

  TEST_CASE("inscribed radius") {
    const double h = 0.125;
    CHECK(std::abs(inscribed_radius(generate_structured_2d(DomainSpec::rectangle(1, 1, h))) - 0.5) <= h);
    CHECK(std::abs(inscribed_radius(generate_structured_2d(DomainSpec::rectangle(2, 2, h))) - 1.0) <= h);
    CHECK(std::abs(inscribed_radius(generate_structured_2d(DomainSpec::lshape(3, 1, h))) - 0.5) <= h);
    // Incircle of the triangle with base 1 and altitude 1.
    const double r = 0.5 / (0.5 * (1.0 + std::sqrt(5.0)));
    CHECK(std::abs(inscribed_radius(generate_structured_2d(DomainSpec::isosceles_triangle(1, 1, h))) - r) <= h);
  }

  TEST_CASE("point containment") {
    auto l = generate_structured_2d(DomainSpec::lshape(3, 1, 0.5));
    CHECK(contains(l, {0.5, 2.5}));
    CHECK(contains(l, {2.5, 0.5}));
    CHECK_FALSE(contains(l, {2.0, 2.0}));
    CHECK_FALSE(contains(l, {-0.1, 0.5}));
    CHECK(distance_to_boundary(l, {0.5, 0.5}) == doctest::Approx(0.5));
  }

  TEST_CASE("heart mesh file") {
    auto m = read_mesh(std::string(PLAP_SOURCE_DIR) + "/data/heart_h16.mesh");
    // Two upper half-ellipses of area pi each and a lower half-ellipse of
    // area 4 pi; the polygonal boundary loses O(h^2).
    CHECK(domain_area(m) == doctest::Approx(6.0 * std::numbers::pi).epsilon(1e-3));
    CHECK(m.max_edge_length() < 2.0 / 16.0);
    CHECK(contains(m, {1.0, 1.0}));
    CHECK(contains(m, {0.0, -2.0}));
    CHECK_FALSE(contains(m, {0.0, 0.5}));
  }

  TEST_CASE("domain kind names") {
    CHECK(domain_kind_from_string("square") == DomainKind::rectangle);
    CHECK(domain_kind_from_string("lshape") == DomainKind::lshape);
    CHECK(to_string(DomainKind::isosceles_triangle) == to_string(domain_kind_from_string("triangle")));
    CHECK_THROWS(domain_kind_from_string("torus"));
  }
}
