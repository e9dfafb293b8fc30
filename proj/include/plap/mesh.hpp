#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace plap {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Boundary { dirichlet, natural };

/// Metric of a 1D mesh. `radial` integrates against r dr, the reduction of
/// a rotationally symmetric problem on the unit disc.
enum class Weight { none, radial };

/// Interval mesh with strictly increasing nodes.
class Mesh1D {
 public:
  Mesh1D(std::vector<double> nodes, Weight weight = Weight::none,
         Boundary left = Boundary::dirichlet, Boundary right = Boundary::dirichlet);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_elements() const noexcept { return nodes_.size() - 1; }
  Weight weight() const noexcept { return weight_; }
  Boundary left() const noexcept { return left_; }
  Boundary right() const noexcept { return right_; }
  double a() const noexcept { return nodes_.front(); }
  double b() const noexcept { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  Weight weight_;
  Boundary left_;
  Boundary right_;
};

using Triangle = std::array<std::size_t, 3>;

/// Conforming P1 triangulation. Construction validates indices, rejects
/// degenerate triangles, orients every triangle counter-clockwise and derives
/// the boundary from edge multiplicities.
class Mesh2D {
 public:
  Mesh2D(std::vector<Point> nodes, std::vector<Triangle> triangles);

  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }

  /// Sorted indices of nodes on edges that belong to exactly one triangle.
  const std::vector<std::size_t>& boundary_nodes() const noexcept { return boundary_nodes_; }
  bool is_boundary(std::size_t node) const { return on_boundary_[node]; }

  /// Edges (node pairs) owned by exactly one triangle, oriented along the
  /// counter-clockwise traversal of their triangle.
  const std::vector<std::array<std::size_t, 2>>& boundary_edges() const noexcept {
    return boundary_edges_;
  }

  /// Signed area of triangle `t` (positive after construction).
  double area(std::size_t t) const;

  /// Longest edge over all triangles.
  double max_edge_length() const;

 private:
  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<std::size_t> boundary_nodes_;
  std::vector<char> on_boundary_;
  std::vector<std::array<std::size_t, 2>> boundary_edges_;
};

enum class DomainKind { interval, disc_radial, rectangle, lshape, isosceles_triangle, external_file };

/// Geometry plus target mesh size. Field meaning per kind:
///   interval            (0, width)
///   disc_radial         unit disc, reduced to (0, 1) with radial weight
///   rectangle           (0, width) x (0, height)
///   lshape              (0, width)^2 minus [arm, width]^2
///   isosceles_triangle  base `width` on the x axis, apex at height `height`
///   external_file       mesh read from `path`
struct DomainSpec {
  DomainKind kind = DomainKind::rectangle;
  double width = 2.0;
  double height = 2.0;
  double arm = 1.0;
  double h = 1.0 / 16.0;
  std::string path;

  static DomainSpec interval(double length, double h);
  static DomainSpec disc(double h);
  static DomainSpec rectangle(double width, double height, double h);
  static DomainSpec lshape(double size, double arm, double h);
  static DomainSpec isosceles_triangle(double base, double altitude, double h);
  static DomainSpec file(std::string path);

  void validate() const;
};

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

Mesh1D generate_interval(double a, double b, std::size_t n);

/// Unit-interval mesh for the radial reduction of the unit disc: natural
/// condition at r = 0, Dirichlet at r = 1, weight r.
Mesh1D generate_radial(std::size_t n);

/// Structured triangulation of rectangle, L-shape or isosceles triangle.
///
/// Rectangles and L-shapes are covered by square cells whose side is the
/// largest value <= h that divides the geometry; every cell is split along
/// its lower-left to upper-right diagonal. The triangle is uniformly refined
/// into k^2 similar copies with k base subdivisions of length <= h.
Mesh2D generate_structured_2d(const DomainSpec& spec);

Mesh2D read_mesh(const std::filesystem::path& path);
Mesh2D parse_mesh(const std::string& text);
void write_mesh(const Mesh2D& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh2D& mesh);

double domain_area(const Mesh2D& mesh);

/// Radius of the largest disc inside the meshed domain, from a sampled
/// distance field (nodes and barycenters, then local pattern search around
/// the best samples). Accurate to O(h).
double inscribed_radius(const Mesh2D& mesh);

/// Even-odd test against the boundary polyline.
bool contains(const Mesh2D& mesh, const Point& point);

/// Distance from `point` to the nearest boundary edge.
double distance_to_boundary(const Mesh2D& mesh, const Point& point);

}  // namespace plap
