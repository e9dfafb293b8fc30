#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "plap/mesh.hpp"

namespace plap {

/// Quadrature point of an element. `weight` already includes the element
/// measure and, on radial meshes, the factor r.
struct QuadPoint {
  Point x;
  double weight = 0.0;
  std::array<double, 3> shape{};
};

/// P1 element data. 1D elements use the first two slots.
struct Element {
  std::array<std::size_t, 3> nodes{};
  int count = 0;
  std::array<std::array<double, 2>, 3> grad{};
  double measure = 0.0;  // integral of the metric weight over the element
  std::array<QuadPoint, 3> quad{};
  int quad_count = 0;
};

/// Continuous piecewise-linear space on a 1D, radial or triangular mesh with
/// homogeneous Dirichlet constraints on the mesh's Dirichlet nodes.
///
/// Source and coupling terms use degree-2 Gauss rules: 2 points per interval,
/// 3 interior points per triangle.
class P1Space {
 public:
  explicit P1Space(const Mesh1D& mesh);
  explicit P1Space(const Mesh2D& mesh);

  int dimension() const noexcept { return dim_; }
  bool radial() const noexcept { return radial_; }
  std::size_t num_nodes() const noexcept { return coords_.size(); }
  std::size_t num_elements() const noexcept { return elements_.size(); }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  const std::vector<Point>& coordinates() const noexcept { return coords_; }
  bool is_dirichlet(std::size_t node) const { return dirichlet_[node] != 0; }
  std::size_t num_dirichlet() const noexcept { return n_dirichlet_; }

  /// Boundary segments (1D: empty) used by distance-type initial guesses.
  const std::vector<std::array<Point, 2>>& boundary_segments() const noexcept {
    return boundary_segments_;
  }

 private:
  int dim_;
  bool radial_ = false;
  std::vector<Point> coords_;
  std::vector<Element> elements_;
  std::vector<char> dirichlet_;
  std::size_t n_dirichlet_ = 0;
  std::vector<std::array<Point, 2>> boundary_segments_;
};

using SpacePtr = std::shared_ptr<const P1Space>;

SpacePtr make_space(const Mesh1D& mesh);
SpacePtr make_space(const Mesh2D& mesh);

/// Nodal coefficient vector of a P1 field on a shared space.
struct FemFunction {
  SpacePtr space;
  Eigen::VectorXd values;

  FemFunction() = default;
  explicit FemFunction(SpacePtr s) : space(std::move(s)), values(Eigen::VectorXd::Zero(space->num_nodes())) {}
  FemFunction(SpacePtr s, Eigen::VectorXd v);

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }

  /// Value at an element quadrature point.
  double at(const Element& e, const QuadPoint& q) const {
    double s = 0.0;
    for (int k = 0; k < e.count; ++k) s += q.shape[k] * values[static_cast<Eigen::Index>(e.nodes[k])];
    return s;
  }

  /// Constant gradient on element `e`.
  std::array<double, 2> gradient(const Element& e) const {
    std::array<double, 2> g{0.0, 0.0};
    for (int k = 0; k < e.count; ++k) {
      const double c = values[static_cast<Eigen::Index>(e.nodes[k])];
      g[0] += c * e.grad[k][0];
      g[1] += c * e.grad[k][1];
    }
    return g;
  }

  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

/// Nodal interpolant; Dirichlet nodes are set to zero.
FemFunction interpolate(const SpacePtr& space, const std::function<double(const Point&)>& f);

/// Nodal interpolant without imposing the boundary condition.
FemFunction interpolate_raw(const SpacePtr& space, const std::function<double(const Point&)>& f);

void require_same_space(const FemFunction& a, const FemFunction& b);

/// Scalar coefficient evaluated at quadrature points: constant, analytic
/// function, or P1 nodal field.
class Coefficient {
 public:
  static Coefficient one() { return constant(1.0); }
  static Coefficient constant(double c);
  static Coefficient function(std::function<double(const Point&)> f);
  static Coefficient nodal(FemFunction f);

  double at(const Element& e, const QuadPoint& q) const;
  bool is_unit() const noexcept { return kind_ == Kind::constant && value_ == 1.0; }

  /// Smallest value over all quadrature points and nodes of `space`.
  double minimum(const P1Space& space) const;

 private:
  enum class Kind { constant, function, nodal };
  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  std::function<double(const Point&)> fn_;
  FemFunction field_;
};

/// Load vector b_i = sum over quadrature points of w * g(e, q) * phi_i.
Eigen::VectorXd assemble_load(const P1Space& space,
                              const std::function<double(const Element&, const QuadPoint&)>& g);

/// Load vector of the P1 interpolant of nodal values `f`.
Eigen::VectorXd load_from_nodal(const P1Space& space, const Eigen::VectorXd& f);

/// Integral of g over the domain by element quadrature.
double integrate(const P1Space& space,
                 const std::function<double(const Element&, const QuadPoint&)>& g);

}  // namespace plap
