#include "plap/space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plap {

namespace {

constexpr double kGaussOffset = 0.21132486540518711775;  // (1 - 1/sqrt(3)) / 2

}  // namespace

P1Space::P1Space(const Mesh1D& mesh) : dim_(1), radial_(mesh.weight() == Weight::radial) {
  const auto& x = mesh.nodes();
  coords_.reserve(x.size());
  for (double xi : x) coords_.push_back({xi, 0.0});
  dirichlet_.assign(x.size(), 0);
  if (mesh.left() == Boundary::dirichlet) dirichlet_.front() = 1;
  if (mesh.right() == Boundary::dirichlet) dirichlet_.back() = 1;

  elements_.reserve(mesh.num_elements());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    Element e;
    e.count = 2;
    e.nodes = {i, i + 1, 0};
    const double a = x[i];
    const double b = x[i + 1];
    const double len = b - a;
    e.grad[0] = {-1.0 / len, 0.0};
    e.grad[1] = {1.0 / len, 0.0};
    e.measure = radial_ ? 0.5 * (b * b - a * a) : len;
    e.quad_count = 2;
    for (int k = 0; k < 2; ++k) {
      const double t = k == 0 ? kGaussOffset : 1.0 - kGaussOffset;
      QuadPoint& q = e.quad[k];
      q.x = {a + t * len, 0.0};
      q.shape = {1.0 - t, t, 0.0};
      q.weight = 0.5 * len * (radial_ ? q.x.x : 1.0);
    }
    elements_.push_back(e);
  }
  for (char d : dirichlet_) n_dirichlet_ += d ? 1 : 0;
}

P1Space::P1Space(const Mesh2D& mesh) : dim_(2) {
  coords_ = mesh.nodes();
  dirichlet_.assign(coords_.size(), 0);
  for (auto i : mesh.boundary_nodes()) dirichlet_[i] = 1;
  n_dirichlet_ = mesh.boundary_nodes().size();
  for (const auto& edge : mesh.boundary_edges()) {
    boundary_segments_.push_back({coords_[edge[0]], coords_[edge[1]]});
  }

  static constexpr double bary[3][3] = {
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
      {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
  };
  elements_.reserve(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point& p0 = coords_[tri[0]];
    const Point& p1 = coords_[tri[1]];
    const Point& p2 = coords_[tri[2]];
    const double area = mesh.area(t);
    Element e;
    e.count = 3;
    e.nodes = tri;
    e.measure = area;
    const double inv2a = 1.0 / (2.0 * area);
    e.grad[0] = {(p1.y - p2.y) * inv2a, (p2.x - p1.x) * inv2a};
    e.grad[1] = {(p2.y - p0.y) * inv2a, (p0.x - p2.x) * inv2a};
    e.grad[2] = {(p0.y - p1.y) * inv2a, (p1.x - p0.x) * inv2a};
    e.quad_count = 3;
    for (int k = 0; k < 3; ++k) {
      QuadPoint& q = e.quad[k];
      q.shape = {bary[k][0], bary[k][1], bary[k][2]};
      q.x = {bary[k][0] * p0.x + bary[k][1] * p1.x + bary[k][2] * p2.x,
             bary[k][0] * p0.y + bary[k][1] * p1.y + bary[k][2] * p2.y};
      q.weight = area / 3.0;
    }
    elements_.push_back(e);
  }
}

SpacePtr make_space(const Mesh1D& mesh) { return std::make_shared<const P1Space>(mesh); }
SpacePtr make_space(const Mesh2D& mesh) { return std::make_shared<const P1Space>(mesh); }

FemFunction::FemFunction(SpacePtr s, Eigen::VectorXd v) : space(std::move(s)), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != space->num_nodes()) {
    throw std::invalid_argument("coefficient count does not match node count");
  }
}

FemFunction interpolate_raw(const SpacePtr& space, const std::function<double(const Point&)>& f) {
  FemFunction u(space);
  const auto& x = space->coordinates();
  for (std::size_t i = 0; i < x.size(); ++i) u.values[static_cast<Eigen::Index>(i)] = f(x[i]);
  return u;
}

FemFunction interpolate(const SpacePtr& space, const std::function<double(const Point&)>& f) {
  FemFunction u = interpolate_raw(space, f);
  for (std::size_t i = 0; i < space->num_nodes(); ++i) {
    if (space->is_dirichlet(i)) u.values[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return u;
}

void require_same_space(const FemFunction& a, const FemFunction& b) {
  if (!a.space || a.space != b.space) {
    throw std::invalid_argument("fields live on different meshes");
  }
}

Coefficient Coefficient::constant(double c) {
  Coefficient w;
  w.kind_ = Kind::constant;
  w.value_ = c;
  return w;
}

Coefficient Coefficient::function(std::function<double(const Point&)> f) {
  Coefficient w;
  w.kind_ = Kind::function;
  w.fn_ = std::move(f);
  return w;
}

Coefficient Coefficient::nodal(FemFunction f) {
  Coefficient w;
  w.kind_ = Kind::nodal;
  w.field_ = std::move(f);
  return w;
}

double Coefficient::at(const Element& e, const QuadPoint& q) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::function: return fn_(q.x);
    case Kind::nodal: return field_.at(e, q);
  }
  return value_;
}

double Coefficient::minimum(const P1Space& space) const {
  if (kind_ == Kind::constant) return value_;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : space.elements()) {
    for (int k = 0; k < e.quad_count; ++k) m = std::min(m, at(e, e.quad[k]));
  }
  if (kind_ == Kind::nodal) m = std::min(m, field_.values.minCoeff());
  if (kind_ == Kind::function) {
    for (const auto& x : space.coordinates()) m = std::min(m, fn_(x));
  }
  return m;
}

Eigen::VectorXd assemble_load(const P1Space& space,
                              const std::function<double(const Element&, const QuadPoint&)>& g) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_nodes()));
  for (const auto& e : space.elements()) {
    for (int k = 0; k < e.quad_count; ++k) {
      const QuadPoint& q = e.quad[k];
      const double wg = q.weight * g(e, q);
      for (int a = 0; a < e.count; ++a) b[static_cast<Eigen::Index>(e.nodes[a])] += wg * q.shape[a];
    }
  }
  return b;
}

Eigen::VectorXd load_from_nodal(const P1Space& space, const Eigen::VectorXd& f) {
  if (static_cast<std::size_t>(f.size()) != space.num_nodes()) {
    throw std::invalid_argument("source field size does not match node count");
  }
  return assemble_load(space, [&](const Element& e, const QuadPoint& q) {
    double s = 0.0;
    for (int a = 0; a < e.count; ++a) s += q.shape[a] * f[static_cast<Eigen::Index>(e.nodes[a])];
    return s;
  });
}

double integrate(const P1Space& space,
                 const std::function<double(const Element&, const QuadPoint&)>& g) {
  double total = 0.0;
  for (const auto& e : space.elements()) {
    for (int k = 0; k < e.quad_count; ++k) total += e.quad[k].weight * g(e, e.quad[k]);
  }
  return total;
}

}  // namespace plap
