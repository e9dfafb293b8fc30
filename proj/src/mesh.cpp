#include "plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "plap/errors.hpp"

namespace plap {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double edge_length(const Point& a, const Point& b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Number of cells of side <= h covering `length`, tolerant to h given as a
// rounded decimal of length / n.
std::size_t cells_for(double length, double h) {
  const double ratio = length / h;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace

Mesh1D::Mesh1D(std::vector<double> nodes, Weight weight, Boundary left, Boundary right)
    : nodes_(std::move(nodes)), weight_(weight), left_(left), right_(right) {
  if (nodes_.size() < 2) throw MeshError("1D mesh needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw MeshError("1D mesh nodes must be strictly increasing");
  }
  if (weight_ == Weight::radial) {
    if (nodes_.front() != 0.0) throw MeshError("radial mesh must start at r = 0");
    if (left_ != Boundary::natural || right_ != Boundary::dirichlet) {
      throw MeshError("radial mesh needs a natural condition at r = 0 and Dirichlet at the rim");
    }
  }
}

Mesh2D::Mesh2D(std::vector<Point> nodes, std::vector<Triangle> triangles)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)) {
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  const std::size_t n = nodes_.size();

  // Edge -> (owner count, oriented copy from the last owner).
  std::map<std::pair<std::size_t, std::size_t>, std::pair<int, std::array<std::size_t, 2>>> edges;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (auto idx : tri) {
      if (idx >= n) {
        throw MeshError("triangle " + std::to_string(t) + ": index " + std::to_string(idx) +
                        " out of range (" + std::to_string(n) + " nodes)");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    const double a = signed_area(nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]);
    const double scale = std::max({edge_length(nodes_[tri[0]], nodes_[tri[1]]),
                                   edge_length(nodes_[tri[1]], nodes_[tri[2]]),
                                   edge_length(nodes_[tri[2]], nodes_[tri[0]])});
    if (std::abs(a) <= 1e-14 * scale * scale) {
      throw MeshError("triangle " + std::to_string(t) + " is degenerate (zero area)");
    }
    if (a < 0.0) std::swap(tri[1], tri[2]);
    for (int k = 0; k < 3; ++k) {
      const std::size_t i = tri[k];
      const std::size_t j = tri[(k + 1) % 3];
      auto& entry = edges[{std::min(i, j), std::max(i, j)}];
      entry.first += 1;
      entry.second = {i, j};
    }
  }

  on_boundary_.assign(n, 0);
  std::vector<int> boundary_degree(n, 0);
  for (const auto& [key, entry] : edges) {
    if (entry.first > 2) {
      throw MeshError("edge (" + std::to_string(key.first) + ", " + std::to_string(key.second) +
                      ") is shared by more than two triangles");
    }
    if (entry.first == 1) {
      boundary_edges_.push_back(entry.second);
      on_boundary_[key.first] = on_boundary_[key.second] = 1;
      ++boundary_degree[key.first];
      ++boundary_degree[key.second];
    }
  }
  // A hanging node shows up as an open boundary chain.
  for (std::size_t i = 0; i < n; ++i) {
    if (boundary_degree[i] % 2 != 0) {
      throw MeshError("mesh is not conforming near node " + std::to_string(i));
    }
    if (on_boundary_[i]) boundary_nodes_.push_back(i);
  }
}

double Mesh2D::area(std::size_t t) const {
  const auto& tri = triangles_.at(t);
  return signed_area(nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]);
}

double Mesh2D::max_edge_length() const {
  double longest = 0.0;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      longest = std::max(longest, edge_length(nodes_[tri[k]], nodes_[tri[(k + 1) % 3]]));
    }
  }
  return longest;
}

DomainSpec DomainSpec::interval(double length, double h) {
  DomainSpec s;
  s.kind = DomainKind::interval;
  s.width = length;
  s.height = 0.0;
  s.h = h;
  return s;
}

DomainSpec DomainSpec::disc(double h) {
  DomainSpec s;
  s.kind = DomainKind::disc_radial;
  s.width = 1.0;
  s.height = 0.0;
  s.h = h;
  return s;
}

DomainSpec DomainSpec::rectangle(double width, double height, double h) {
  DomainSpec s;
  s.kind = DomainKind::rectangle;
  s.width = width;
  s.height = height;
  s.h = h;
  return s;
}

DomainSpec DomainSpec::lshape(double size, double arm, double h) {
  DomainSpec s;
  s.kind = DomainKind::lshape;
  s.width = size;
  s.height = size;
  s.arm = arm;
  s.h = h;
  return s;
}

DomainSpec DomainSpec::isosceles_triangle(double base, double altitude, double h) {
  DomainSpec s;
  s.kind = DomainKind::isosceles_triangle;
  s.width = base;
  s.height = altitude;
  s.h = h;
  return s;
}

DomainSpec DomainSpec::file(std::string path) {
  DomainSpec s;
  s.kind = DomainKind::external_file;
  s.path = std::move(path);
  return s;
}

void DomainSpec::validate() const {
  if (kind == DomainKind::external_file) {
    if (path.empty()) throw std::invalid_argument("external mesh domain needs a path");
    return;
  }
  if (!(h > 0.0)) throw std::invalid_argument("mesh size h must be positive");
  if (!(width > 0.0)) throw std::invalid_argument("domain width must be positive");
  switch (kind) {
    case DomainKind::rectangle:
    case DomainKind::isosceles_triangle:
      if (!(height > 0.0)) throw std::invalid_argument("domain height must be positive");
      break;
    case DomainKind::lshape:
      if (!(arm > 0.0) || !(arm < width)) {
        throw std::invalid_argument("L-shape arm must lie in (0, size)");
      }
      break;
    default:
      break;
  }
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::interval: return "interval";
    case DomainKind::disc_radial: return "disc";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::lshape: return "lshape";
    case DomainKind::isosceles_triangle: return "triangle";
    case DomainKind::external_file: return "file";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "interval") return DomainKind::interval;
  if (name == "disc" || name == "disc_radial") return DomainKind::disc_radial;
  if (name == "rectangle" || name == "square") return DomainKind::rectangle;
  if (name == "lshape") return DomainKind::lshape;
  if (name == "triangle" || name == "isosceles_triangle") return DomainKind::isosceles_triangle;
  if (name == "file" || name == "external_file") return DomainKind::external_file;
  throw std::invalid_argument("unknown domain kind '" + name + "'");
}

Mesh1D generate_interval(double a, double b, std::size_t n) {
  if (n < 1) throw std::invalid_argument("interval mesh needs at least one element");
  if (!(a < b)) throw std::invalid_argument("interval mesh needs a < b");
  std::vector<double> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  }
  nodes.back() = b;
  return Mesh1D(std::move(nodes));
}

Mesh1D generate_radial(std::size_t n) {
  if (n < 1) throw std::invalid_argument("radial mesh needs at least one element");
  std::vector<double> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = static_cast<double>(i) / static_cast<double>(n);
  return Mesh1D(std::move(nodes), Weight::radial, Boundary::natural, Boundary::dirichlet);
}

namespace {

Mesh2D square_cells(double width, double height, double cell, std::size_t nx, std::size_t ny,
                    const std::vector<char>& keep_cell) {
  std::vector<std::size_t> index((nx + 1) * (ny + 1), SIZE_MAX);
  std::vector<Point> nodes;
  std::vector<Triangle> triangles;
  auto node = [&](std::size_t i, std::size_t j) {
    auto& slot = index[j * (nx + 1) + i];
    if (slot == SIZE_MAX) {
      slot = nodes.size();
      const double x = i == nx ? width : static_cast<double>(i) * cell;
      const double y = j == ny ? height : static_cast<double>(j) * cell;
      nodes.push_back({x, y});
    }
    return slot;
  };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (!keep_cell[j * nx + i]) continue;
      const auto a = node(i, j);
      const auto b = node(i + 1, j);
      const auto c = node(i + 1, j + 1);
      const auto d = node(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
    }
  }
  return Mesh2D(std::move(nodes), std::move(triangles));
}

}  // namespace

Mesh2D generate_structured_2d(const DomainSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DomainKind::rectangle: {
      if (spec.h > std::hypot(spec.width, spec.height)) {
        throw std::invalid_argument("h exceeds the domain diameter");
      }
      const std::size_t nx = cells_for(spec.width, spec.h);
      const std::size_t ny = cells_for(spec.height, spec.h);
      if (std::abs(spec.width / nx - spec.height / ny) > 1e-12 * spec.width) {
        throw std::invalid_argument("rectangle sides are not commensurate with square cells of size h");
      }
      return square_cells(spec.width, spec.height, spec.width / nx, nx, ny,
                          std::vector<char>(nx * ny, 1));
    }
    case DomainKind::lshape: {
      if (spec.h > std::sqrt(2.0) * spec.width) {
        throw std::invalid_argument("h exceeds the domain diameter");
      }
      const std::size_t n = cells_for(spec.width, spec.h);
      const double cell = spec.width / n;
      const double arm_cells = spec.arm / cell;
      if (std::abs(arm_cells - std::round(arm_cells)) > 1e-9 * std::max(1.0, arm_cells)) {
        throw std::invalid_argument("L-shape arm is not a multiple of the cell size");
      }
      const auto m = static_cast<std::size_t>(std::round(arm_cells));
      std::vector<char> keep(n * n, 1);
      for (std::size_t j = m; j < n; ++j) {
        for (std::size_t i = m; i < n; ++i) keep[j * n + i] = 0;
      }
      return square_cells(spec.width, spec.width, cell, n, n, keep);
    }
    case DomainKind::isosceles_triangle: {
      const double side = std::hypot(0.5 * spec.width, spec.height);
      if (spec.h > std::max(spec.width, side)) {
        throw std::invalid_argument("h exceeds the domain diameter");
      }
      const std::size_t k = cells_for(spec.width, spec.h);
      const Point a{0.0, 0.0};
      const Point b{spec.width, 0.0};
      const Point c{0.5 * spec.width, spec.height};
      std::vector<Point> nodes;
      std::vector<std::size_t> row_start(k + 2, 0);
      for (std::size_t j = 0; j <= k; ++j) {
        row_start[j] = nodes.size();
        for (std::size_t i = 0; i + j <= k; ++i) {
          const double s = static_cast<double>(i) / k;
          const double t = static_cast<double>(j) / k;
          nodes.push_back({a.x + s * (b.x - a.x) + t * (c.x - a.x),
                           a.y + s * (b.y - a.y) + t * (c.y - a.y)});
        }
      }
      auto at = [&](std::size_t i, std::size_t j) { return row_start[j] + i; };
      std::vector<Triangle> triangles;
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i + j < k; ++i) {
          triangles.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
          if (i + j + 1 < k) triangles.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
        }
      }
      return Mesh2D(std::move(nodes), std::move(triangles));
    }
    default:
      throw std::invalid_argument("structured generation supports rectangle, lshape and triangle only");
  }
}

}  // namespace plap
