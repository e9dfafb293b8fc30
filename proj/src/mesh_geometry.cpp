#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "plap/mesh.hpp"

namespace plap {

namespace {

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

double domain_area(const Mesh2D& mesh) {
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) total += mesh.area(t);
  return total;
}

bool contains(const Mesh2D& mesh, const Point& point) {
  const auto& nodes = mesh.nodes();
  bool inside = false;
  for (const auto& edge : mesh.boundary_edges()) {
    const Point& a = nodes[edge[0]];
    const Point& b = nodes[edge[1]];
    if ((a.y > point.y) != (b.y > point.y)) {
      const double x_cross = a.x + (point.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (point.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double distance_to_boundary(const Mesh2D& mesh, const Point& point) {
  const auto& nodes = mesh.nodes();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& edge : mesh.boundary_edges()) {
    best = std::min(best, segment_distance(point, nodes[edge[0]], nodes[edge[1]]));
  }
  return best;
}

double inscribed_radius(const Mesh2D& mesh) {
  const auto& nodes = mesh.nodes();
  struct Sample {
    Point at;
    double dist;
    double step;
  };
  std::vector<Sample> samples;
  samples.reserve(mesh.num_nodes() + mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point c{(nodes[tri[0]].x + nodes[tri[1]].x + nodes[tri[2]].x) / 3.0,
                  (nodes[tri[0]].y + nodes[tri[1]].y + nodes[tri[2]].y) / 3.0};
    samples.push_back({c, distance_to_boundary(mesh, c), std::sqrt(mesh.area(t))});
  }
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.is_boundary(i)) continue;
    samples.push_back({nodes[i], distance_to_boundary(mesh, nodes[i]), 0.0});
  }
  if (samples.empty()) return 0.0;

  const double typical_step = std::sqrt(domain_area(mesh) / mesh.num_triangles());
  for (auto& s : samples) {
    if (s.step == 0.0) s.step = typical_step;
  }
  const std::size_t keep = std::min<std::size_t>(8, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + keep, samples.end(),
                    [](const Sample& a, const Sample& b) { return a.dist > b.dist; });

  double best = samples.front().dist;
  // Compass search from the best samples; the distance field is 1-Lipschitz
  // so a shrinking stencil converges to a local maximum.
  static constexpr double dirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                        {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  for (std::size_t k = 0; k < keep; ++k) {
    Point at = samples[k].at;
    double value = samples[k].dist;
    double step = samples[k].step;
    while (step > 1e-10 * typical_step) {
      bool moved = false;
      for (const auto& d : dirs) {
        const Point trial{at.x + step * d[0], at.y + step * d[1]};
        if (!contains(mesh, trial)) continue;
        const double dist = distance_to_boundary(mesh, trial);
        if (dist > value) {
          at = trial;
          value = dist;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace plap
