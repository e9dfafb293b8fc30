#include "plap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace plap {

double beta_fn(double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw std::domain_error("beta function needs positive arguments");
  return std::exp(std::lgamma(r) + std::lgamma(s) - std::lgamma(r + s));
}

double lower_bound(double lambda_p, double lambda_q) { return std::min(lambda_p, lambda_q); }

double one_d_constant(const SystemParams& params) {
  const double p = params.p;
  const double q = params.q;
  return std::pow(1.0 + p, params.alpha / p) * std::pow(1.0 + q, params.beta / q) *
         beta_fn(1.0 + params.alpha, 1.0 + params.beta);
}

double upper_bound_1d(const SystemParams& params, double lambda_p, double lambda_q) {
  return (params.alpha / params.p * lambda_p + params.beta / params.q * lambda_q) /
         one_d_constant(params);
}

double upper_bound_2d(double area, double inradius, double p, double q, double lambda_p,
                      double lambda_q) {
  if (!(area > 0.0)) throw std::domain_error("domain area must be positive");
  if (!(inradius > 0.0)) throw std::domain_error("inscribed radius must be positive");
  return 3.0 * area / (std::numbers::pi * inradius * inradius) * (lambda_p / p + lambda_q / q);
}

double ball_bound(int dimension, double p, double q, double lambda_p, double lambda_q) {
  if (dimension < 1) throw std::domain_error("ball dimension must be >= 1");
  return (dimension + 1.0) * (lambda_p / p + lambda_q / q);
}

double resonant_upper_bound(double p, double q, double m, double lambda_p) {
  if (!(p > q)) throw std::domain_error("bound requires p > q");
  if (!(m > 0.0)) throw std::domain_error("weight lower bound m must be positive");
  return lambda_p / p +
         std::pow(m, -1.0 + q / p) / q * std::pow(p / q, q) * std::pow(lambda_p, q / p);
}

std::string to_string(UpperKind kind) {
  switch (kind) {
    case UpperKind::one_d: return "one_d";
    case UpperKind::convex_2d: return "convex_2d";
    case UpperKind::ball: return "ball";
    case UpperKind::resonant: return "resonant";
    case UpperKind::none: break;
  }
  return "none";
}

bool BoundReport::sandwiches(double lambda, double tol) const {
  if (lower && lambda < *lower - tol) return false;
  if (upper && lambda > *upper + tol) return false;
  return true;
}

BoundReport report_1d(const SystemParams& params, double lambda_p, double lambda_q) {
  BoundReport r;
  r.lower = lower_bound(lambda_p, lambda_q);
  r.lambda_p = lambda_p;
  r.lambda_q = lambda_q;
  r.constant = one_d_constant(params);
  r.upper_kind = UpperKind::one_d;
  r.upper = upper_bound_1d(params, lambda_p, lambda_q);
  r.dimension = 1;
  return r;
}

BoundReport report_2d(const SystemParams& params, double lambda_p, double lambda_q, double area,
                      double inradius, bool convex) {
  BoundReport r;
  r.lower = lower_bound(lambda_p, lambda_q);
  r.lambda_p = lambda_p;
  r.lambda_q = lambda_q;
  r.area = area;
  r.inradius = inradius;
  r.dimension = 2;
  if (convex && params.alpha == 1.0 && params.beta == 1.0) {
    r.upper_kind = UpperKind::convex_2d;
    r.upper = upper_bound_2d(area, inradius, params.p, params.q, lambda_p, lambda_q);
    r.assumes_hypothesis = true;
  }
  return r;
}

BoundReport report_ball(int dimension, const SystemParams& params, double lambda_p,
                        double lambda_q) {
  BoundReport r;
  r.lower = lower_bound(lambda_p, lambda_q);
  r.lambda_p = lambda_p;
  r.lambda_q = lambda_q;
  r.dimension = dimension;
  if (params.alpha == 1.0 && params.beta == 1.0) {
    r.upper_kind = UpperKind::ball;
    r.upper = ball_bound(dimension, params.p, params.q, lambda_p, lambda_q);
    r.assumes_hypothesis = true;
  }
  return r;
}

BoundReport report_resonant(double p, double q, double m, double lambda_p) {
  BoundReport r;
  r.lambda_p = lambda_p;
  r.weight_min = m;
  if (p > q) {
    r.upper_kind = UpperKind::resonant;
    r.upper = resonant_upper_bound(p, q, m, lambda_p);
  }
  return r;
}

double eoc(double lambda_h, double lambda_h2, double lambda_h4) {
  const double num = lambda_h - lambda_h2;
  const double den = lambda_h2 - lambda_h4;
  if (num == 0.0 || den == 0.0) throw std::domain_error("EOC undefined at this resolution");
  return std::log2(std::abs(num / den));
}

double conjugate(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

std::vector<CurvePoint> f_curve(const std::vector<double>& p_values, std::size_t n,
                                const OuterConfig& outer, const NewtonConfig& newton) {
  for (double p : p_values) {
    if (!(p >= 1.0)) throw std::domain_error("f(p) needs p in [1, infinity]");
  }
  const SpacePtr space = make_space(generate_interval(0.0, 1.0, n));
  // The limit eigenfunctions on (0, 1): p = 1 the characteristic function,
  // p = infinity the distance to the boundary, rescaled to unit sup norm.
  auto limit_field = [&](double p) {
    if (p == 1.0) return interpolate_raw(space, [](const Point&) { return 1.0; });
    return interpolate(space, [](const Point& x) { return 1.0 - std::abs(2.0 * x.x - 1.0); });
  };

  std::map<double, FemFunction> cache;
  auto field = [&](double p) -> const FemFunction& {
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    FemFunction u = (p == 1.0 || std::isinf(p)) ? limit_field(p) : solve_scalar(space, p, outer, newton).u;
    return cache.emplace(p, std::move(u)).first->second;
  };

  std::vector<CurvePoint> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    const FemFunction& u = field(p);
    const FemFunction& v = field(conjugate(p));
    out.push_back({p, inner_product(u, v)});
  }
  return out;
}

double disc_distance_gap(const FemFunction& u, double p) {
  const double s = std::pow(2.0 * std::numbers::pi, -1.0 / p);
  const auto& x = u.space->coordinates();
  double gap = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    gap = std::max(gap, std::abs(s * u[i] - (1.0 - x[i].x)));
  }
  return gap;
}

}  // namespace plap
