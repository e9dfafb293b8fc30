#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plap/eigensolver.hpp"
#include "plap/params.hpp"

namespace plap {

/// Euler beta function B(r, s) via log-gamma. Throws for r <= 0 or s <= 0.
double beta_fn(double r, double s);

/// min(lambda_p, lambda_q).
double lower_bound(double lambda_p, double lambda_q);

/// C = (1+p)^(alpha/p) (1+q)^(beta/q) B(1+alpha, 1+beta) of the interval bound.
double one_d_constant(const SystemParams& params);

/// (alpha/p lambda_p + beta/q lambda_q) / C on the unit interval.
double upper_bound_1d(const SystemParams& params, double lambda_p, double lambda_q);

/// 3 |Omega| / (pi rho^2) (lambda_p/p + lambda_q/q) for convex planar domains
/// with inradius rho and alpha = beta = 1. Conditional on the conjectured
/// inequality int u(p) u(p') >= int u(1) u(inf) for conjugate
/// exponents.
double upper_bound_2d(double area, double inradius, double p, double q, double lambda_p,
                      double lambda_q);

/// (N + 1)(lambda_p/p + lambda_q/q) on an N-dimensional ball, alpha = beta = 1.
/// Conditional on the same conjecture.
double ball_bound(int dimension, double p, double q, double lambda_p, double lambda_q);

/// Bound for the resonant system with weight r >= m > 0 and p > q:
/// Lambda(p)/p + m^(q/p - 1)/q (p/q)^q Lambda(p)^(q/p).
double resonant_upper_bound(double p, double q, double m, double lambda_p);

enum class UpperKind { one_d, convex_2d, ball, resonant, none };

std::string to_string(UpperKind kind);

struct BoundReport {
  std::optional<double> lower;  // absent for the resonant system
  UpperKind upper_kind = UpperKind::none;
  std::optional<double> upper;
  bool assumes_hypothesis = false;

  // Inputs.
  std::optional<double> lambda_p;
  std::optional<double> lambda_q;
  std::optional<double> constant;
  std::optional<double> area;
  std::optional<double> inradius;
  std::optional<double> weight_min;
  std::optional<int> dimension;

  /// lower <= lambda <= upper up to `tol` for whichever bounds are present.
  bool sandwiches(double lambda, double tol = 1e-6) const;
};

BoundReport report_1d(const SystemParams& params, double lambda_p, double lambda_q);

/// Upper bound only when alpha = beta = 1; `convex` false drops it as well.
BoundReport report_2d(const SystemParams& params, double lambda_p, double lambda_q, double area,
                      double inradius, bool convex = true);

BoundReport report_ball(int dimension, const SystemParams& params, double lambda_p,
                        double lambda_q);

/// Upper bound only for p > q; the lower bound does not apply.
BoundReport report_resonant(double p, double q, double m, double lambda_p);

/// log2 |(l_h - l_h2) / (l_h2 - l_h4)|. Throws std::domain_error when either
/// difference vanishes.
double eoc(double lambda_h, double lambda_h2, double lambda_h4);

struct CurvePoint {
  double p;
  double f;
};

/// f(p) = int_0^1 u(p) u(p/(p-1)) with ||u(p)||_Lp = 1, computed from scalar
/// eigenfunctions on n equal elements of (0, 1). p = 1 and p = infinity use
/// the limit fields 1 and 1 - |2x - 1|. Throws for p < 1.
std::vector<CurvePoint> f_curve(const std::vector<double>& p_values, std::size_t n,
                                const OuterConfig& outer = {}, const NewtonConfig& newton = {});

/// Conjugate exponent p/(p-1), with 1 <-> infinity.
double conjugate(double p);

/// max |s u - (1 - r)| over the nodes of a radial eigenfunction normalized by
/// int r |u|^p dr = 1, with s = (2 pi)^(-1/p) so that s u has unit L^p norm
/// on the disc.
double disc_distance_gap(const FemFunction& u, double p);

}  // namespace plap
