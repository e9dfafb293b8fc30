#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "plap/fem.hpp"
#include "plap/p_poisson.hpp"

namespace plap {

enum class GuessKind {
  default_bump,  // distance-like bump, positive in the interior
  supplied,      // nodal fields in OuterConfig::guess_u / guess_v
  scalar_pair,   // scalar p- and q-eigenfunctions
};

struct IterationRecord {
  int k = 0;
  double lambda = 0.0;
  int newton_u = 0;  // Newton steps that produced this iterate
  int newton_v = 0;
};

struct OuterConfig {
  /// Stop when |lambda^k - lambda^(k-1)| < tolerance.
  double tolerance = 5e-5;
  int max_outer = 100;
  GuessKind guess = GuessKind::default_bump;
  Eigen::VectorXd guess_u;
  Eigen::VectorXd guess_v;
  /// > 1 runs the two decoupled solves of an iteration concurrently.
  int threads = 1;
  /// Called after each history record; lets callers keep the trajectory
  /// when a later inner solve throws.
  std::function<void(const IterationRecord&)> on_iteration;

  void validate() const;
};

struct EigenResult {
  double lambda = 0.0;
  FemFunction u;
  FemFunction v;
  std::vector<IterationRecord> history;
  bool converged = false;
  int outer_iters = 0;  // decoupled solves performed
};

/// Nonlinearity of a gradient system -Delta_p u = lambda F_u,
/// -Delta_q v = lambda F_v with F(x, t, s) = weight(x) * value(x, t, s).
///
/// F must satisfy F(x, 0, 0) = 0 and be jointly homogeneous:
/// F(x, a t, b s) = a^degree_u b^degree_v F(x, t, s) for a, b > 0, with
/// degree_u / p + degree_v / q = 1. Growth conditions are not checked.
struct GradientNonlinearity {
  std::function<double(const Point&, double, double)> value;
  std::function<double(const Point&, double, double)> d_u;
  std::function<double(const Point&, double, double)> d_v;
  double degree_u = 1.0;
  double degree_v = 1.0;
  Coefficient weight = Coefficient::one();

  /// F = scale * |t|^alpha |s|^beta.
  static GradientNonlinearity power(double alpha, double beta, double scale = 1.0);

  /// F = r(x) |t|^alpha |s|^beta, the resonant system.
  static GradientNonlinearity resonant(double alpha, double beta, Coefficient r);
};

/// Coupled system with Dirichlet data on every boundary node of `space`.
EigenResult solve_eigenpair(const SpacePtr& space, const SystemParams& params,
                            const OuterConfig& outer = {}, const NewtonConfig& newton = {});
EigenResult solve_eigenpair(const Mesh2D& mesh, const SystemParams& params,
                            const OuterConfig& outer = {}, const NewtonConfig& newton = {});

/// Unit disc through its radial reduction on n equal elements.
EigenResult solve_radial(std::size_t n, const SystemParams& params, const OuterConfig& outer = {},
                         const NewtonConfig& newton = {});

/// Scalar first eigenpair of -Delta_p; u normalized to ||u||_Lp = 1 and
/// returned in both u and v.
EigenResult solve_scalar(const SpacePtr& space, double p, const OuterConfig& outer = {},
                         const NewtonConfig& newton = {});

/// -Delta_p u = Lambda r |u|^(p-2) u; u normalized to int r |u|^p = 1.
/// Throws std::invalid_argument when r is not strictly positive.
EigenResult solve_weighted_scalar(const SpacePtr& space, double p, const Coefficient& r,
                                  const OuterConfig& outer = {}, const NewtonConfig& newton = {});

EigenResult solve_gradient_system(const SpacePtr& space, double p, double q,
                                  const GradientNonlinearity& nl, const OuterConfig& outer = {},
                                  const NewtonConfig& newton = {});

/// Rescales (u, v) to unit coupling; returns the resulting lambda estimate
/// (alpha/p) E_p(u) + (beta/q) E_q(v). Throws InadmissiblePair.
struct NormalizedPair {
  FemFunction u;
  FemFunction v;
  double lambda;
};
NormalizedPair normalize_pair(const FemFunction& u, const FemFunction& v, const SystemParams& params,
                              const Coefficient& weight = Coefficient::one());

/// Distance-like positive bump used as the default initial guess.
FemFunction default_guess(const SpacePtr& space);

/// First zero of J0.
inline constexpr double kBesselZero = 2.404825557695772768621631879;

/// J0(j r), the radial Laplacian ground state on the unit disc (unnormalized).
double bessel_ground_state(double r);

}  // namespace plap
