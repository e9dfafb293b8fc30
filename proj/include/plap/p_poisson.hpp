#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <optional>
#include <vector>

#include "plap/space.hpp"

namespace plap {

enum class Damping { none, backtracking };

struct NewtonConfig {
  /// Converged when ||R||_2 <= residual_tol * max(1, ||b||_2) over free nodes.
  double residual_tol = 1e-12;
  /// Also converged when ||du||_inf <= step_tol * ||u||_inf.
  double step_tol = 1e-13;
  int max_iters = 50;
  /// eps in |grad u|_eps = sqrt(|grad u|^2 + eps^2).
  double regularization = 1e-10;
  Damping damping = Damping::backtracking;
  int max_halvings = 30;
  /// Exponent ladder solved before the target exponent. When empty and
  /// p > continuation_above, the ladder 2, 4, 8, ... below p is used.
  std::vector<double> continuation;
  double continuation_above = 10.0;
  /// On 1D meshes, start Newton from the exact solution of the discrete
  /// equations obtained by integrating the element fluxes.
  bool flux_predictor = true;

  void validate() const;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete regularized p-Laplacian on a P1 space. Vectors are full nodal
/// vectors; Dirichlet rows of the residual are zero and of the Jacobian are
/// identity rows.
class PLaplacian {
 public:
  PLaplacian(SpacePtr space, double p, double regularization);

  double p() const noexcept { return p_; }
  const SpacePtr& space() const noexcept { return space_; }

  /// (1/p) sum |T| |grad u|_eps^p - b.u
  double energy(const Eigen::VectorXd& u, const Eigen::VectorXd& load) const;

  /// Galerkin residual of int |grad u|_eps^(p-2) grad u . grad phi - b.
  Eigen::VectorXd residual(const Eigen::VectorXd& u, const Eigen::VectorXd& load) const;

  SparseMatrix jacobian(const Eigen::VectorXd& u) const;

  /// Zeroes the Dirichlet entries of `r`.
  void restrict_free(Eigen::VectorXd& r) const;

 private:
  SpacePtr space_;
  double p_;
  double eps2_;
};

struct PoissonSolution {
  FemFunction u;
  int iterations = 0;
  double residual = 0.0;
};

/// Solve -div(|grad u|_eps^(p-2) grad u) = f with u = 0 on Dirichlet nodes,
/// where the load vector b_i = int f phi_i is given.
///
/// Damped Newton with residual-decrease backtracking. The start vector is
/// `guess` (or zero) rescaled by the energy-optimal factor along its ray.
/// Throws NewtonError when the residual test fails after max_iters.
PoissonSolution solve_p_poisson(const SpacePtr& space, double p, const Eigen::VectorXd& load,
                                const NewtonConfig& cfg,
                                const Eigen::VectorXd* guess = nullptr);

/// Same with f given as nodal values (its P1 interpolant is integrated).
PoissonSolution solve_p_poisson_nodal(const SpacePtr& space, double p,
                                      const Eigen::VectorXd& source, const NewtonConfig& cfg);

/// Same with f given as a function of position.
PoissonSolution solve_p_poisson(const SpacePtr& space, double p,
                                const std::function<double(const Point&)>& source,
                                const NewtonConfig& cfg);

/// Exact solution of the discrete 1D equations by flux integration, for a
/// Dirichlet right end and either boundary condition on the left. Returns
/// nullopt on 2D spaces.
std::optional<Eigen::VectorXd> flux_integration_1d(const P1Space& space, double p,
                                                   const Eigen::VectorXd& load,
                                                   double regularization);

/// Exponent ladder used for continuation towards p.
std::vector<double> continuation_ladder(double p, const NewtonConfig& cfg);

}  // namespace plap
