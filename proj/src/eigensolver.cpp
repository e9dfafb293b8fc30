#include "plap/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>

#include "plap/errors.hpp"

namespace plap {

namespace {

using Eigen::VectorXd;

using Density = std::function<double(const Element&, const QuadPoint&, double, double)>;

// One fixed-point problem: normalize by the coupling functional, estimate
// lambda from the gradient energies, then solve the two decoupled problems.
struct FixedPointProblem {
  double p = 2.0;
  double q = 2.0;
  double energy_u = 1.0;  // lambda = energy_u E_p(u) + energy_v E_q(v)
  double energy_v = 0.0;
  Density coupling;  // integrand of the normalization functional
  Density rhs_u;     // right-hand side of the u problem divided by lambda
  Density rhs_v;
  bool single_field = false;
};

struct Iterate {
  FemFunction u;
  FemFunction v;
  double lambda;
};

Iterate normalize(const FixedPointProblem& prob, const FemFunction& u, const FemFunction& v) {
  const double c = integrate(*u.space, [&](const Element& e, const QuadPoint& qp) {
    return prob.coupling(e, qp, u.at(e, qp), v.at(e, qp));
  });
  if (!(c > 0.0) || !std::isfinite(c)) throw InadmissiblePair(c);
  Iterate it{u, v, 0.0};
  it.u.values /= std::pow(c, 1.0 / prob.p);
  if (prob.single_field) {
    it.v = it.u;
    it.lambda = prob.energy_u * grad_energy(it.u, prob.p);
  } else {
    it.v.values /= std::pow(c, 1.0 / prob.q);
    it.lambda = prob.energy_u * grad_energy(it.u, prob.p) + prob.energy_v * grad_energy(it.v, prob.q);
  }
  return it;
}

PoissonSolution decoupled_solve(const SpacePtr& space, double exponent, const Density& rhs,
                                const Iterate& it, const NewtonConfig& newton, int k,
                                const char* field) {
  const VectorXd load = it.lambda * assemble_load(*space, [&](const Element& e, const QuadPoint& qp) {
    return rhs(e, qp, it.u.at(e, qp), it.v.at(e, qp));
  });
  const VectorXd& guess = field[0] == 'u' ? it.u.values : it.v.values;
  try {
    return solve_p_poisson(space, exponent, load, newton, &guess);
  } catch (const NewtonError& err) {
    throw EigenSolveError(k, field, err);
  }
}

EigenResult run(const SpacePtr& space, const FixedPointProblem& prob, FemFunction u0,
                FemFunction v0, const OuterConfig& outer, const NewtonConfig& newton) {
  outer.validate();
  newton.validate();
  EigenResult result;
  Iterate it = normalize(prob, u0, v0);
  int newton_u = 0;
  int newton_v = 0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0;; ++k) {
    result.history.push_back({k, it.lambda, newton_u, newton_v});
    if (outer.on_iteration) outer.on_iteration(result.history.back());
    if (!std::isfinite(it.lambda)) {
      throw std::runtime_error("eigenvalue estimate became non-finite at outer iteration " +
                               std::to_string(k));
    }
    if (k >= 1 && std::abs(it.lambda - previous) < outer.tolerance) {
      result.converged = true;
      break;
    }
    if (k == outer.max_outer) break;
    previous = it.lambda;

    FemFunction u_next;
    FemFunction v_next;
    if (prob.single_field) {
      auto sol = decoupled_solve(space, prob.p, prob.rhs_u, it, newton, k + 1, "u");
      newton_u = sol.iterations;
      newton_v = 0;
      u_next = std::move(sol.u);
      v_next = u_next;
    } else if (outer.threads > 1) {
      auto fut = std::async(std::launch::async, [&] {
        return decoupled_solve(space, prob.q, prob.rhs_v, it, newton, k + 1, "v");
      });
      auto su = decoupled_solve(space, prob.p, prob.rhs_u, it, newton, k + 1, "u");
      auto sv = fut.get();
      newton_u = su.iterations;
      newton_v = sv.iterations;
      u_next = std::move(su.u);
      v_next = std::move(sv.u);
    } else {
      auto su = decoupled_solve(space, prob.p, prob.rhs_u, it, newton, k + 1, "u");
      auto sv = decoupled_solve(space, prob.q, prob.rhs_v, it, newton, k + 1, "v");
      newton_u = su.iterations;
      newton_v = sv.iterations;
      u_next = std::move(su.u);
      v_next = std::move(sv.u);
    }
    it = normalize(prob, u_next, v_next);
    result.outer_iters = k + 1;
  }
  result.lambda = it.lambda;
  result.u = std::move(it.u);
  result.v = std::move(it.v);
  return result;
}

FemFunction field_from(const SpacePtr& space, const VectorXd& values, const char* name) {
  if (static_cast<std::size_t>(values.size()) != space->num_nodes()) {
    throw std::invalid_argument(std::string("initial guess ") + name + " has " +
                                std::to_string(values.size()) + " values, mesh has " +
                                std::to_string(space->num_nodes()) + " nodes");
  }
  FemFunction f(space, values);
  for (std::size_t i = 0; i < space->num_nodes(); ++i) {
    if (space->is_dirichlet(i)) f.values[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return f;
}

FixedPointProblem scalar_problem(double p, const Coefficient& r) {
  FixedPointProblem prob;
  prob.p = prob.q = p;
  prob.energy_u = 1.0;
  prob.energy_v = 0.0;
  prob.single_field = true;
  prob.coupling = [r, p](const Element& e, const QuadPoint& qp, double u, double) {
    return r.at(e, qp) * abs_pow(u, p);
  };
  prob.rhs_u = [r, p](const Element& e, const QuadPoint& qp, double u, double) {
    return r.at(e, qp) * signed_pow(u, p - 1.0);
  };
  return prob;
}

std::pair<FemFunction, FemFunction> initial_pair(const SpacePtr& space, double p, double q,
                                                 const OuterConfig& outer,
                                                 const NewtonConfig& newton) {
  switch (outer.guess) {
    case GuessKind::supplied: {
      FemFunction u = field_from(space, outer.guess_u, "u");
      FemFunction v = outer.guess_v.size() ? field_from(space, outer.guess_v, "v") : u;
      return {u, v};
    }
    case GuessKind::scalar_pair: {
      OuterConfig sub = outer;
      sub.guess = GuessKind::default_bump;
      sub.on_iteration = nullptr;
      FemFunction u = solve_scalar(space, p, sub, newton).u;
      FemFunction v = q == p ? u : solve_scalar(space, q, sub, newton).u;
      return {u, v};
    }
    case GuessKind::default_bump:
    default: {
      FemFunction g = default_guess(space);
      return {g, g};
    }
  }
}

}  // namespace

void OuterConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("outer tolerance must be positive");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (guess == GuessKind::supplied && guess_u.size() == 0) {
    throw std::invalid_argument("supplied initial guess is empty");
  }
}

GradientNonlinearity GradientNonlinearity::power(double alpha, double beta, double scale) {
  GradientNonlinearity nl;
  nl.degree_u = alpha;
  nl.degree_v = beta;
  nl.value = [=](const Point&, double t, double s) { return scale * abs_pow(t, alpha) * abs_pow(s, beta); };
  nl.d_u = [=](const Point&, double t, double s) {
    return scale * alpha * signed_pow(t, alpha - 1.0) * abs_pow(s, beta);
  };
  nl.d_v = [=](const Point&, double t, double s) {
    return scale * beta * abs_pow(t, alpha) * signed_pow(s, beta - 1.0);
  };
  return nl;
}

GradientNonlinearity GradientNonlinearity::resonant(double alpha, double beta, Coefficient r) {
  GradientNonlinearity nl = power(alpha, beta);
  nl.weight = std::move(r);
  return nl;
}

NormalizedPair normalize_pair(const FemFunction& u, const FemFunction& v, const SystemParams& params,
                              const Coefficient& weight) {
  require_same_space(u, v);
  const double c = integrate_coupling(u, params.alpha, v, params.beta, weight);
  if (!(c > 0.0)) throw InadmissiblePair(c);
  NormalizedPair out{u, v, 0.0};
  out.u.values /= std::pow(c, 1.0 / params.p);
  out.v.values /= std::pow(c, 1.0 / params.q);
  out.lambda = params.alpha / params.p * grad_energy(out.u, params.p) +
               params.beta / params.q * grad_energy(out.v, params.q);
  return out;
}

FemFunction default_guess(const SpacePtr& space) {
  const auto& x = space->coordinates();
  if (space->dimension() == 1) {
    if (space->radial()) {
      return interpolate(space, [](const Point& pt) { return 1.0 - pt.x * pt.x; });
    }
    const double a = x.front().x;
    const double b = x.back().x;
    const bool left_free = !space->is_dirichlet(0);
    return interpolate(space, [=](const Point& pt) {
      return left_free ? b - pt.x : (pt.x - a) * (b - pt.x);
    });
  }
  const auto& segments = space->boundary_segments();
  return interpolate(space, [&](const Point& pt) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : segments) {
      const double dx = b.x - a.x;
      const double dy = b.y - a.y;
      const double len2 = dx * dx + dy * dy;
      double t = len2 > 0.0 ? ((pt.x - a.x) * dx + (pt.y - a.y) * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, std::hypot(pt.x - a.x - t * dx, pt.y - a.y - t * dy));
    }
    return best;
  });
}

double bessel_ground_state(double r) { return std::cyl_bessel_j(0.0, kBesselZero * r); }

EigenResult solve_eigenpair(const SpacePtr& space, const SystemParams& params,
                            const OuterConfig& outer, const NewtonConfig& newton) {
  FixedPointProblem prob;
  prob.p = params.p;
  prob.q = params.q;
  prob.energy_u = params.alpha / params.p;
  prob.energy_v = params.beta / params.q;
  const double a = params.alpha;
  const double b = params.beta;
  prob.coupling = [=](const Element&, const QuadPoint&, double u, double v) {
    return signed_pow(u, a) * signed_pow(v, b);
  };
  prob.rhs_u = [=](const Element&, const QuadPoint&, double u, double v) {
    return abs_pow(u, a - 1.0) * signed_pow(v, b);
  };
  prob.rhs_v = [=](const Element&, const QuadPoint&, double u, double v) {
    return signed_pow(u, a) * abs_pow(v, b - 1.0);
  };
  auto [u0, v0] = initial_pair(space, params.p, params.q, outer, newton);
  return run(space, prob, std::move(u0), std::move(v0), outer, newton);
}

EigenResult solve_eigenpair(const Mesh2D& mesh, const SystemParams& params,
                            const OuterConfig& outer, const NewtonConfig& newton) {
  return solve_eigenpair(make_space(mesh), params, outer, newton);
}

EigenResult solve_radial(std::size_t n, const SystemParams& params, const OuterConfig& outer,
                         const NewtonConfig& newton) {
  return solve_eigenpair(make_space(generate_radial(n)), params, outer, newton);
}

EigenResult solve_scalar(const SpacePtr& space, double p, const OuterConfig& outer,
                         const NewtonConfig& newton) {
  if (!(p > 1.0)) throw std::invalid_argument("scalar eigenproblem needs p > 1");
  const Coefficient one = Coefficient::one();
  OuterConfig cfg = outer;
  if (cfg.guess == GuessKind::scalar_pair) cfg.guess = GuessKind::default_bump;
  auto [u0, v0] = initial_pair(space, p, p, cfg, newton);
  return run(space, scalar_problem(p, one), std::move(u0), std::move(v0), cfg, newton);
}

EigenResult solve_weighted_scalar(const SpacePtr& space, double p, const Coefficient& r,
                                  const OuterConfig& outer, const NewtonConfig& newton) {
  if (!(p > 1.0)) throw std::invalid_argument("scalar eigenproblem needs p > 1");
  const double rmin = r.minimum(*space);
  if (!(rmin > 0.0)) {
    throw std::invalid_argument("weight must be strictly positive (minimum " + std::to_string(rmin) +
                                ")");
  }
  OuterConfig cfg = outer;
  if (cfg.guess == GuessKind::scalar_pair) cfg.guess = GuessKind::default_bump;
  auto [u0, v0] = initial_pair(space, p, p, cfg, newton);
  return run(space, scalar_problem(p, r), std::move(u0), std::move(v0), cfg, newton);
}

EigenResult solve_gradient_system(const SpacePtr& space, double p, double q,
                                  const GradientNonlinearity& nl, const OuterConfig& outer,
                                  const NewtonConfig& newton) {
  if (!(p > 1.0) || !(q > 1.0)) throw std::invalid_argument("exponents p and q must exceed 1");
  if (!nl.value || !nl.d_u || !nl.d_v) {
    throw std::invalid_argument("gradient nonlinearity needs F and both partial derivatives");
  }
  if (!(nl.degree_u > 0.0) || !(nl.degree_v > 0.0)) {
    throw std::invalid_argument("homogeneity degrees of F must be positive");
  }
  const double residual = nl.degree_u / p + nl.degree_v / q - 1.0;
  if (std::abs(residual) > 1e-9) {
    throw std::invalid_argument("homogeneity degrees give a/p + b/q - 1 = " +
                                std::to_string(residual) + ", expected 0");
  }
  const Point origin = space->coordinates().front();
  if (nl.value(origin, 0.0, 0.0) != 0.0) throw std::invalid_argument("F(x, 0, 0) must vanish");

  FixedPointProblem prob;
  prob.p = p;
  prob.q = q;
  prob.energy_u = 1.0 / p;
  prob.energy_v = 1.0 / q;
  prob.coupling = [&nl](const Element& e, const QuadPoint& qp, double u, double v) {
    return nl.weight.at(e, qp) * nl.value(qp.x, u, v);
  };
  prob.rhs_u = [&nl](const Element& e, const QuadPoint& qp, double u, double v) {
    return nl.weight.at(e, qp) * nl.d_u(qp.x, u, v);
  };
  prob.rhs_v = [&nl](const Element& e, const QuadPoint& qp, double u, double v) {
    return nl.weight.at(e, qp) * nl.d_v(qp.x, u, v);
  };
  auto [u0, v0] = initial_pair(space, p, q, outer, newton);
  return run(space, prob, std::move(u0), std::move(v0), outer, newton);
}

}  // namespace plap
