#include "plap/fem.hpp"

#include <stdexcept>
#include <string>

#include "plap/errors.hpp"

namespace plap {

SystemParams::SystemParams(double p_, double q_, double alpha_, double beta_)
    : p(p_), q(q_), alpha(alpha_), beta(beta_) {
  if (!(p > 1.0) || !(q > 1.0)) throw std::invalid_argument("exponents p and q must exceed 1");
  if (!(alpha >= 1.0) || !(beta >= 1.0)) {
    throw std::invalid_argument("coupling powers alpha and beta must be >= 1");
  }
  const double residual = constraint_residual();
  if (std::abs(residual) > constraint_tolerance) {
    throw std::invalid_argument("alpha/p + beta/q - 1 = " + std::to_string(residual) +
                                " violates the coupling constraint");
  }
}

SystemParams SystemParams::with_derived_beta(double p, double q, double alpha) {
  return SystemParams(p, q, alpha, q * (1.0 - alpha / p));
}

SystemParams SystemParams::diagonal(double p) { return SystemParams(p, p, 0.5 * p, 0.5 * p); }

double integrate_coupling(const FemFunction& u, double alpha, const FemFunction& v, double beta,
                          const Coefficient& weight) {
  require_same_space(u, v);
  return integrate(*u.space, [&](const Element& e, const QuadPoint& q) {
    return weight.at(e, q) * signed_pow(u.at(e, q), alpha) * signed_pow(v.at(e, q), beta);
  });
}

double grad_energy(const FemFunction& u, double p) {
  double total = 0.0;
  for (const auto& e : u.space->elements()) {
    const auto g = u.gradient(e);
    total += e.measure * std::pow(std::hypot(g[0], g[1]), p);
  }
  return total;
}

double lp_power(const FemFunction& u, double p, const Coefficient& weight) {
  return integrate(*u.space, [&](const Element& e, const QuadPoint& q) {
    return weight.at(e, q) * abs_pow(u.at(e, q), p);
  });
}

double inner_product(const FemFunction& u, const FemFunction& v) {
  require_same_space(u, v);
  return integrate(*u.space,
                   [&](const Element& e, const QuadPoint& q) { return u.at(e, q) * v.at(e, q); });
}

double rayleigh(const FemFunction& u, const FemFunction& v, const SystemParams& params,
                const Coefficient& weight) {
  const double coupling = integrate_coupling(u, params.alpha, v, params.beta, weight);
  if (!(coupling > 0.0)) throw InadmissiblePair(coupling);
  const double numerator = params.alpha / params.p * grad_energy(u, params.p) +
                           params.beta / params.q * grad_energy(v, params.q);
  return numerator / coupling;
}

}  // namespace plap
