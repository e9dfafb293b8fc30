#pragma once

#include <cmath>

#include "plap/params.hpp"
#include "plap/space.hpp"

namespace plap {

/// sign(x) |x|^a, with 0 -> 0 for every a.
inline double signed_pow(double x, double a) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), a), x);
}

/// |x|^a with |0|^0 = 1.
inline double abs_pow(double x, double a) { return std::pow(std::abs(x), a); }

/// Signed coupling integral of w |u|^(alpha-1) |v|^(beta-1) u v.
double integrate_coupling(const FemFunction& u, double alpha, const FemFunction& v, double beta,
                          const Coefficient& weight = Coefficient::one());

/// Integral of |grad u|^p (metric-weighted on radial meshes).
double grad_energy(const FemFunction& u, double p);

/// Integral of w |u|^p.
double lp_power(const FemFunction& u, double p, const Coefficient& weight = Coefficient::one());

/// Integral of u v by quadrature.
double inner_product(const FemFunction& u, const FemFunction& v);

/// [(alpha/p) E_p(u) + (beta/q) E_q(v)] / coupling(u, v).
/// Throws InadmissiblePair when the coupling is not positive.
double rayleigh(const FemFunction& u, const FemFunction& v, const SystemParams& params,
                const Coefficient& weight = Coefficient::one());

}  // namespace plap
