#pragma once

namespace plap {

/// Exponents (p, q) of the two p-Laplacians and coupling powers (alpha,
/// beta) with alpha/p + beta/q = 1.
struct SystemParams {
  double p;
  double q;
  double alpha;
  double beta;

  /// Validates p, q > 1, alpha, beta >= 1 and the coupling constraint to 1e-9.
  SystemParams(double p, double q, double alpha, double beta);

  /// beta = q (1 - alpha / p).
  static SystemParams with_derived_beta(double p, double q, double alpha);

  /// alpha = beta = p / 2 for the diagonal case p = q.
  static SystemParams diagonal(double p);

  double constraint_residual() const noexcept { return alpha / p + beta / q - 1.0; }

  static constexpr double constraint_tolerance = 1e-9;
};

}  // namespace plap
