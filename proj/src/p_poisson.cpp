#include "plap/p_poisson.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "plap/errors.hpp"

namespace plap {

namespace {

using Eigen::Index;
using Eigen::VectorXd;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Solves (s^2 + eps2)^((p-2)/2) s = y for s; the map is odd and increasing.
double inverse_flux(double y, double p, double eps2) {
  if (y == 0.0) return 0.0;
  double s = std::copysign(std::pow(std::abs(y), 1.0 / (p - 1.0)), y);
  if (p == 2.0) return y;
  if (eps2 == 0.0) return s;
  for (int it = 0; it < 100; ++it) {
    const double a = s * s + eps2;
    const double f = std::pow(a, 0.5 * (p - 2.0)) * s - y;
    const double df = std::pow(a, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps2);
    const double ds = f / df;
    s -= ds;
    if (!(std::abs(ds) > 4e-16 * std::abs(s))) break;
  }
  return s;
}

double free_norm(const P1Space& space, const VectorXd& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < space.num_nodes(); ++i) {
    if (!space.is_dirichlet(i)) s += r[idx(i)] * r[idx(i)];
  }
  return std::sqrt(s);
}

bool all_finite(const VectorXd& v) { return v.allFinite(); }

// Energy-optimal multiple of `u` for the unregularized functional.
void rescale_guess(const P1Space& space, double p, const VectorXd& load, VectorXd& u) {
  double stiffness = 0.0;
  for (const auto& e : space.elements()) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < e.count; ++k) {
      gx += u[idx(e.nodes[k])] * e.grad[k][0];
      gy += u[idx(e.nodes[k])] * e.grad[k][1];
    }
    stiffness += e.measure * std::pow(std::hypot(gx, gy), p);
  }
  const double work = load.dot(u);
  if (stiffness > 0.0 && work > 0.0 && std::isfinite(stiffness)) {
    const double c = std::pow(work / stiffness, 1.0 / (p - 1.0));
    if (std::isfinite(c) && c > 0.0) u *= c;
  }
}

}  // namespace

void NewtonConfig::validate() const {
  if (!(residual_tol > 0.0)) throw std::invalid_argument("Newton residual tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("Newton max_iters must be >= 1");
  if (!(regularization >= 0.0)) throw std::invalid_argument("gradient regularization must be >= 0");
  if (!(step_tol >= 0.0)) throw std::invalid_argument("Newton step tolerance must be >= 0");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
  for (double e : continuation) {
    if (!(e > 1.0)) throw std::invalid_argument("continuation exponents must exceed 1");
  }
}

PLaplacian::PLaplacian(SpacePtr space, double p, double regularization)
    : space_(std::move(space)), p_(p), eps2_(regularization * regularization) {
  if (!(p > 1.0)) throw std::invalid_argument("p-Laplacian needs p > 1");
}

double PLaplacian::energy(const VectorXd& u, const VectorXd& load) const {
  double total = 0.0;
  for (const auto& e : space_->elements()) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < e.count; ++k) {
      gx += u[idx(e.nodes[k])] * e.grad[k][0];
      gy += u[idx(e.nodes[k])] * e.grad[k][1];
    }
    total += e.measure * std::pow(gx * gx + gy * gy + eps2_, 0.5 * p_);
  }
  double work = 0.0;
  for (std::size_t i = 0; i < space_->num_nodes(); ++i) {
    if (!space_->is_dirichlet(i)) work += load[idx(i)] * u[idx(i)];
  }
  return total / p_ - work;
}

VectorXd PLaplacian::residual(const VectorXd& u, const VectorXd& load) const {
  VectorXd r = -load;
  for (const auto& e : space_->elements()) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < e.count; ++k) {
      gx += u[idx(e.nodes[k])] * e.grad[k][0];
      gy += u[idx(e.nodes[k])] * e.grad[k][1];
    }
    const double a = gx * gx + gy * gy + eps2_;
    const double k1 = p_ == 2.0 ? 1.0 : std::pow(a, 0.5 * (p_ - 2.0));
    const double fx = e.measure * k1 * gx;
    const double fy = e.measure * k1 * gy;
    for (int k = 0; k < e.count; ++k) {
      r[idx(e.nodes[k])] += fx * e.grad[k][0] + fy * e.grad[k][1];
    }
  }
  restrict_free(r);
  return r;
}

SparseMatrix PLaplacian::jacobian(const VectorXd& u) const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(space_->num_elements() * 9 + space_->num_nodes());
  for (const auto& e : space_->elements()) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < e.count; ++k) {
      gx += u[idx(e.nodes[k])] * e.grad[k][0];
      gy += u[idx(e.nodes[k])] * e.grad[k][1];
    }
    const double a = gx * gx + gy * gy + eps2_;
    const double k1 = p_ == 2.0 ? 1.0 : std::pow(a, 0.5 * (p_ - 2.0));
    const double k2 = p_ == 2.0 ? 0.0 : (p_ - 2.0) * std::pow(a, 0.5 * (p_ - 4.0));
    for (int i = 0; i < e.count; ++i) {
      const std::size_t ni = e.nodes[i];
      if (space_->is_dirichlet(ni)) continue;
      const double gi = gx * e.grad[i][0] + gy * e.grad[i][1];
      for (int j = 0; j < e.count; ++j) {
        const std::size_t nj = e.nodes[j];
        if (space_->is_dirichlet(nj)) continue;
        const double gj = gx * e.grad[j][0] + gy * e.grad[j][1];
        const double dot = e.grad[i][0] * e.grad[j][0] + e.grad[i][1] * e.grad[j][1];
        triplets.emplace_back(idx(ni), idx(nj), e.measure * (k1 * dot + k2 * gi * gj));
      }
    }
  }
  for (std::size_t i = 0; i < space_->num_nodes(); ++i) {
    if (space_->is_dirichlet(i)) triplets.emplace_back(idx(i), idx(i), 1.0);
  }
  const Index n = idx(space_->num_nodes());
  SparseMatrix jac(n, n);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

void PLaplacian::restrict_free(VectorXd& r) const {
  for (std::size_t i = 0; i < space_->num_nodes(); ++i) {
    if (space_->is_dirichlet(i)) r[idx(i)] = 0.0;
  }
}

std::optional<VectorXd> flux_integration_1d(const P1Space& space, double p, const VectorXd& load,
                                            double regularization) {
  if (space.dimension() != 1) return std::nullopt;
  const std::size_t n_nodes = space.num_nodes();
  const std::size_t n_el = space.num_elements();
  const bool left_fixed = space.is_dirichlet(0);
  if (!space.is_dirichlet(n_nodes - 1)) return std::nullopt;
  const double eps2 = regularization * regularization;
  const auto& elements = space.elements();
  const auto& x = space.coordinates();

  // Element flux tau_e = measure_e * Phi(s_e) / h_e satisfies
  // tau_e = tau_{e-1} - b_e; a free left end gives tau_0 = -b_0.
  std::vector<double> offset(n_el, 0.0);
  for (std::size_t e = 1; e < n_el; ++e) offset[e] = offset[e - 1] - load[idx(e)];
  auto slopes = [&](double tau0, std::vector<double>& s) {
    s.resize(n_el);
    for (std::size_t e = 0; e < n_el; ++e) {
      const double h = x[e + 1].x - x[e].x;
      s[e] = inverse_flux((tau0 + offset[e]) * h / elements[e].measure, p, eps2);
    }
  };

  std::vector<double> s;
  if (!left_fixed) {
    slopes(-load[0], s);
  } else {
    // Choose tau_0 so that the slopes integrate to zero; the total rise is
    // increasing in tau_0 and changes sign on [-max offset, -min offset].
    auto rise = [&](double tau0) {
      slopes(tau0, s);
      double total = 0.0;
      for (std::size_t e = 0; e < n_el; ++e) total += s[e] * (x[e + 1].x - x[e].x);
      return total;
    };
    double lo = -*std::max_element(offset.begin(), offset.end());
    double hi = -*std::min_element(offset.begin(), offset.end());
    if (hi > lo) {
      for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (rise(mid) > 0.0) hi = mid;
        else lo = mid;
      }
    }
    slopes(0.5 * (lo + hi), s);
  }

  VectorXd u = VectorXd::Zero(idx(n_nodes));
  for (std::size_t e = n_el; e-- > 0;) {
    u[idx(e)] = u[idx(e + 1)] - s[e] * (x[e + 1].x - x[e].x);
  }
  if (left_fixed) u[0] = 0.0;
  if (!all_finite(u)) return std::nullopt;
  return u;
}

std::vector<double> continuation_ladder(double p, const NewtonConfig& cfg) {
  std::vector<double> ladder;
  if (!cfg.continuation.empty()) {
    for (double e : cfg.continuation) {
      if (e < p) ladder.push_back(e);
    }
  } else if (p > cfg.continuation_above) {
    for (double e = 2.0; e < p; e *= 2.0) ladder.push_back(e);
  }
  ladder.push_back(p);
  return ladder;
}

namespace {

PoissonSolution newton(const SpacePtr& space, double p, const VectorXd& load,
                       const NewtonConfig& cfg, VectorXd u) {
  const PLaplacian op(space, p, cfg.regularization);
  const double target = cfg.residual_tol * std::max(1.0, free_norm(*space, load));
  VectorXd r = op.residual(u, load);
  double norm = free_norm(*space, r);

  Eigen::SimplicialLDLT<SparseMatrix> factor;
  bool analyzed = false;
  int it = 0;
  while (!(norm <= target)) {
    if (it == cfg.max_iters) {
      throw NewtonError("Newton did not converge in " + std::to_string(cfg.max_iters) +
                            " iterations (p = " + std::to_string(p) +
                            ", residual = " + std::to_string(norm) + ")",
                        it, norm);
    }
    const SparseMatrix jac = op.jacobian(u);
    if (!analyzed) {
      factor.analyzePattern(jac);
      analyzed = true;
    }
    factor.factorize(jac);
    if (factor.info() != Eigen::Success) {
      throw NewtonError("singular Jacobian at Newton iteration " + std::to_string(it), it, norm);
    }
    const VectorXd step = factor.solve(-r);
    if (!all_finite(step)) {
      // Locate the first offending row for the diagnostic.
      Index bad = 0;
      for (Index i = 0; i < step.size(); ++i) {
        if (!std::isfinite(step[i])) {
          bad = i;
          break;
        }
      }
      throw NewtonError("singular Jacobian: non-finite update at node " + std::to_string(bad), it,
                        norm);
    }

    ++it;
    // An update at roundoff level means the residual cannot drop further.
    if (step.lpNorm<Eigen::Infinity>() <= cfg.step_tol * u.lpNorm<Eigen::Infinity>()) {
      u += step;
      norm = free_norm(*space, op.residual(u, load));
      break;
    }
    if (cfg.damping == Damping::none) {
      u += step;
      r = op.residual(u, load);
      norm = free_norm(*space, r);
      continue;
    }
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= cfg.max_halvings; ++h, t *= 0.5) {
      VectorXd trial = u + t * step;
      VectorXd r_trial = op.residual(trial, load);
      const double n_trial = free_norm(*space, r_trial);
      if (std::isfinite(n_trial) && n_trial < norm) {
        u = std::move(trial);
        r = std::move(r_trial);
        norm = n_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NewtonError("line search failed at Newton iteration " + std::to_string(it) +
                            " (p = " + std::to_string(p) + ", residual = " + std::to_string(norm) +
                            ", target = " + std::to_string(target) + ")",
                        it, norm);
    }
  }
  PoissonSolution out{FemFunction(space, std::move(u)), it, norm};
  return out;
}

}  // namespace

PoissonSolution solve_p_poisson(const SpacePtr& space, double p, const VectorXd& load,
                                const NewtonConfig& cfg, const VectorXd* guess) {
  cfg.validate();
  if (!(p > 1.0)) throw std::invalid_argument("p-Poisson problem needs p > 1");
  if (static_cast<std::size_t>(load.size()) != space->num_nodes()) {
    throw std::invalid_argument("load vector size does not match node count");
  }
  VectorXd free_load = load;
  for (std::size_t i = 0; i < space->num_nodes(); ++i) {
    if (space->is_dirichlet(i)) free_load[idx(i)] = 0.0;
  }
  if (free_load.isZero(0.0)) {
    return PoissonSolution{FemFunction(space), 0, 0.0};
  }

  if (cfg.flux_predictor) {
    if (auto exact = flux_integration_1d(*space, p, free_load, cfg.regularization)) {
      return newton(space, p, free_load, cfg, std::move(*exact));
    }
  }

  VectorXd u = guess ? *guess : VectorXd::Zero(idx(space->num_nodes()));
  if (static_cast<std::size_t>(u.size()) != space->num_nodes()) {
    throw std::invalid_argument("initial guess size does not match node count");
  }
  for (std::size_t i = 0; i < space->num_nodes(); ++i) {
    if (space->is_dirichlet(i)) u[idx(i)] = 0.0;
  }

  // A cold start begins from the linear (p = 2) solution.
  auto ladder = continuation_ladder(p, cfg);
  if (u.isZero(0.0) && ladder.front() != 2.0) ladder.insert(ladder.begin(), 2.0);

  PoissonSolution result;
  int total = 0;
  for (double exponent : ladder) {
    if (!u.isZero(0.0)) rescale_guess(*space, exponent, free_load, u);
    result = newton(space, exponent, free_load, cfg, std::move(u));
    total += result.iterations;
    u = result.u.values;
  }
  result.iterations = total;
  return result;
}

PoissonSolution solve_p_poisson_nodal(const SpacePtr& space, double p, const VectorXd& source,
                                      const NewtonConfig& cfg) {
  return solve_p_poisson(space, p, load_from_nodal(*space, source), cfg);
}

PoissonSolution solve_p_poisson(const SpacePtr& space, double p,
                                const std::function<double(const Point&)>& source,
                                const NewtonConfig& cfg) {
  const VectorXd load =
      assemble_load(*space, [&](const Element&, const QuadPoint& q) { return source(q.x); });
  return solve_p_poisson(space, p, load, cfg);
}

}  // namespace plap
