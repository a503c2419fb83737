#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "proxcalc/catalog.hpp"
#include "proxcalc/errors.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

enum class ProxMethod { closed_form, numerical };

/// How prox() picks its solver. `automatic` uses the closed form.
enum class ProxRoute { automatic, closed_form, numerical };

inline const char* to_string(ProxMethod m) {
  return m == ProxMethod::closed_form ? "closed_form" : "numerical";
}

struct SolverBudget {
  int max_iters = 10000;
  /// Bound on the final iterate displacement and stationarity residual.
  double tol = 1e-8;

  void validate() const {
    if (max_iters < 1) throw InvalidArgument("SolverBudget.max_iters must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("SolverBudget.tol must be > 0");
  }
};

struct ProxResult {
  Vector minimizer;
  /// f(minimizer) + ||x - minimizer||^2 / (2 lambda), the envelope value at x.
  double envelope_value = 0.0;
  ProxMethod method = ProxMethod::closed_form;
  int iterations = 0;
  /// Final stationarity measure of the solver; 0 for closed forms.
  double residual = 0.0;
  bool converged = true;
  std::vector<std::string> warnings;
};

inline constexpr int kEnvelopeDepthWarning = 3;

namespace detail {

inline double prox_objective(const ConvexFunction& f, double lambda, const Vector& x,
                             const Vector& y) {
  return evaluate(f, y).value() + (x - y).squaredNorm() / (2.0 * lambda);
}

inline ProxResult closed_form_result(const ConvexFunction& f, double lambda, const Vector& x) {
  ProxResult r;
  r.minimizer = prox_closed_form(f, lambda, x);
  const ExtReal v = evaluate(f, r.minimizer);
  if (v.is_infinite()) throw ExtendedArithmeticError("prox minimizer outside the domain");
  r.envelope_value = v.value() + (x - r.minimizer).squaredNorm() / (2.0 * lambda);
  return r;
}

inline void check_prox_args(const ConvexFunction& f, double lambda, const Vector& x,
                            const SolverBudget& budget) {
  require_dim(x, f.dim(), "prox: point");
  require_finite(x, "prox: point");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("prox: lambda must be > 0");
  budget.validate();
}

// Moves y onto every kink of the tree lying within `radius`: the center of a
// norm atom, the origin of a ball support, the coordinate hyperplanes of a box
// support.
inline Vector snap_to_kinks(const ConvexFunction& f, const Vector& y, double radius) {
  return visit(f, Overloaded{
                      [&](const atom::ScaledNorm& s) -> Vector {
                        return (y - s.center).norm() <= radius ? s.center : y;
                      },
                      [&](const atom::SupportBall&) -> Vector {
                        return y.norm() <= radius ? Vector(Vector::Zero(y.size())) : y;
                      },
                      [&](const atom::SupportBox&) -> Vector {
                        Vector out = y;
                        for (Eigen::Index i = 0; i < y.size(); ++i)
                          if (std::abs(y[i]) <= radius) out[i] = 0.0;
                        return out;
                      },
                      [&](const combinator::Translate& c) -> Vector {
                        return snap_to_kinks(c.f, y + c.t, radius) - c.t;
                      },
                      [&](const combinator::Tilt& c) { return snap_to_kinks(c.f, y, radius); },
                      [&](const combinator::AddConst& c) { return snap_to_kinks(c.f, y, radius); },
                      [&](const combinator::AddSqNorm& c) { return snap_to_kinks(c.f, y, radius); },
                      [&](const auto&) -> Vector { return y; },
                  });
}

}  // namespace detail

/// Numerical prox: descent on phi(y) = f(y) + ||x - y||^2 / (2 lambda).
///
/// Each step moves along the least-norm element h of the kink-enlarged
/// subdifferential of phi at y; the unit step y - lambda h is the fixed-point
/// map y -> x - lambda g, damped by Armijo backtracking. The kink radius
/// starts at a tenth of the problem scale and shrinks tenfold whenever
/// lambda ||h|| falls under it, after first trying to jump onto the nearby
/// kink itself. Exits when the exact subdifferential certifies
/// ||y - prox(x)|| <= tol by strong convexity, or when both the kink radius
/// and the enlarged residual are below tol.
///
/// Trees with an indicator outside every envelope go straight to their
/// projection formulas.
inline ProxResult numerical_prox(const ConvexFunction& f, double lambda, const Vector& x,
                                 const SolverBudget& budget = {}) {
  detail::check_prox_args(f, lambda, x, budget);
  if (has_restricted_domain(f)) return detail::closed_form_result(f, lambda, x);

  ProxResult out;
  out.method = ProxMethod::numerical;
  out.converged = false;

  Vector y = x;
  double phi = detail::prox_objective(f, lambda, x, y);
  double kink = 0.1 * std::max(1.0, x.norm());
  double residual = 0.0;
  int it = 0;
  while (it < budget.max_iters) {
    ++it;
    const Vector shift = (y - x) / lambda;
    const double exact = lambda * subdifferential(f, y).shifted(shift).min_norm_element().norm();
    if (exact <= budget.tol) {
      residual = exact;
      out.converged = true;
      break;
    }
    const Vector h = subdifferential(f, y, kink).shifted(shift).min_norm_element();
    const double step = lambda * h.norm();
    residual = std::max(kink, step);
    if (step <= kink) {
      const Vector snapped = detail::snap_to_kinks(f, y, kink);
      if (snapped != y) {
        const double phi_snapped = detail::prox_objective(f, lambda, x, snapped);
        if (phi_snapped <= phi + 1e-15 * std::max(1.0, std::abs(phi))) {
          y = snapped;
          phi = phi_snapped;
          continue;
        }
      }
      if (kink <= budget.tol) {
        out.converged = true;
        break;
      }
      kink = std::max(kink / 10.0, 0.5 * budget.tol);
      continue;
    }
    // Armijo backtracking; the directional derivative along -h is -||h||^2.
    // Near the optimum objective differences drown in rounding, so a step that
    // strictly lowers the enlarged residual is accepted as well.
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Vector trial = y - (t * lambda) * h;
      const double phi_trial = detail::prox_objective(f, lambda, x, trial);
      const double decrease = 1e-4 * t * lambda * h.squaredNorm();
      const double noise = 1e-15 * std::max(1.0, std::abs(phi));
      const bool armijo = decrease > noise && phi_trial <= phi - decrease;
      if (armijo || (phi_trial <= phi + noise &&
                     lambda * subdifferential(f, trial, kink)
                                  .shifted((trial - x) / lambda)
                                  .min_norm_element()
                                  .norm() < step)) {
        y = trial;
        phi = phi_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (kink <= budget.tol) {
        out.converged = step <= budget.tol;
        break;
      }
      kink = std::max(kink / 10.0, 0.5 * budget.tol);
    }
  }
  out.minimizer = y;
  out.envelope_value = phi;
  out.iterations = it;
  out.residual = residual;
  if (!out.converged)
    out.warnings.push_back("numerical prox did not reach tol " + format_real(budget.tol) +
                           " within " + std::to_string(budget.max_iters) + " iterations");
  return out;
}

/// prox_{lambda f}(x) with its envelope value and solver diagnostics. A
/// result that missed the budget is still returned, with converged = false.
inline ProxResult prox(const ConvexFunction& f, double lambda, const Vector& x,
                       const SolverBudget& budget = {}, ProxRoute route = ProxRoute::automatic) {
  detail::check_prox_args(f, lambda, x, budget);
  ProxResult r = route == ProxRoute::numerical ? numerical_prox(f, lambda, x, budget)
                                               : detail::closed_form_result(f, lambda, x);
  const int depth = envelope_depth(f);
  if (depth >= kEnvelopeDepthWarning)
    r.warnings.push_back("envelope nesting depth " + std::to_string(depth));
  return r;
}

namespace detail {
inline ProxResult require_converged(ProxResult r) {
  if (!r.converged)
    throw SolverDidNotConverge("prox solver stopped with residual " + format_real(r.residual) +
                               " after " + std::to_string(r.iterations) + " iterations");
  return r;
}
}  // namespace detail

/// f_lambda(x) = min_y f(y) + ||x - y||^2 / (2 lambda).
inline double moreau_envelope(const ConvexFunction& f, double lambda, const Vector& x,
                              const SolverBudget& budget = {},
                              ProxRoute route = ProxRoute::automatic) {
  return detail::require_converged(prox(f, lambda, x, budget, route)).envelope_value;
}

/// grad f_lambda(x) = (x - prox_{lambda f}(x)) / lambda.
inline Vector envelope_gradient(const ConvexFunction& f, double lambda, const Vector& x,
                                const SolverBudget& budget = {},
                                ProxRoute route = ProxRoute::automatic) {
  const ProxResult r = detail::require_converged(prox(f, lambda, x, budget, route));
  return (x - r.minimizer) / lambda;
}

/// || prox_f(x) + prox_{f*}(x) - x || with f* from the closed-form rule
/// table. Throws UnsupportedConjugate when f* has no closed form; the
/// grid-based variant lives in conjugation.hpp.
inline double moreau_decomposition_residual(const ConvexFunction& f, const Vector& x,
                                            const SolverBudget& budget = {},
                                            ProxRoute route = ProxRoute::automatic) {
  const ConvexFunction fc = conjugate_closed_form(f);
  const ProxResult p = detail::require_converged(prox(f, 1.0, x, budget, route));
  const ProxResult q = detail::require_converged(prox(fc, 1.0, x, budget, route));
  return (p.minimizer + q.minimizer - x).norm();
}

}  // namespace proxcalc
