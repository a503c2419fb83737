#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "proxcalc/errors.hpp"
#include "proxcalc/ext_real.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/subdiff.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

/// Feasibility slack of indicator atoms, relative to max(1, set scale).
/// Projections land on set boundaries only up to rounding.
inline constexpr double kFeasibilityTol = 1e-9;

ExtReal evaluate(const ConvexFunction& f, const Vector& x);
Vector prox_closed_form(const ConvexFunction& f, double lambda, const Vector& x);
ConvexFunction conjugate_closed_form(const ConvexFunction& f);
SubdiffSet subdifferential(const ConvexFunction& f, const Vector& x, double kink_radius = 0.0);
Vector minimal_selection(const ConvexFunction& f, const Vector& x);

// Euclidean projections onto the catalog sets.
inline Vector project_ball(const Vector& x, const Vector& center, double radius) {
  const Vector d = x - center;
  const double n = d.norm();
  if (n <= radius) return x;
  return center + d * (radius / n);
}

inline Vector project_box(const Vector& x, const Vector& lo, const Vector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

inline Vector project_halfspace(const Vector& x, const Vector& a, double beta) {
  const double excess = a.dot(x) - beta;
  if (excess <= 0.0) return x;
  return x - (excess / a.squaredNorm()) * a;
}

namespace detail {

inline double feas_tol(double scale) { return kFeasibilityTol * std::max(1.0, scale); }

inline bool in_ball(const Vector& x, const Vector& c, double r) {
  return (x - c).norm() <= r + feas_tol(r + c.norm());
}

inline bool in_box(const Vector& x, const Vector& lo, const Vector& hi) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double tol = feas_tol(std::max(std::abs(lo[i]), std::abs(hi[i])));
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

inline bool at_point(const Vector& x, const Vector& p) {
  return (x - p).norm() <= feas_tol(p.norm());
}

inline bool in_halfspace(const Vector& x, const Vector& a, double beta) {
  return a.dot(x) - beta <= feas_tol(std::abs(beta)) * a.norm();
}

inline Vector unit(int dim, int i) {
  Vector e = Vector::Zero(dim);
  e[i] = 1.0;
  return e;
}

}  // namespace detail

/// f(x) in R u {+inf}. Envelope nodes are evaluated at their closed-form prox.
inline ExtReal evaluate(const ConvexFunction& f, const Vector& x) {
  require_dim(x, f.dim(), "evaluate: point");
  const ExtReal inf = ExtReal::infinity();
  return visit(
      f,
      Overloaded{
          [&](const atom::Affine& a) -> ExtReal { return a.a.dot(x) + a.c; },
          [&](const atom::Quadratic& q) -> ExtReal {
            return 0.5 * x.dot(q.q * x) + q.b.dot(x) + q.c;
          },
          [&](const atom::ScaledNorm& s) -> ExtReal { return s.ell * (x - s.center).norm(); },
          [&](const atom::IndicatorPoint& s) -> ExtReal {
            return detail::at_point(x, s.p) ? ExtReal(0.0) : inf;
          },
          [&](const atom::IndicatorBall& s) -> ExtReal {
            return detail::in_ball(x, s.center, s.radius) ? ExtReal(0.0) : inf;
          },
          [&](const atom::IndicatorBox& s) -> ExtReal {
            return detail::in_box(x, s.lo, s.hi) ? ExtReal(0.0) : inf;
          },
          [&](const atom::IndicatorHalfspace& s) -> ExtReal {
            return detail::in_halfspace(x, s.a, s.beta) ? ExtReal(0.0) : inf;
          },
          [&](const atom::SupportBall& s) -> ExtReal {
            return s.center.dot(x) + s.radius * x.norm();
          },
          [&](const atom::SupportBox& s) -> ExtReal {
            return s.lo.cwiseProduct(x).cwiseMax(s.hi.cwiseProduct(x)).sum();
          },
          [&](const combinator::Tilt& c) { return evaluate(c.f, x) - c.a.dot(x); },
          [&](const combinator::Translate& c) { return evaluate(c.f, x + c.t); },
          [&](const combinator::AddConst& c) { return evaluate(c.f, x) + c.c; },
          [&](const combinator::AddSqNorm& c) {
            return evaluate(c.f, x) + 0.5 * c.mu * x.squaredNorm();
          },
          [&](const combinator::Envelope& e) -> ExtReal {
            const Vector p = prox_closed_form(e.f, e.lambda, x);
            const ExtReal inner = evaluate(e.f, p);
            if (inner.is_infinite())
              throw ExtendedArithmeticError("envelope: prox landed outside the domain");
            return inner + (x - p).squaredNorm() / (2.0 * e.lambda);
          },
      });
}

/// argmin_y f(y) + ||x - y||^2 / (2 lambda), assembled from per-atom formulas
/// and the combinator rules
///   tilt:        prox_{l(f - <a,.>)}(x)  = prox_{l f}(x + l a)
///   translate:   prox_{l f(. + t)}(x)    = prox_{l f}(x + t) - t
///   add_sq_norm: prox_{l(f + m/2|.|^2)}(x) = prox_{(l/s) f}(x / s),  s = 1 + l m
///   envelope:    prox_{l f_m}(x)         = x + l/(l+m) (prox_{(l+m) f}(x) - x)
inline Vector prox_closed_form(const ConvexFunction& f, double lambda, const Vector& x) {
  require_dim(x, f.dim(), "prox: point");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("prox: lambda must be > 0");
  return visit(
      f,
      Overloaded{
          [&](const atom::Affine& a) -> Vector { return x - lambda * a.a; },
          [&](const atom::Quadratic& q) -> Vector {
            const Matrix m = Matrix::Identity(f.dim(), f.dim()) + lambda * q.q;
            return m.ldlt().solve(x - lambda * q.b);
          },
          [&](const atom::ScaledNorm& s) -> Vector {
            const Vector d = x - s.center;
            const double n = d.norm();
            const double t = lambda * s.ell;
            if (n <= t) return s.center;
            return s.center + (1.0 - t / n) * d;
          },
          [&](const atom::IndicatorPoint& s) -> Vector { return s.p; },
          [&](const atom::IndicatorBall& s) -> Vector {
            return project_ball(x, s.center, s.radius);
          },
          [&](const atom::IndicatorBox& s) -> Vector { return project_box(x, s.lo, s.hi); },
          [&](const atom::IndicatorHalfspace& s) -> Vector {
            return project_halfspace(x, s.a, s.beta);
          },
          // Moreau decomposition with the projection onto the underlying set.
          [&](const atom::SupportBall& s) -> Vector {
            return x - lambda * project_ball(x / lambda, s.center, s.radius);
          },
          [&](const atom::SupportBox& s) -> Vector {
            return x - lambda * project_box(x / lambda, s.lo, s.hi);
          },
          [&](const combinator::Tilt& c) -> Vector {
            return prox_closed_form(c.f, lambda, x + lambda * c.a);
          },
          [&](const combinator::Translate& c) -> Vector {
            return prox_closed_form(c.f, lambda, x + c.t) - c.t;
          },
          [&](const combinator::AddConst& c) -> Vector { return prox_closed_form(c.f, lambda, x); },
          [&](const combinator::AddSqNorm& c) -> Vector {
            const double s = 1.0 + lambda * c.mu;
            return prox_closed_form(c.f, lambda / s, x / s);
          },
          [&](const combinator::Envelope& e) -> Vector {
            const double total = lambda + e.lambda;
            return x + (lambda / total) * (prox_closed_form(e.f, total, x) - x);
          },
      });
}

/// Fenchel conjugate by the rule table
///   (f - <a,.>)* = f*(. + a)          (f(. + t))* = f* - <t,.>
///   (f + c)*     = f* - c             (f_lambda)* = f* + (lambda/2)|.|^2
///   (f + (m/2)|.|^2)* = (f*)_m
/// and the atom pairs affine <-> point indicator, ball/box indicator <-> support.
/// Throws UnsupportedConjugate for half-space indicators and singular
/// quadratics.
inline ConvexFunction conjugate_closed_form(const ConvexFunction& f) {
  using CF = ConvexFunction;
  const int n = f.dim();
  return visit(
      f, Overloaded{
             [&](const atom::Affine& a) { return CF::add_const(CF::indicator_point(a.a), -a.c); },
             [&](const atom::Quadratic& q) {
               Eigen::SelfAdjointEigenSolver<Matrix> eig(q.q);
               const double scale = std::max(1.0, q.q.cwiseAbs().maxCoeff());
               if (eig.eigenvalues().minCoeff() <= 1e-12 * scale)
                 throw UnsupportedConjugate("quadratic: Q is singular, conjugate has restricted domain");
               const Matrix inv = eig.eigenvectors() *
                                  eig.eigenvalues().cwiseInverse().asDiagonal() *
                                  eig.eigenvectors().transpose();
               const Vector inv_b = inv * q.b;
               return CF::quadratic(inv, -inv_b, 0.5 * q.b.dot(inv_b) - q.c);
             },
             [&](const atom::ScaledNorm& s) {
               if (s.ell == 0.0) return CF::indicator_point(Vector::Zero(n));
               return CF::tilt(CF::indicator_ball(Vector::Zero(n), s.ell), -s.center);
             },
             [&](const atom::IndicatorPoint& s) { return CF::affine(s.p, 0.0); },
             [&](const atom::IndicatorBall& s) { return CF::support_ball(s.center, s.radius); },
             [&](const atom::IndicatorBox& s) { return CF::support_box(s.lo, s.hi); },
             [&](const atom::IndicatorHalfspace&) -> CF {
               throw UnsupportedConjugate("indicator_halfspace: conjugate is not in the catalog");
             },
             [&](const atom::SupportBall& s) { return CF::indicator_ball(s.center, s.radius); },
             [&](const atom::SupportBox& s) { return CF::indicator_box(s.lo, s.hi); },
             [&](const combinator::Tilt& c) { return CF::translate(conjugate_closed_form(c.f), c.a); },
             [&](const combinator::Translate& c) { return CF::tilt(conjugate_closed_form(c.f), c.t); },
             [&](const combinator::AddConst& c) { return CF::add_const(conjugate_closed_form(c.f), -c.c); },
             [&](const combinator::AddSqNorm& c) {
               if (c.mu == 0.0) return conjugate_closed_form(c.f);
               return CF::envelope(conjugate_closed_form(c.f), c.mu);
             },
             [&](const combinator::Envelope& e) {
               return CF::add_sq_norm(conjugate_closed_form(e.f), e.lambda);
             },
         });
}

inline bool has_closed_form_conjugate(const ConvexFunction& f) {
  try {
    (void)conjugate_closed_form(f);
    return true;
  } catch (const UnsupportedConjugate&) {
    return false;
  }
}

/// The subdifferential as a closed convex set. Normal cones of the indicator
/// atoms use the same feasibility slack as evaluate(); points outside the
/// domain give the empty set.
///
/// With kink_radius > 0 the kinks of the norm and support atoms count as
/// active whenever x is within kink_radius of them, which yields the convex
/// hull of nearby gradients (used by the numerical prox solver).
inline SubdiffSet subdifferential(const ConvexFunction& f, const Vector& x, double kink_radius) {
  require_dim(x, f.dim(), "subdifferential: point");
  const int n = f.dim();
  const Vector zero = Vector::Zero(n);
  return visit(
      f,
      Overloaded{
          [&](const atom::Affine& a) { return SubdiffSet::singleton(a.a); },
          [&](const atom::Quadratic& q) { return SubdiffSet::singleton(q.q * x + q.b); },
          [&](const atom::ScaledNorm& s) {
            const Vector d = x - s.center;
            const double r = d.norm();
            if (r <= kink_radius) return SubdiffSet::ball(zero, s.ell);
            return SubdiffSet::singleton(s.ell * d / r);
          },
          [&](const atom::IndicatorPoint& s) {
            if (!detail::at_point(x, s.p)) return SubdiffSet::empty(n);
            std::vector<Vector> lines;
            for (int i = 0; i < n; ++i) lines.push_back(detail::unit(n, i));
            return SubdiffSet::cone(zero, {}, std::move(lines));
          },
          [&](const atom::IndicatorBall& s) {
            if (!detail::in_ball(x, s.center, s.radius)) return SubdiffSet::empty(n);
            const Vector d = x - s.center;
            if (d.norm() < s.radius - detail::feas_tol(s.radius + s.center.norm()))
              return SubdiffSet::singleton(zero);
            return SubdiffSet::cone(zero, {d}, {});
          },
          [&](const atom::IndicatorBox& s) {
            if (!detail::in_box(x, s.lo, s.hi)) return SubdiffSet::empty(n);
            std::vector<Vector> rays, lines;
            for (int i = 0; i < n; ++i) {
              const double tol = detail::feas_tol(std::max(std::abs(s.lo[i]), std::abs(s.hi[i])));
              const bool at_lo = x[i] <= s.lo[i] + tol;
              const bool at_hi = x[i] >= s.hi[i] - tol;
              if (at_lo && at_hi)
                lines.push_back(detail::unit(n, i));
              else if (at_lo)
                rays.push_back(-detail::unit(n, i));
              else if (at_hi)
                rays.push_back(detail::unit(n, i));
            }
            if (rays.empty() && lines.empty()) return SubdiffSet::singleton(zero);
            return SubdiffSet::cone(zero, std::move(rays), std::move(lines));
          },
          [&](const atom::IndicatorHalfspace& s) {
            if (!detail::in_halfspace(x, s.a, s.beta)) return SubdiffSet::empty(n);
            if (s.a.dot(x) - s.beta < -detail::feas_tol(std::abs(s.beta)) * s.a.norm())
              return SubdiffSet::singleton(zero);
            return SubdiffSet::cone(zero, {s.a}, {});
          },
          [&](const atom::SupportBall& s) {
            const double r = x.norm();
            if (r <= kink_radius) return SubdiffSet::ball(s.center, s.radius);
            return SubdiffSet::singleton(s.center + s.radius * x / r);
          },
          [&](const atom::SupportBox& s) {
            Vector lo(n), hi(n);
            bool kink = false;
            for (int i = 0; i < n; ++i) {
              if (x[i] > kink_radius) {
                lo[i] = hi[i] = s.hi[i];
              } else if (x[i] < -kink_radius) {
                lo[i] = hi[i] = s.lo[i];
              } else {
                lo[i] = s.lo[i];
                hi[i] = s.hi[i];
                kink = kink || s.lo[i] < s.hi[i];
              }
            }
            if (!kink) return SubdiffSet::singleton(lo);
            return SubdiffSet::box(lo, hi);
          },
          [&](const combinator::Tilt& c) { return subdifferential(c.f, x, kink_radius).shifted(-c.a); },
          [&](const combinator::Translate& c) { return subdifferential(c.f, x + c.t, kink_radius); },
          [&](const combinator::AddConst& c) { return subdifferential(c.f, x, kink_radius); },
          [&](const combinator::AddSqNorm& c) { return subdifferential(c.f, x, kink_radius).shifted(c.mu * x); },
          [&](const combinator::Envelope& e) {
            return SubdiffSet::singleton((x - prox_closed_form(e.f, e.lambda, x)) / e.lambda);
          },
      });
}

/// Least-norm element of the subdifferential. Throws EmptySubdifferential
/// outside the domain.
inline Vector minimal_selection(const ConvexFunction& f, const Vector& x) {
  const SubdiffSet s = subdifferential(f, x);
  if (s.is_empty())
    throw EmptySubdifferential("minimal_selection: " + format_point(x) + " is outside the domain");
  return s.min_norm_element();
}

/// True when the tree reaches an indicator atom without passing through an
/// Envelope, i.e. the function can take the value +inf.
inline bool has_restricted_domain(const ConvexFunction& f) {
  return visit(f, Overloaded{
                      [](const atom::IndicatorPoint&) { return true; },
                      [](const atom::IndicatorBall&) { return true; },
                      [](const atom::IndicatorBox&) { return true; },
                      [](const atom::IndicatorHalfspace&) { return true; },
                      [](const combinator::Tilt& c) { return has_restricted_domain(c.f); },
                      [](const combinator::Translate& c) { return has_restricted_domain(c.f); },
                      [](const combinator::AddConst& c) { return has_restricted_domain(c.f); },
                      [](const combinator::AddSqNorm& c) { return has_restricted_domain(c.f); },
                      [](const auto&) { return false; },
                  });
}

}  // namespace proxcalc
