#pragma once

// Reference computations that share no code path with the library: brute
// force minimization and maximization on shrinking lattices, and central
// finite differences.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "proxcalc/proxcalc.hpp"

namespace oracle {

using proxcalc::Vector;
using Scalar = std::function<double(const Vector&)>;

/// Minimizes a convex objective by repeated lattice search: each round scans
/// a (2k+1)^n lattice around the incumbent and halves the half-width once a
/// round fails to improve. Values of +inf are allowed.
inline Vector lattice_argmin(const Scalar& phi, Vector start, double half_width, int rounds = 60,
                             int k = 10) {
  const auto n = start.size();
  Vector best = start;
  double bv = phi(best);
  for (int r = 0; r < rounds;) {
    const double h = half_width / k;
    const Vector center = best;
    const double before = bv;
    std::vector<int> idx(static_cast<std::size_t>(n), -k);
    for (;;) {
      Vector p = center;
      for (Eigen::Index i = 0; i < n; ++i) p[i] += idx[static_cast<std::size_t>(i)] * h;
      const double v = phi(p);
      if (v < bv) bv = v, best = p;
      Eigen::Index i = 0;
      while (i < n && ++idx[static_cast<std::size_t>(i)] > k) idx[static_cast<std::size_t>(i++)] = -k;
      if (i == n) break;
    }
    if (bv < before - 1e-15 * (1 + std::abs(before)) && half_width > 1e-12) continue;
    half_width *= 0.5;
    ++r;
  }
  return best;
}

inline double ext(const proxcalc::ExtReal& v) { return v.raw(); }

/// prox_{lambda f}(x) by lattice search.
/// The search starts at `start` when given, which must lie in dom f.
inline Vector brute_prox(const proxcalc::ConvexFunction& f, double lambda, const Vector& x,
                         const Vector& start = Vector(), double half_width = 20.0) {
  return lattice_argmin(
      [&](const Vector& y) { return ext(proxcalc::evaluate(f, y)) + (x - y).squaredNorm() / (2 * lambda); },
      start.size() ? start : x, half_width);
}

/// min_y f(y) + ||x - y||^2 / (2 lambda) by lattice search.
inline double brute_envelope(const proxcalc::ConvexFunction& f, double lambda, const Vector& x) {
  const Vector y = brute_prox(f, lambda, x);
  return ext(proxcalc::evaluate(f, y)) + (x - y).squaredNorm() / (2 * lambda);
}

/// sup_v <y, v> - f(v) over the box |v_i| <= radius, by a fine scan followed by
/// local refinement. Returns the best value found.
inline double brute_conjugate(const Scalar& f, const Vector& y, double radius, int per_axis = 401) {
  const auto n = y.size();
  double best = -std::numeric_limits<double>::infinity();
  Vector arg = Vector::Zero(n);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const double h = 2 * radius / (per_axis - 1);
  for (;;) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = -radius + idx[static_cast<std::size_t>(i)] * h;
    const double s = y.dot(v) - f(v);
    if (s > best) best = s, arg = v;
    Eigen::Index i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] >= per_axis) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  const Vector refined = lattice_argmin(
      [&](const Vector& v) {
        if ((v.array().abs() > radius).any()) return std::numeric_limits<double>::infinity();
        return f(v) - y.dot(v);
      },
      arg, h, 40, 4);
  return std::max(best, y.dot(refined) - f(refined));
}

/// Central-difference gradient with step h.
inline Vector fd_gradient(const Scalar& phi, const Vector& x, double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector e = Vector::Zero(x.size());
    e[i] = h;
    g[i] = (phi(x + e) - phi(x - e)) / (2 * h);
  }
  return g;
}

/// Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& g, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double s = g(a) + g(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * g(a + k * h);
  return s * h / 3.0;
}

}  // namespace oracle
