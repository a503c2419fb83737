#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "proxcalc/proxcalc.hpp"

namespace fixture {

using proxcalc::ConvexFunction;
using proxcalc::Matrix;
using proxcalc::Vector;

/// First n entries of the list, cycling when n exceeds its length.
inline Vector vec(int n, std::initializer_list<double> values) {
  Vector v(n);
  auto it = values.begin();
  for (int i = 0; i < n; ++i, ++it) {
    if (it == values.end()) it = values.begin();
    v[i] = *it;
  }
  return v;
}

inline Vector v2(double a, double b) { return vec(2, {a, b}); }
inline Vector v1(double a) { return vec(1, {a}); }

inline Matrix spd(int n, std::uint64_t seed) {
  proxcalc::Lcg64 rng(seed);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
  return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

struct Named {
  std::string name;
  ConvexFunction f;
  Vector inside;  // a point of dom f
};

/// One instance of every atom and combinator in dimension n.
inline std::vector<Named> catalog(int n) {
  const Vector c = vec(n, {0.4, -0.7, 0.2});
  const Vector a = vec(n, {0.3, 0.5, -0.6});
  const ConvexFunction norm = ConvexFunction::scaled_norm(1.5, c);
  return {
      {"affine", ConvexFunction::affine(a, 1.0)},
      {"quadratic", ConvexFunction::quadratic(spd(n, 11), vec(n, {0.5, -1.0, 0.25}), -0.5)},
      {"half_sq_norm", ConvexFunction::half_sq_norm(c)},
      {"scaled_norm", norm},
      {"indicator_point", ConvexFunction::indicator_point(vec(n, {1.0, -0.5, 0.25})), vec(n, {1.0, -0.5, 0.25})},
      {"indicator_ball", ConvexFunction::indicator_ball(c, 1.5), c},
      {"indicator_box", ConvexFunction::indicator_box(vec(n, {-1.0, -0.5, -2.0}), vec(n, {1.0, 2.0, 0.5}))},
      {"indicator_halfspace", ConvexFunction::indicator_halfspace(vec(n, {1.0, 2.0, -1.0}), 0.5)},
      {"support_ball", ConvexFunction::support_ball(c, 0.8)},
      {"support_box", ConvexFunction::support_box(vec(n, {-1.0, -0.5, -2.0}), vec(n, {1.0, 2.0, 0.5}))},
      {"tilt_norm", ConvexFunction::tilt(norm, a)},
      {"translate_quadratic", ConvexFunction::translate(ConvexFunction::quadratic(spd(n, 5), a, 0.0), c)},
      {"add_const_norm", ConvexFunction::add_const(norm, 2.5)},
      {"add_sq_norm_support_box",
       ConvexFunction::add_sq_norm(ConvexFunction::support_box(-Vector::Ones(n), Vector::Ones(n)), 0.7)},
      {"envelope_norm", ConvexFunction::envelope(norm, 0.6)},
      {"envelope_box", ConvexFunction::envelope(
                           ConvexFunction::indicator_box(-Vector::Ones(n), Vector::Ones(n)), 1.3)},
  };
}

/// Entries whose value is finite everywhere.
inline bool full_domain(const ConvexFunction& f) { return !proxcalc::has_restricted_domain(f); }

}  // namespace fixture
