#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "proxcalc/errors.hpp"
#include "proxcalc/random.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

namespace subdiff {
struct Singleton {
  Vector g;
};
struct Ball {
  Vector center;
  double radius = 0.0;
};
/// Finite box [lo, hi]; lo_i == hi_i is allowed.
struct Box {
  Vector lo, hi;
};
/// apex + { sum_j t_j r_j : t_j >= 0 } + span(lines).
/// Generators (rays and lines together) are pairwise orthogonal, which is the
/// case for every normal cone the catalog produces.
struct Cone {
  Vector apex;
  std::vector<Vector> rays;
  std::vector<Vector> lines;
};
struct Empty {};
}  // namespace subdiff

/// Closed convex set returned by subdifferential().
class SubdiffSet {
 public:
  using Variant =
      std::variant<subdiff::Singleton, subdiff::Ball, subdiff::Box, subdiff::Cone, subdiff::Empty>;

  SubdiffSet(Variant v, int dim) : v_(std::move(v)), dim_(dim) {}

  static SubdiffSet singleton(Vector g) {
    const int n = static_cast<int>(g.size());
    return {subdiff::Singleton{std::move(g)}, n};
  }
  static SubdiffSet ball(Vector center, double radius) {
    const int n = static_cast<int>(center.size());
    return {subdiff::Ball{std::move(center), radius}, n};
  }
  static SubdiffSet box(Vector lo, Vector hi) {
    const int n = static_cast<int>(lo.size());
    return {subdiff::Box{std::move(lo), std::move(hi)}, n};
  }
  static SubdiffSet cone(Vector apex, std::vector<Vector> rays, std::vector<Vector> lines) {
    const int n = static_cast<int>(apex.size());
    return {subdiff::Cone{std::move(apex), std::move(rays), std::move(lines)}, n};
  }
  static SubdiffSet empty(int dim) { return {subdiff::Empty{}, dim}; }

  const Variant& kind() const { return v_; }
  int dim() const { return dim_; }
  bool is_empty() const { return std::holds_alternative<subdiff::Empty>(v_); }

  std::string kind_name() const {
    static constexpr const char* names[] = {"singleton", "ball", "box", "halfline_cone", "empty"};
    return names[v_.index()];
  }

  /// The set translated by v.
  SubdiffSet shifted(const Vector& v) const {
    return std::visit(
        [&](const auto& s) -> SubdiffSet {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, subdiff::Singleton>) {
            return singleton(s.g + v);
          } else if constexpr (std::is_same_v<T, subdiff::Ball>) {
            return ball(s.center + v, s.radius);
          } else if constexpr (std::is_same_v<T, subdiff::Box>) {
            return box(s.lo + v, s.hi + v);
          } else if constexpr (std::is_same_v<T, subdiff::Cone>) {
            return cone(s.apex + v, s.rays, s.lines);
          } else {
            return empty(dim_);
          }
        },
        v_);
  }

  /// Projection of the origin onto the set.
  Vector min_norm_element() const {
    return std::visit(
        [&](const auto& s) -> Vector {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, subdiff::Singleton>) {
            return s.g;
          } else if constexpr (std::is_same_v<T, subdiff::Ball>) {
            const double n = s.center.norm();
            if (n <= s.radius) return Vector::Zero(dim_);
            return s.center * (1.0 - s.radius / n);
          } else if constexpr (std::is_same_v<T, subdiff::Box>) {
            return Vector::Zero(dim_).cwiseMax(s.lo).cwiseMin(s.hi);
          } else if constexpr (std::is_same_v<T, subdiff::Cone>) {
            Vector p = s.apex;
            for (const auto& r : s.rays) p += std::max(0.0, -s.apex.dot(r) / r.squaredNorm()) * r;
            for (const auto& l : s.lines) p -= (s.apex.dot(l) / l.squaredNorm()) * l;
            return p;
          } else {
            throw EmptySubdifferential("minimal selection of an empty subdifferential");
          }
        },
        v_);
  }

  bool contains(const Vector& p, double tol) const {
    return std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, subdiff::Singleton>) {
            return (p - s.g).norm() <= tol;
          } else if constexpr (std::is_same_v<T, subdiff::Ball>) {
            return (p - s.center).norm() <= s.radius + tol;
          } else if constexpr (std::is_same_v<T, subdiff::Box>) {
            return ((p - s.lo).array() >= -tol).all() && ((s.hi - p).array() >= -tol).all();
          } else if constexpr (std::is_same_v<T, subdiff::Cone>) {
            Vector w = p - s.apex;
            for (const auto& r : s.rays) {
              const double t = w.dot(r) / r.squaredNorm();
              if (t * r.norm() < -tol) return false;
              w -= t * r;
            }
            for (const auto& l : s.lines) w -= (w.dot(l) / l.squaredNorm()) * l;
            return w.norm() <= tol;
          } else {
            return false;
          }
        },
        v_);
  }

  /// sup over the set of <s, d>; +inf for unbounded directions, -inf when empty.
  double support(const Vector& d) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, subdiff::Singleton>) {
            return s.g.dot(d);
          } else if constexpr (std::is_same_v<T, subdiff::Ball>) {
            return s.center.dot(d) + s.radius * d.norm();
          } else if constexpr (std::is_same_v<T, subdiff::Box>) {
            return s.lo.cwiseProduct(d).cwiseMax(s.hi.cwiseProduct(d)).sum();
          } else if constexpr (std::is_same_v<T, subdiff::Cone>) {
            const double scale = 1e-12 * std::max(1.0, d.norm());
            for (const auto& r : s.rays)
              if (r.dot(d) > scale * r.norm()) return inf;
            for (const auto& l : s.lines)
              if (std::abs(l.dot(d)) > scale * l.norm()) return inf;
            return s.apex.dot(d);
          } else {
            return -inf;
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [&](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, subdiff::Singleton>) {
            return "singleton " + format_point(s.g);
          } else if constexpr (std::is_same_v<T, subdiff::Ball>) {
            return "ball center " + format_point(s.center) + " radius " + format_real(s.radius);
          } else if constexpr (std::is_same_v<T, subdiff::Box>) {
            return "box " + format_point(s.lo) + " .. " + format_point(s.hi);
          } else if constexpr (std::is_same_v<T, subdiff::Cone>) {
            std::string out = "cone apex " + format_point(s.apex);
            for (const auto& r : s.rays) out += " ray " + format_point(r);
            for (const auto& l : s.lines) out += " line " + format_point(l);
            return out;
          } else {
            return "empty";
          }
        },
        v_);
  }

 private:
  Variant v_;
  int dim_;
};

namespace detail {
inline bool close(const Vector& a, const Vector& b, double tol) { return (a - b).norm() <= tol; }

inline bool same_support(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}
}  // namespace detail

/// Set equality: structural for matching bounded kinds, otherwise minimal
/// selections plus support-function probes (20 random directions and the
/// cone generators of both sides).
inline bool same_set(const SubdiffSet& a, const SubdiffSet& b, double tol, Lcg64& rng) {
  if (a.dim() != b.dim()) return false;
  if (a.is_empty() || b.is_empty()) return a.is_empty() && b.is_empty();
  const auto& ka = a.kind();
  const auto& kb = b.kind();
  if (ka.index() == kb.index()) {
    if (const auto* s = std::get_if<subdiff::Singleton>(&ka))
      return detail::close(s->g, std::get<subdiff::Singleton>(kb).g, tol);
    if (const auto* s = std::get_if<subdiff::Ball>(&ka)) {
      const auto& t = std::get<subdiff::Ball>(kb);
      return detail::close(s->center, t.center, tol) && std::abs(s->radius - t.radius) <= tol;
    }
    if (const auto* s = std::get_if<subdiff::Box>(&ka)) {
      const auto& t = std::get<subdiff::Box>(kb);
      return detail::close(s->lo, t.lo, tol) && detail::close(s->hi, t.hi, tol);
    }
  }
  if (!detail::close(a.min_norm_element(), b.min_norm_element(), tol)) return false;
  std::vector<Vector> probes;
  for (int i = 0; i < 20; ++i) probes.push_back(rng.unit_vector(a.dim()));
  for (const SubdiffSet* s : {&a, &b}) {
    if (const auto* c = std::get_if<subdiff::Cone>(&s->kind())) {
      for (const auto& r : c->rays) probes.push_back(r), probes.push_back(-r);
      for (const auto& l : c->lines) probes.push_back(l), probes.push_back(-l);
    }
  }
  for (const auto& d : probes)
    if (!detail::same_support(a.support(d), b.support(d), tol)) return false;
  return true;
}

}  // namespace proxcalc
