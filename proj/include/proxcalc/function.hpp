#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "proxcalc/errors.hpp"
#include "proxcalc/random.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

struct Node;

/// Immutable expression tree of a closed proper convex function on R^n.
///
/// Leaves are catalog atoms with closed-form evaluation, prox, conjugate and
/// subdifferential; inner nodes are the combinators tilt (f - <a,.>),
/// translate (f(. + t)), constant shift, added squared norm and Moreau
/// envelope. Values share structure through shared_ptr and are safe to use
/// from several threads.
class ConvexFunction {
 public:
  // Atoms.
  static ConvexFunction affine(Vector a, double c = 0.0);
  static ConvexFunction quadratic(Matrix q, Vector b, double c = 0.0);
  static ConvexFunction scaled_norm(double ell, Vector center);
  static ConvexFunction indicator_point(Vector p);
  static ConvexFunction indicator_ball(Vector center, double radius);
  static ConvexFunction indicator_box(Vector lo, Vector hi);
  static ConvexFunction indicator_halfspace(Vector a, double beta);
  static ConvexFunction support_ball(Vector center, double radius);
  static ConvexFunction support_box(Vector lo, Vector hi);

  // Combinators.
  static ConvexFunction tilt(ConvexFunction f, Vector a);
  static ConvexFunction translate(ConvexFunction f, Vector t);
  static ConvexFunction add_const(ConvexFunction f, double c);
  static ConvexFunction add_sq_norm(ConvexFunction f, double mu);
  static ConvexFunction envelope(ConvexFunction f, double lambda);

  // Shorthands.
  static ConvexFunction constant(int dim, double c) { return affine(Vector::Zero(dim), c); }
  /// 0.5 * ||x - center||^2
  static ConvexFunction half_sq_norm(Vector center);
  static ConvexFunction norm(int dim, double ell = 1.0) {
    return scaled_norm(ell, Vector::Zero(dim));
  }

  int dim() const { return dim_; }
  const Node& node() const { return *node_; }

 private:
  ConvexFunction(std::shared_ptr<const Node> node, int dim) : node_(std::move(node)), dim_(dim) {}
  template <class T>
  static ConvexFunction make(T payload, int dim);

  std::shared_ptr<const Node> node_;
  int dim_ = 0;
};

namespace atom {
/// <a, x> + c
struct Affine {
  Vector a;
  double c = 0.0;
};
/// 0.5 <Qx, x> + <b, x> + c, Q symmetric positive semidefinite.
struct Quadratic {
  Matrix q;
  Vector b;
  double c = 0.0;
};
/// ell * ||x - center||
struct ScaledNorm {
  double ell = 0.0;
  Vector center;
};
struct IndicatorPoint {
  Vector p;
};
struct IndicatorBall {
  Vector center;
  double radius = 1.0;
};
struct IndicatorBox {
  Vector lo, hi;
};
/// Indicator of { x : <a, x> <= beta }.
struct IndicatorHalfspace {
  Vector a;
  double beta = 0.0;
};
/// Support function of the ball B(center, radius): <center, x> + radius ||x||.
struct SupportBall {
  Vector center;
  double radius = 1.0;
};
/// Support function of the box [lo, hi]: sum_i max(lo_i x_i, hi_i x_i).
struct SupportBox {
  Vector lo, hi;
};
}  // namespace atom

namespace combinator {
/// f(x) - <a, x>
struct Tilt {
  ConvexFunction f;
  Vector a;
};
/// f(x + t)
struct Translate {
  ConvexFunction f;
  Vector t;
};
struct AddConst {
  ConvexFunction f;
  double c = 0.0;
};
/// f(x) + (mu / 2) ||x||^2, mu >= 0. The conjugate of an envelope has this form.
struct AddSqNorm {
  ConvexFunction f;
  double mu = 0.0;
};
/// Moreau envelope of index lambda > 0.
struct Envelope {
  ConvexFunction f;
  double lambda = 1.0;
};
}  // namespace combinator

struct Node {
  using Variant =
      std::variant<atom::Affine, atom::Quadratic, atom::ScaledNorm, atom::IndicatorPoint,
                   atom::IndicatorBall, atom::IndicatorBox, atom::IndicatorHalfspace,
                   atom::SupportBall, atom::SupportBox, combinator::Tilt, combinator::Translate,
                   combinator::AddConst, combinator::AddSqNorm, combinator::Envelope>;
  Variant v;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class Visitor>
decltype(auto) visit(const ConvexFunction& f, Visitor&& vis) {
  return std::visit(std::forward<Visitor>(vis), f.node().v);
}

namespace detail {

inline int checked_dim(const Vector& v, const char* what) {
  if (v.size() < 1 || v.size() > kMaxDim)
    throw InvalidArgument(std::string(what) + ": dimension must be in [1, " +
                          std::to_string(kMaxDim) + "]");
  require_finite(v, what);
  return static_cast<int>(v.size());
}

inline void require_finite_scalar(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

// Symmetry to 1e-10 relative, then PSD by 100 sampled Rayleigh quotients
// (tolerance -1e-10 scaled by ||Q||). A fixed seed keeps construction
// deterministic.
inline void require_psd(const Matrix& q) {
  if (q.rows() != q.cols()) throw InvalidArgument("Q must be square");
  if (!q.allFinite()) throw InvalidArgument("Q has non-finite entries");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidArgument("Q must be symmetric");
  Lcg64 rng(0x5eedULL);
  const int n = static_cast<int>(q.rows());
  for (int i = 0; i < 100; ++i) {
    const Vector u = rng.unit_vector(n);
    if (u.dot(q * u) < -1e-10 * scale) throw InvalidArgument("Q is not positive semidefinite");
  }
  for (int i = 0; i < n; ++i)
    if (q(i, i) < -1e-10 * scale) throw InvalidArgument("Q is not positive semidefinite");
}

inline void require_box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box bounds lo/hi differ in dimension");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw InvalidArgument("box requires lo <= hi componentwise");
}

}  // namespace detail

template <class T>
ConvexFunction ConvexFunction::make(T payload, int dim) {
  return ConvexFunction(std::make_shared<const Node>(Node{std::move(payload)}), dim);
}

inline ConvexFunction ConvexFunction::affine(Vector a, double c) {
  const int n = detail::checked_dim(a, "affine.a");
  detail::require_finite_scalar(c, "affine.c");
  return make(atom::Affine{std::move(a), c}, n);
}

inline ConvexFunction ConvexFunction::quadratic(Matrix q, Vector b, double c) {
  const int n = detail::checked_dim(b, "quadratic.b");
  if (q.rows() != n || q.cols() != n) throw DimensionMismatch("quadratic: Q must be n x n with n = dim(b)");
  detail::require_psd(q);
  detail::require_finite_scalar(c, "quadratic.c");
  // Store the exactly symmetric part.
  Matrix sym = 0.5 * (q + q.transpose());
  return make(atom::Quadratic{std::move(sym), std::move(b), c}, n);
}

inline ConvexFunction ConvexFunction::scaled_norm(double ell, Vector center) {
  const int n = detail::checked_dim(center, "scaled_norm.center");
  detail::require_finite_scalar(ell, "scaled_norm.ell");
  if (ell < 0.0) throw InvalidArgument("scaled_norm.ell must be >= 0");
  return make(atom::ScaledNorm{ell, std::move(center)}, n);
}

inline ConvexFunction ConvexFunction::indicator_point(Vector p) {
  const int n = detail::checked_dim(p, "indicator_point.p");
  return make(atom::IndicatorPoint{std::move(p)}, n);
}

inline ConvexFunction ConvexFunction::indicator_ball(Vector center, double radius) {
  const int n = detail::checked_dim(center, "indicator_ball.center");
  detail::require_finite_scalar(radius, "indicator_ball.radius");
  if (radius <= 0.0) throw InvalidArgument("indicator_ball.radius must be > 0");
  return make(atom::IndicatorBall{std::move(center), radius}, n);
}

inline ConvexFunction ConvexFunction::indicator_box(Vector lo, Vector hi) {
  const int n = detail::checked_dim(lo, "indicator_box.lo");
  detail::checked_dim(hi, "indicator_box.hi");
  detail::require_box(lo, hi);
  return make(atom::IndicatorBox{std::move(lo), std::move(hi)}, n);
}

inline ConvexFunction ConvexFunction::indicator_halfspace(Vector a, double beta) {
  const int n = detail::checked_dim(a, "indicator_halfspace.a");
  detail::require_finite_scalar(beta, "indicator_halfspace.beta");
  if (a.norm() == 0.0) throw InvalidArgument("indicator_halfspace.a must be nonzero");
  return make(atom::IndicatorHalfspace{std::move(a), beta}, n);
}

inline ConvexFunction ConvexFunction::support_ball(Vector center, double radius) {
  const int n = detail::checked_dim(center, "support_ball.center");
  detail::require_finite_scalar(radius, "support_ball.radius");
  if (radius <= 0.0) throw InvalidArgument("support_ball.radius must be > 0");
  return make(atom::SupportBall{std::move(center), radius}, n);
}

inline ConvexFunction ConvexFunction::support_box(Vector lo, Vector hi) {
  const int n = detail::checked_dim(lo, "support_box.lo");
  detail::checked_dim(hi, "support_box.hi");
  detail::require_box(lo, hi);
  return make(atom::SupportBox{std::move(lo), std::move(hi)}, n);
}

inline ConvexFunction ConvexFunction::tilt(ConvexFunction f, Vector a) {
  require_finite(a, "tilt.a");
  require_dim(a, f.dim(), "tilt.a");
  const int n = f.dim();
  return make(combinator::Tilt{std::move(f), std::move(a)}, n);
}

inline ConvexFunction ConvexFunction::translate(ConvexFunction f, Vector t) {
  require_finite(t, "translate.t");
  require_dim(t, f.dim(), "translate.t");
  const int n = f.dim();
  return make(combinator::Translate{std::move(f), std::move(t)}, n);
}

inline ConvexFunction ConvexFunction::add_const(ConvexFunction f, double c) {
  detail::require_finite_scalar(c, "add_const.c");
  const int n = f.dim();
  return make(combinator::AddConst{std::move(f), c}, n);
}

inline ConvexFunction ConvexFunction::add_sq_norm(ConvexFunction f, double mu) {
  detail::require_finite_scalar(mu, "add_sq_norm.mu");
  if (mu < 0.0) throw InvalidArgument("add_sq_norm.mu must be >= 0");
  const int n = f.dim();
  return make(combinator::AddSqNorm{std::move(f), mu}, n);
}

inline ConvexFunction ConvexFunction::envelope(ConvexFunction f, double lambda) {
  detail::require_finite_scalar(lambda, "envelope.lambda");
  if (lambda <= 0.0) throw InvalidArgument("envelope.lambda must be > 0");
  const int n = f.dim();
  return make(combinator::Envelope{std::move(f), lambda}, n);
}

inline ConvexFunction ConvexFunction::half_sq_norm(Vector center) {
  const int n = detail::checked_dim(center, "half_sq_norm.center");
  const double c = 0.5 * center.squaredNorm();
  Vector b = -center;
  return quadratic(Matrix::Identity(n, n), std::move(b), c);
}

/// Deepest chain of nested Envelope nodes.
inline int envelope_depth(const ConvexFunction& f) {
  return visit(f, Overloaded{
                      [](const combinator::Envelope& e) { return 1 + envelope_depth(e.f); },
                      [](const combinator::Tilt& c) { return envelope_depth(c.f); },
                      [](const combinator::Translate& c) { return envelope_depth(c.f); },
                      [](const combinator::AddConst& c) { return envelope_depth(c.f); },
                      [](const combinator::AddSqNorm& c) { return envelope_depth(c.f); },
                      [](const auto&) { return 0; },
                  });
}

}  // namespace proxcalc
