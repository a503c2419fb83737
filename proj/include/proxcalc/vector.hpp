#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Dense>

#include "proxcalc/errors.hpp"

namespace proxcalc {

/// Points of R^n. All library entry points reject non-finite coordinates.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Catalog and prox dimension cap.
inline constexpr int kMaxDim = 16;

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + " has non-finite coordinates");
}

inline void require_dim(const Vector& v, int dim, const char* what) {
  if (v.size() != dim)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim) +
                            ", got " + std::to_string(v.size()));
}

/// Fixed "%.12g" rendering used by every report and CLI printout.
inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

/// "(x1, x2, ...)"
inline std::string format_point(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_real(v[i]);
  }
  return s + ")";
}

inline Vector constant_vector(int dim, double value) { return Vector::Constant(dim, value); }

}  // namespace proxcalc
