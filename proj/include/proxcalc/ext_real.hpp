#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

#include "proxcalc/errors.hpp"

namespace proxcalc {

// A value in R u {+inf}. -inf and NaN are rejected at construction, so every
// ExtReal a proper convex function can produce is representable and nothing
// else is.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw ExtendedArithmeticError("NaN is not an extended real");
    if (v == -std::numeric_limits<double>::infinity())
      throw ExtendedArithmeticError("-inf is not allowed for proper functions");
  }

  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_infinite() const { return !is_finite(); }

  /// Raw double; +inf when infinite.
  double raw() const { return value_; }

  /// The finite value. Throws when infinite.
  double value() const {
    if (!is_finite()) throw ExtendedArithmeticError("value() of +inf");
    return value_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtReal(a.value_ + b.value_);
  }
  friend ExtReal operator+(ExtReal a, double b) { return a + ExtReal(b); }
  friend ExtReal operator+(double a, ExtReal b) { return ExtReal(a) + b; }

  // Subtracting a finite real is always fine; subtracting +inf is not.
  friend ExtReal operator-(ExtReal a, ExtReal b) {
    if (b.is_infinite()) throw ExtendedArithmeticError("subtraction of +inf");
    if (a.is_infinite()) return infinity();
    return ExtReal(a.value_ - b.value_);
  }
  friend ExtReal operator-(ExtReal a, double b) { return a - ExtReal(b); }

  friend bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    return a.value_ <=> b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtReal x) {
    if (x.is_infinite()) return os << "+inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace proxcalc
