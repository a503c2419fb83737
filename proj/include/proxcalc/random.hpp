#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "proxcalc/vector.hpp"

namespace proxcalc {

// 64-bit linear congruential generator, x <- a*x + c mod 2^64, with Knuth's
// MMIX constants. Doubles take the top 53 bits. Reports are reproducible from
// the seed alone.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one draw per call, the sine branch is dropped).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector unit_vector(int dim) {
    Vector v(dim);
    double n = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      n = v.norm();
    } while (n < 1e-12);
    return v / n;
  }

  /// Uniform in the ball of the given radius about center.
  Vector in_ball(const Vector& center, double radius) {
    const int dim = static_cast<int>(center.size());
    const double r = radius * std::pow(uniform(), 1.0 / dim);
    return center + r * unit_vector(dim);
  }

  Vector in_box(const Vector& lo, const Vector& hi) {
    Vector v(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
    return v;
  }

 private:
  std::uint64_t state_;
};

inline std::vector<Vector> sample_ball(Lcg64& rng, int dim, double radius, int count) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  const Vector origin = Vector::Zero(dim);
  for (int i = 0; i < count; ++i) out.push_back(rng.in_ball(origin, radius));
  return out;
}

}  // namespace proxcalc
