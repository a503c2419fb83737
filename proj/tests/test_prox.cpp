#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "proxcalc/proxcalc.hpp"

using namespace proxcalc;
using fixture::v1;
using fixture::v2;

namespace {

const ConvexFunction kNorm2 = ConvexFunction::norm(2);
const ConvexFunction kHalfSq2 = ConvexFunction::quadratic(Matrix::Identity(2, 2), v2(0, 0));

Vector grid_argmin_1d(const std::function<double(double)>& phi, double lo, double hi, int count) {
  double best = phi(lo), arg = lo;
  for (int i = 1; i < count; ++i) {
    const double y = lo + (hi - lo) * i / (count - 1);
    if (const double v = phi(y); v < best) best = v, arg = y;
  }
  return v1(arg);
}

}  // namespace

TEST(Prox, QuadraticHalvesThePoint) {
  const Vector ref = grid_argmin_1d([](double y) { return 0.5 * y * y + 0.5 * (2 - y) * (2 - y); }, -4, 4, 80001);
  const ProxResult r = prox(kHalfSq2, 1, v2(2, 0));
  EXPECT_NEAR(r.minimizer[0], ref[0], 1e-4);
  EXPECT_NEAR(r.minimizer[1], 0.0, 1e-15);
  EXPECT_NEAR(r.envelope_value, 1.0, 1e-12);
  EXPECT_EQ(r.method, ProxMethod::closed_form);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Prox, PointIndicatorGoesToThePoint) {
  const ProxResult r = prox(ConvexFunction::indicator_point(v2(0, 0)), 1, v2(3, 4));
  EXPECT_EQ(r.minimizer, v2(0, 0));
  EXPECT_DOUBLE_EQ(r.envelope_value, 12.5);
}

TEST(Prox, TranslatedNorm) {
  const auto f = ConvexFunction::translate(kNorm2, v2(1, 0));
  const Vector y = prox(f, 1, v2(2, 0)).minimizer;
  EXPECT_TRUE(y.isApprox(v2(1, 0), 1e-14));
  const Vector ref = oracle::brute_prox(f, 1, v2(2, 0));
  EXPECT_LT((y - ref).norm(), 1e-6);
}

TEST(Prox, RejectsBadArguments) {
  EXPECT_THROW((void)prox(kNorm2, 0.0, v2(1, 1)), InvalidArgument);
  EXPECT_THROW((void)prox(kNorm2, 1.0, v1(1)), DimensionMismatch);
  SolverBudget b;
  b.max_iters = 0;
  EXPECT_THROW((void)prox(kNorm2, 1.0, v2(1, 1), b), InvalidArgument);
}

TEST(Prox, EnvelopeValueMatchesObjectiveAtMinimizer) {
  for (int n : {1, 2, 3}) {
    Lcg64 rng(10 + n);
    for (const auto& [name, f, inside] : fixture::catalog(n)) {
      for (auto route : {ProxRoute::closed_form, ProxRoute::numerical}) {
        const Vector x = rng.in_ball(Vector::Zero(n), 4);
        const double lambda = rng.uniform(0.3, 2);
        const ProxResult r = prox(f, lambda, x, {}, route);
        const double obj = evaluate(f, r.minimizer).value() + (x - r.minimizer).squaredNorm() / (2 * lambda);
        EXPECT_NEAR(r.envelope_value, obj, 1e-9 * std::max(1.0, std::abs(obj))) << name;
      }
    }
  }
}

TEST(NumericalProx, NormMatchesClosedForm) {
  const ProxResult r = numerical_prox(kNorm2, 1, v2(3, 4));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.method, ProxMethod::numerical);
  EXPECT_LT((r.minimizer - v2(2.4, 3.2)).norm(), 1e-6);
}

TEST(NumericalProx, ShiftedQuadratic) {
  const auto f = ConvexFunction::add_const(ConvexFunction::quadratic(Matrix::Identity(1, 1), v1(0)), 7);
  const Vector ref =
      grid_argmin_1d([](double y) { return 0.5 * y * y + 7 + (3 - y) * (3 - y) / 4; }, -4, 4, 80001);
  const ProxResult r = numerical_prox(f, 2, v1(3));
  EXPECT_NEAR(r.minimizer[0], ref[0], 1e-4);
  EXPECT_NEAR(r.minimizer[0], 1.0, 1e-6);
}

TEST(NumericalProx, FixedPointStopsImmediately) {
  const Vector c = v2(0.4, -0.7);
  const Matrix q = fixture::spd(2, 11);
  const Vector b = v2(0.5, -1.0);
  const std::vector<std::pair<ConvexFunction, Vector>> cases = {
      {ConvexFunction::scaled_norm(1.5, c), c},
      {ConvexFunction::half_sq_norm(c), c},
      {ConvexFunction::envelope(ConvexFunction::scaled_norm(1.5, c), 0.6), c},
      {ConvexFunction::support_box(v2(-1, -0.5), v2(1, 2)), v2(0, 0)},
      {ConvexFunction::quadratic(q, b), Vector(-q.ldlt().solve(b))},
  };
  for (const auto& [f, xmin] : cases) {
    ASSERT_TRUE(subdifferential(f, xmin).contains(Vector::Zero(2), 1e-12));
    const ProxResult r = numerical_prox(f, 1, xmin);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 2);
    EXPECT_LT((r.minimizer - xmin).norm(), 1e-12);
  }
}

TEST(NumericalProx, AgreesWithClosedFormOnCatalog) {
  for (int n : {1, 2, 3}) {
    Lcg64 rng(30 + n);
    for (const auto& [name, f, inside] : fixture::catalog(n)) {
      for (int i = 0; i < 20; ++i) {
        const Vector x = rng.in_ball(Vector::Zero(n), 5);
        const double lambda = rng.uniform(0.2, 3);
        const ProxResult r = numerical_prox(f, lambda, x);
        EXPECT_TRUE(r.converged) << name;
        EXPECT_LT((r.minimizer - prox_closed_form(f, lambda, x)).norm(), 1e-6) << name << " n=" << n;
      }
    }
  }
}

TEST(NumericalProx, TinyBudgetReportsNonConvergence) {
  SolverBudget b;
  b.max_iters = 1;
  b.tol = 1e-14;
  const ProxResult r = numerical_prox(ConvexFunction::envelope(kNorm2, 0.5), 1, v2(3, 4), b);
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_THROW((void)moreau_envelope(ConvexFunction::envelope(kNorm2, 0.5), 1, v2(3, 4), b,
                                     ProxRoute::numerical),
               SolverDidNotConverge);
}

TEST(Prox, DeepEnvelopeNestingWarns) {
  ConvexFunction f = kNorm2;
  for (int i = 0; i < 2; ++i) f = ConvexFunction::envelope(f, 1);
  EXPECT_TRUE(prox(f, 1, v2(1, 1)).warnings.empty());
  f = ConvexFunction::envelope(f, 1);
  const auto w = prox(f, 1, v2(1, 1)).warnings;
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("depth 3"), std::string::npos);
}

TEST(MoreauEnvelope, Examples) {
  EXPECT_NEAR(moreau_envelope(ConvexFunction::indicator_ball(v2(0, 0), 1), 1, v2(3, 4)), 8.0, 1e-12);
  EXPECT_NEAR(moreau_envelope(kHalfSq2, 1, v2(2, 0)), 1.0, 1e-12);
  const auto g = ConvexFunction::norm(2, 1.5);
  Lcg64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vector x = rng.in_ball(Vector::Zero(2), 4);
    EXPECT_NEAR(moreau_envelope(ConvexFunction::add_const(g, 2.5), 0.7, x), moreau_envelope(g, 0.7, x) + 2.5,
                1e-12);
  }
}

TEST(MoreauEnvelope, MatchesBruteForceOnCatalog) {
  for (int n : {1, 2}) {
    Lcg64 rng(60 + n);
    for (const auto& [name, f, inside] : fixture::catalog(n)) {
      if (has_restricted_domain(f)) continue;
      const Vector x = rng.in_ball(Vector::Zero(n), 4);
      EXPECT_NEAR(moreau_envelope(f, 0.8, x), oracle::brute_envelope(f, 0.8, x), 1e-8) << name;
    }
  }
}

TEST(EnvelopeGradient, Examples) {
  Lcg64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Vector x = rng.in_ball(Vector::Zero(2), 5);
    EXPECT_TRUE(envelope_gradient(ConvexFunction::indicator_point(v2(0, 0)), 1, x).isApprox(x, 1e-15));
  }
  EXPECT_TRUE(envelope_gradient(kNorm2, 1, v2(3, 4)).isApprox(v2(0.6, 0.8), 1e-14));
}

TEST(EnvelopeGradient, MatchesFiniteDifferencesOnCatalog) {
  for (int n : {1, 2, 3}) {
    Lcg64 rng(70 + n);
    for (const auto& [name, f, inside] : fixture::catalog(n)) {
      for (double lambda : {0.5, 1.5}) {
        for (int i = 0; i < 10; ++i) {
          const Vector x = rng.in_ball(Vector::Zero(n), 4);
          const Vector g = envelope_gradient(f, lambda, x);
          const Vector fd = oracle::fd_gradient([&](const Vector& z) { return moreau_envelope(f, lambda, z); }, x);
          EXPECT_LE((g - fd).norm(), 1e-4 * std::max(1.0, fd.norm())) << name;
        }
      }
    }
  }
}

TEST(Decomposition, Examples) {
  EXPECT_LT(moreau_decomposition_residual(ConvexFunction::indicator_ball(v2(0, 0), 1), v2(3, 4)), 1e-15);
  EXPECT_TRUE(prox(ConvexFunction::indicator_ball(v2(0, 0), 1), 1, v2(3, 4)).minimizer.isApprox(v2(0.6, 0.8), 1e-15));
  EXPECT_EQ(moreau_decomposition_residual(ConvexFunction::indicator_point(v2(0, 0)), v2(-2, 7)), 0.0);
  EXPECT_EQ(moreau_decomposition_residual(kHalfSq2, v2(2, 0)), 0.0);
}

TEST(Decomposition, HoldsOnCatalogWithBothSolvers) {
  for (int n : {1, 2, 3}) {
    Lcg64 rng(80 + n);
    for (const auto& [name, f, inside] : fixture::catalog(n)) {
      if (!has_closed_form_conjugate(f)) {
        EXPECT_THROW((void)moreau_decomposition_residual(f, Vector::Zero(n)), UnsupportedConjugate);
        continue;
      }
      for (int i = 0; i < 30; ++i) {
        const Vector x = rng.in_ball(Vector::Zero(n), 5);
        EXPECT_LE(moreau_decomposition_residual(f, x), 1e-8) << name;
        EXPECT_LE(moreau_decomposition_residual(f, x, {}, ProxRoute::numerical), 1e-4) << name;
      }
    }
  }
}
