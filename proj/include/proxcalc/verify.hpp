#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "proxcalc/catalog.hpp"
#include "proxcalc/determination.hpp"
#include "proxcalc/errors.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/prox.hpp"
#include "proxcalc/random.hpp"
#include "proxcalc/report.hpp"
#include "proxcalc/subdiff.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

/// Default tolerance of checks built on closed-form prox and conjugates.
inline constexpr double kClosedFormTol = 1e-8;
/// Default tolerance of identities that involve sampled infima.
inline constexpr double kSampledInfimumTol = 1e-6;

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double pos(double v) { return v > 0.0 ? v : 0.0; }

inline Vector concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

inline void require_same_dim(const ConvexFunction& f, const ConvexFunction& g, const char* what) {
  if (f.dim() != g.dim())
    throw DimensionMismatch(std::string(what) + ": f has dimension " + std::to_string(f.dim()) +
                            ", g has dimension " + std::to_string(g.dim()));
}

inline void require_samples(const std::vector<Vector>& samples, int dim, const char* what) {
  if (samples.empty()) throw InvalidArgument(std::string(what) + ": empty sample set");
  for (const auto& x : samples) {
    require_dim(x, dim, what);
    require_finite(x, what);
  }
}

inline void finish(CheckReport& r) {
  r.status = implication_status(r.hypothesis_residual, r.conclusion_residual, r.tolerance);
  if (r.status == CheckStatus::counterexample) r.theorem_consistent = false;
}

}  // namespace detail

/// "||prox_f(x) - x0|| <= ||prox_g(x) - x0|| for all x implies
/// g - g(x0) <= f - f(x0)". The hypothesis is sampled on `samples`; the
/// conclusion on the samples and their prox images.
inline CheckReport check_comparison(const ConvexFunction& f, const ConvexFunction& g,
                                    const Vector& x0, const std::vector<Vector>& samples,
                                    double tol = kClosedFormTol) {
  detail::require_same_dim(f, g, "check_comparison");
  require_dim(x0, f.dim(), "check_comparison: anchor");
  detail::require_samples(samples, f.dim(), "check_comparison: sample");
  detail::require_in_domain(f, x0, "f");
  detail::require_in_domain(g, x0, "g");
  CheckReport r;
  r.name = "comparison";
  r.tolerance = tol;
  const auto hyp = [&](const Vector& x) {
    return (prox_closed_form(f, 1.0, x) - x0).norm() - (prox_closed_form(g, 1.0, x) - x0).norm();
  };
  const std::vector<Vector> pts = detail::with_prox_images(f, g, samples);
  for (const auto& x : pts) {
    const double h = hyp(x);
    if (h > tol) r.add_witness(x, "hypothesis: ||prox_f-x0|| exceeds ||prox_g-x0|| by " + format_real(h));
    r.hypothesis_residual = std::max(r.hypothesis_residual, detail::pos(h));
  }
  const double f0 = evaluate(f, x0).value(), g0 = evaluate(g, x0).value();
  const bool hypothesis_holds = r.hypothesis_residual <= tol;
  Vector worst_at = x0;
  for (const auto& x : pts) {
    const ExtReal fx = evaluate(f, x);
    if (fx.is_infinite()) continue;
    const ExtReal gx = evaluate(g, x);
    const double c = gx.is_infinite() ? detail::kInf : (gx.raw() - g0) - (fx.raw() - f0);
    if (hypothesis_holds && c > tol)
      r.add_witness(x, "conclusion: g-g(x0) exceeds f-f(x0) by " + format_real(c));
    if (c > r.conclusion_residual) r.conclusion_residual = c, worst_at = x;
  }
  if (hypothesis_holds && r.conclusion_residual > tol) detail::refute_hypothesis(r, hyp, x0, worst_at);
  detail::finish(r);
  return r;
}

/// The function whose gradient is compared: f itself when it is a Moreau
/// envelope, Envelope(f, lambda) otherwise.
inline ConvexFunction smooth_version(const ConvexFunction& f, double lambda) {
  if (std::holds_alternative<combinator::Envelope>(f.node().v)) return f;
  return ConvexFunction::envelope(f, lambda);
}

/// "||grad F|| <= ||grad G|| implies F - inf F <= G - inf G" for the smooth
/// versions F, G of f and g. Infima are estimated by sampling plus
/// proximal-point refinement; an unbounded estimate is precondition_violated.
inline CheckReport check_gradient_comparison(const ConvexFunction& f, const ConvexFunction& g,
                                             double lambda, const std::vector<Vector>& samples,
                                             double tol = kClosedFormTol,
                                             const SamplingOptions& sampling = {}) {
  detail::require_same_dim(f, g, "check_gradient_comparison");
  detail::require_samples(samples, f.dim(), "check_gradient_comparison: sample");
  const ConvexFunction F = smooth_version(f, lambda);
  const ConvexFunction G = smooth_version(g, lambda);
  CheckReport r;
  r.name = "gradient_comparison";
  r.tolerance = tol;
  Lcg64 rng(sampling.seed);
  const InfimumEstimate inf_f = estimate_infimum(F, rng, sampling.radius, sampling.count);
  const InfimumEstimate inf_g = estimate_infimum(G, rng, sampling.radius, sampling.count);
  r.notes.push_back("sampled inf F: " + (inf_f.bounded ? format_real(inf_f.value) : "unbounded") +
                    ", sampled inf G: " + (inf_g.bounded ? format_real(inf_g.value) : "unbounded") +
                    " (radius " + format_real(sampling.radius) + ")");
  const auto hyp = [&](const Vector& x) {
    return minimal_selection(F, x).norm() - minimal_selection(G, x).norm();
  };
  for (const auto& x : samples) {
    const double h = hyp(x);
    if (h > tol) r.add_witness(x, "hypothesis: ||grad F|| exceeds ||grad G|| by " + format_real(h));
    r.hypothesis_residual = std::max(r.hypothesis_residual, detail::pos(h));
  }
  if (!inf_f.bounded || !inf_g.bounded) {
    r.status = CheckStatus::precondition_violated;
    return r;
  }
  const bool hypothesis_holds = r.hypothesis_residual <= tol;
  Vector worst_at = inf_f.argmin;
  for (const auto& x : samples) {
    const double c = (evaluate(F, x).value() - inf_f.value) - (evaluate(G, x).value() - inf_g.value);
    if (hypothesis_holds && c > tol)
      r.add_witness(x, "conclusion: F-inf F exceeds G-inf G by " + format_real(c));
    if (c > r.conclusion_residual) r.conclusion_residual = c, worst_at = x;
  }
  if (hypothesis_holds && r.conclusion_residual > tol)
    detail::refute_hypothesis(r, hyp, Vector::Zero(f.dim()), worst_at);
  detail::finish(r);
  return r;
}

/// "||x|| - ell <= ||prox_g(x)|| implies g - g(0) <= ell ||.||, and g is
/// constant when ell = 0".
inline CheckReport check_norm_lower_bound(const ConvexFunction& g, double ell,
                                          const std::vector<Vector>& samples,
                                          double tol = kClosedFormTol) {
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw InvalidArgument("check_norm_lower_bound: ell must be >= 0");
  detail::require_samples(samples, g.dim(), "check_norm_lower_bound: sample");
  const Vector origin = Vector::Zero(g.dim());
  detail::require_in_domain(g, origin, "g");
  CheckReport r;
  r.name = "norm_lower_bound";
  r.tolerance = tol;
  const auto hyp = [&](const Vector& x) { return x.norm() - ell - prox_closed_form(g, 1.0, x).norm(); };
  const auto pts = detail::with_prox_images(g, g, samples);
  for (const auto& x : pts) {
    const double h = hyp(x);
    if (h > tol) r.add_witness(x, "hypothesis: ||x||-ell exceeds ||prox_g(x)|| by " + format_real(h));
    r.hypothesis_residual = std::max(r.hypothesis_residual, detail::pos(h));
  }
  const bool hypothesis_holds = r.hypothesis_residual <= tol;
  const double g0 = evaluate(g, origin).value();
  double lo = g0, hi = g0;
  Vector worst_at = origin;
  for (const auto& x : pts) {
    const ExtReal gx = evaluate(g, x);
    if (gx.is_infinite()) {
      if (ell == 0.0) hi = detail::kInf;
      continue;
    }
    lo = std::min(lo, gx.raw());
    hi = std::max(hi, gx.raw());
    const double c = gx.raw() - g0 - ell * x.norm();
    if (hypothesis_holds && c > tol)
      r.add_witness(x, "conclusion: g-g(0) exceeds ell||x|| by " + format_real(c));
    if (c > r.conclusion_residual) r.conclusion_residual = c, worst_at = x;
  }
  if (ell == 0.0) {
    r.notes.push_back("sampled spread of g: " + format_real(hi - lo));
    r.conclusion_residual = std::max(r.conclusion_residual, hi - lo);
  }
  if (hypothesis_holds && r.conclusion_residual > tol) detail::refute_hypothesis(r, hyp, origin, worst_at);
  detail::finish(r);
  return r;
}

/// max |f(u) - f(v)| / ||u - v|| over distinct pairs of points; +inf when f
/// is infinite at some point. The reported pair then contains that point.
inline double sampled_lipschitz_constant(const ConvexFunction& f, const std::vector<Vector>& points,
                                         std::size_t* worst_u = nullptr,
                                         std::size_t* worst_v = nullptr) {
  std::vector<ExtReal> vals;
  vals.reserve(points.size());
  for (const auto& p : points) vals.push_back(evaluate(f, p));
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = (points[i] - points[j]).norm();
      if (d <= 0.0) continue;
      double q = 0.0;
      if (vals[i].is_infinite() || vals[j].is_infinite())
        q = detail::kInf;
      else
        q = std::abs(vals[i].raw() - vals[j].raw()) / d;
      if (q > best) {
        best = q;
        if (worst_u) *worst_u = i;
        if (worst_v) *worst_v = j;
      }
    }
  }
  return best;
}

/// Both directions of "f is ell-Lipschitz iff ||x|| - ell <= ||prox_f(x+y) - y||
/// for all x, y". hypothesis_residual is (L - ell)+ for the sampled Lipschitz
/// constant L over samples_x and samples_y together; conclusion_residual is the
/// worst violation of the inequality over samples_x x samples_y. Witnesses of
/// the inequality are the concatenation (x, y).
inline CheckReport check_lipschitz(const ConvexFunction& f, double ell,
                                   const std::vector<Vector>& samples_x,
                                   const std::vector<Vector>& samples_y,
                                   double tol = kClosedFormTol) {
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw InvalidArgument("check_lipschitz: ell must be >= 0");
  detail::require_samples(samples_x, f.dim(), "check_lipschitz: x sample");
  detail::require_samples(samples_y, f.dim(), "check_lipschitz: y sample");
  CheckReport r;
  r.name = "lipschitz";
  r.tolerance = tol;

  std::vector<Vector> pts = samples_x;
  pts.insert(pts.end(), samples_y.begin(), samples_y.end());
  std::size_t iu = 0, iv = 0;
  const double lhat = sampled_lipschitz_constant(f, pts, &iu, &iv);
  r.hypothesis_residual = detail::pos(lhat - ell);
  r.notes.push_back("sampled Lipschitz constant: " + format_real(lhat));

  double worst = 0.0;
  Vector wx, wy;
  for (const auto& y : samples_y) {
    for (const auto& x : samples_x) {
      const double v = x.norm() - ell - (prox_closed_form(f, 1.0, x + y) - y).norm();
      if (v > worst) worst = v, wx = x, wy = y;
    }
  }
  r.conclusion_residual = worst;
  const bool lipschitz = r.hypothesis_residual <= tol;
  const bool inequality = r.conclusion_residual <= tol;
  if (!inequality)
    r.add_witness(detail::concat(wx, wy), "x=" + format_point(wx) + " y=" + format_point(wy) +
                                              " violates the inequality by " + format_real(worst));
  if (!lipschitz)
    r.add_witness(detail::concat(pts[iu], pts[iv]),
                  "u=" + format_point(pts[iu]) + " v=" + format_point(pts[iv]) + " slope " +
                      format_real(lhat));
  if (lipschitz && inequality) {
    r.status = CheckStatus::verified;
  } else {
    r.status = CheckStatus::counterexample;
    r.theorem_consistent = lipschitz == inequality;
    if (!r.theorem_consistent) r.notes.push_back("the two directions disagree on the samples");
  }
  return r;
}

enum class ItemState { holds, fails, skipped };

inline const char* to_string(ItemState s) {
  switch (s) {
    case ItemState::holds: return "holds";
    case ItemState::fails: return "fails";
    case ItemState::skipped: return "skipped";
  }
  return "unknown";
}

struct EquivalenceItem {
  std::string label;
  ItemState state = ItemState::skipped;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct EquivalenceReport {
  CheckReport report;
  /// (i) equal prox norms, (ii) f = g - inf f* + inf g*, (iii) equal minimal
  /// selections, (iv) equal subdifferentials, (v) equal prox.
  std::array<EquivalenceItem, 5> items;
  std::optional<double> inf_fstar, inf_gstar;
  bool precondition_holds = true;
};

struct EquivalenceOptions {
  double tol = kClosedFormTol;
  /// Tolerance of item (ii), which uses sampled infima.
  double identity_tol = kSampledInfimumTol;
  SamplingOptions sampling{};
};

/// Evaluates the five determination statements for f and g on the samples and
/// their prox images. The statements are equivalent when f* and g* are
/// bounded below (checked by sampling); a mixed truth pattern on such a pair is
/// a counterexample to the equivalence.
inline EquivalenceReport check_equivalences(const ConvexFunction& f, const ConvexFunction& g,
                                            const std::vector<Vector>& samples,
                                            const EquivalenceOptions& opt = {}) {
  detail::require_same_dim(f, g, "check_equivalences");
  detail::require_samples(samples, f.dim(), "check_equivalences: sample");
  EquivalenceReport out;
  CheckReport& r = out.report;
  r.name = "equivalences";
  r.tolerance = opt.tol;
  const int n = f.dim();
  const Vector origin = Vector::Zero(n);

  Lcg64 rng(opt.sampling.seed);
  for (int k = 0; k < 2; ++k) {
    const ConvexFunction* h = k == 0 ? &f : &g;
    auto& slot = k == 0 ? out.inf_fstar : out.inf_gstar;
    const char* name = k == 0 ? "f*" : "g*";
    if (const auto est = conjugate_infimum(*h, rng, opt.sampling.radius, opt.sampling.count)) {
      if (est->bounded) slot = est->value;
      r.notes.push_back(std::string("sampled inf ") + name + ": " +
                        (est->bounded ? format_real(est->value) : "unbounded") + " (radius " +
                        format_real(opt.sampling.radius) + ")");
    } else {
      const ExtReal h0 = evaluate(*h, origin);
      if (h0.is_finite()) slot = -h0.raw();
      r.notes.push_back(std::string("inf ") + name + " from -" + (k == 0 ? "f" : "g") +
                        "(0) (no closed-form conjugate)");
    }
  }
  out.precondition_holds = out.inf_fstar.has_value() && out.inf_gstar.has_value();

  const auto measure = [&](const std::vector<Vector>& pts) {
    std::array<double, 5> res{};
    for (const auto& x : pts) {
      const Vector pf = prox_closed_form(f, 1.0, x), pg = prox_closed_form(g, 1.0, x);
      res[0] = std::max(res[0], std::abs(pf.norm() - pg.norm()));
      res[4] = std::max(res[4], (pf - pg).norm());
      if (out.precondition_holds) {
        const ExtReal fx = evaluate(f, x), gx = evaluate(g, x);
        if (fx.is_finite() != gx.is_finite())
          res[1] = detail::kInf;
        else if (fx.is_finite())
          res[1] = std::max(res[1], std::abs(fx.raw() - gx.raw() + *out.inf_fstar - *out.inf_gstar));
      }
      const SubdiffSet sf = subdifferential(f, x), sg = subdifferential(g, x);
      if (sf.is_empty() && sg.is_empty()) continue;
      if (sf.is_empty() != sg.is_empty()) {
        res[2] = res[3] = detail::kInf;
        continue;
      }
      res[2] = std::max(res[2], (sf.min_norm_element() - sg.min_norm_element()).norm());
      if (!same_set(sf, sg, opt.tol, rng)) res[3] = 1.0;
    }
    return res;
  };
  const auto tolerance = [&](std::size_t k) { return k == 1 ? opt.identity_tol : opt.tol; };
  const auto mixed = [&](const std::array<double, 5>& res) {
    int h = 0, fl = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      if (k == 1 && !out.precondition_holds) continue;
      (res[k] <= tolerance(k) ? h : fl) += 1;
    }
    return h > 0 && fl > 0;
  };

  std::vector<Vector> pts = detail::with_prox_images(f, g, samples);
  std::array<double, 5> res = measure(pts);
  if (out.precondition_holds && mixed(res)) {
    // Items that held on the samples may still fail elsewhere: widen the probe set.
    Vector far = origin;
    for (const auto& x : samples)
      if (x.norm() > far.norm()) far = x;
    const std::vector<Vector> extra = detail::refinement_points(origin, far);
    const std::array<double, 5> wide = measure(extra);
    for (std::size_t k = 0; k < 5; ++k) res[k] = std::max(res[k], wide[k]);
    r.notes.push_back("mixed pattern on the samples; items re-measured on " + std::to_string(extra.size()) +
                      " extra points");
  }

  static constexpr const char* labels[] = {"(i) equal prox norms", "(ii) f = g - inf f* + inf g*",
                                           "(iii) equal minimal selections",
                                           "(iv) equal subdifferentials", "(v) equal prox"};
  int holds = 0, fails = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    auto& item = out.items[k];
    item.label = labels[k];
    item.tolerance = tolerance(k);
    item.residual = res[k];
    if (k == 1 && !out.precondition_holds) {
      item.state = ItemState::skipped;
    } else {
      item.state = res[k] <= item.tolerance ? ItemState::holds : ItemState::fails;
      (item.state == ItemState::holds ? holds : fails) += 1;
    }
    r.notes.push_back(item.label + ": " + to_string(item.state) + " residual " +
                      format_real(item.residual) + " tolerance " + format_real(item.tolerance));
  }
  r.hypothesis_residual = res[0];
  r.conclusion_residual = *std::max_element(res.begin() + 1, res.end());

  if (!out.precondition_holds) {
    r.status = CheckStatus::precondition_violated;
  } else if (fails == 0) {
    r.status = CheckStatus::verified;
  } else if (holds == 0) {
    r.status = CheckStatus::hypothesis_fails;
  } else {
    r.status = CheckStatus::counterexample;
    r.theorem_consistent = false;
    r.add_witness(samples.front(), "mixed truth pattern on a pair with bounded conjugates");
  }
  return out;
}

/// For an indicator atom C containing 0: checks ||prox_{sigma_C}(x)|| = d_C(x)
/// (forward), then whether f satisfies the same identity and, if so, that f
/// differs from sigma_C by a constant (backward).
inline CheckReport check_support_distance(const ConvexFunction& f, const ConvexFunction& c,
                                          const std::vector<Vector>& samples,
                                          double tol = kClosedFormTol,
                                          const SamplingOptions& sampling = {}) {
  detail::require_same_dim(f, c, "check_support_distance");
  detail::require_samples(samples, f.dim(), "check_support_distance: sample");
  const bool indicator = visit(c, Overloaded{
                                      [](const atom::IndicatorPoint&) { return true; },
                                      [](const atom::IndicatorBall&) { return true; },
                                      [](const atom::IndicatorBox&) { return true; },
                                      [](const atom::IndicatorHalfspace&) { return true; },
                                      [](const auto&) { return false; },
                                  });
  if (!indicator) throw InvalidArgument("check_support_distance: C must be an indicator atom");
  if (evaluate(c, Vector::Zero(c.dim())).is_infinite())
    throw OriginNotInC("check_support_distance: 0 is not in C");
  const ConvexFunction sigma = conjugate_closed_form(c);

  CheckReport r;
  r.name = "support_distance";
  r.tolerance = tol;
  double forward = 0.0;
  for (const auto& x : samples) {
    const double dist = (x - prox_closed_form(c, 1.0, x)).norm();
    const double fw = std::abs(prox_closed_form(sigma, 1.0, x).norm() - dist);
    if (fw > tol) r.add_witness(x, "||prox_sigma(x)|| differs from d_C(x) by " + format_real(fw));
    forward = std::max(forward, fw);
    const double h = std::abs(prox_closed_form(f, 1.0, x).norm() - dist);
    if (h > tol) r.add_witness(x, "||prox_f(x)|| differs from d_C(x) by " + format_real(h));
    r.hypothesis_residual = std::max(r.hypothesis_residual, h);
  }
  r.notes.push_back("forward residual: " + format_real(forward));
  r.conclusion_residual = forward;
  if (forward > tol) {
    r.status = CheckStatus::counterexample;
    r.theorem_consistent = false;
    return r;
  }
  if (r.hypothesis_residual > tol) {
    r.status = CheckStatus::hypothesis_fails;
    return r;
  }
  const CheckReport back = determine_from_origin_norm(f, sigma, samples, tol, sampling);
  r.conclusion_residual = std::max(forward, back.conclusion_residual);
  r.status = back.status;
  r.theorem_consistent = back.theorem_consistent;
  for (const auto& w : back.witnesses) r.add_witness(w.point, w.details);
  for (const auto& note : back.notes) r.notes.push_back(note);
  return r;
}

/// max over the samples of the decomposition residual, as a report.
inline CheckReport check_moreau_decomposition(const ConvexFunction& f,
                                              const std::vector<Vector>& samples,
                                              double tol = kClosedFormTol) {
  detail::require_samples(samples, f.dim(), "check_moreau_decomposition: sample");
  CheckReport r;
  r.name = "moreau_decomposition";
  r.tolerance = tol;
  if (!has_closed_form_conjugate(f)) {
    r.status = CheckStatus::precondition_violated;
    r.notes.push_back("no closed-form conjugate");
    return r;
  }
  for (const auto& x : samples) {
    const double d = moreau_decomposition_residual(f, x);
    if (d > tol) r.add_witness(x, "residual " + format_real(d));
    r.conclusion_residual = std::max(r.conclusion_residual, d);
  }
  detail::finish(r);
  return r;
}

struct BatteryConfig {
  Vector anchor;
  double lambda = 1.0;
  double ell = 1.0;
  int samples = 200;
  double radius = 5.0;
  std::uint64_t seed = 7;
  double tol = kClosedFormTol;
};

/// Every check applicable to the pair (f, g), in a fixed order. Checks whose
/// preconditions throw are reported as precondition_violated.
inline std::vector<CheckReport> run_battery(const ConvexFunction& f, const ConvexFunction& g,
                                            const BatteryConfig& cfg) {
  detail::require_same_dim(f, g, "run_battery");
  const int n = f.dim();
  const Vector anchor = cfg.anchor.size() == 0 ? Vector(Vector::Zero(n)) : cfg.anchor;
  require_dim(anchor, n, "anchor");
  Lcg64 rng(cfg.seed);
  const std::vector<Vector> xs = sample_ball(rng, n, cfg.radius, cfg.samples);
  const std::vector<Vector> ys = sample_ball(rng, n, cfg.radius, std::max(1, cfg.samples / 10));
  SamplingOptions sampling;
  sampling.seed = rng.next();

  std::vector<CheckReport> out;
  const auto guarded = [&](const std::string& name, auto&& run) {
    try {
      out.push_back(run());
      out.back().name = name;
    } catch (const AnchorOutsideDomain& e) {
      CheckReport r;
      r.name = name;
      r.tolerance = cfg.tol;
      r.status = CheckStatus::precondition_violated;
      r.notes.push_back(e.what());
      out.push_back(std::move(r));
    }
  };
  guarded("moreau_decomposition_f", [&] { return check_moreau_decomposition(f, xs, cfg.tol); });
  guarded("moreau_decomposition_g", [&] { return check_moreau_decomposition(g, xs, cfg.tol); });
  guarded("comparison_f_g", [&] { return check_comparison(f, g, anchor, xs, cfg.tol); });
  guarded("comparison_g_f", [&] { return check_comparison(g, f, anchor, xs, cfg.tol); });
  guarded("gradient_comparison_f_g",
          [&] { return check_gradient_comparison(f, g, cfg.lambda, xs, cfg.tol, sampling); });
  guarded("norm_lower_bound_f", [&] { return check_norm_lower_bound(f, cfg.ell, xs, cfg.tol); });
  guarded("norm_lower_bound_g", [&] { return check_norm_lower_bound(g, cfg.ell, xs, cfg.tol); });
  guarded("lipschitz_f", [&] { return check_lipschitz(f, cfg.ell, xs, ys, cfg.tol); });
  guarded("lipschitz_g", [&] { return check_lipschitz(g, cfg.ell, xs, ys, cfg.tol); });
  guarded("determine_from_norm", [&] { return determine_from_norm(f, g, anchor, xs, cfg.tol); });
  guarded("equivalences", [&] {
    EquivalenceOptions opt;
    opt.tol = cfg.tol;
    opt.sampling = sampling;
    return check_equivalences(f, g, xs, opt).report;
  });
  return out;
}

}  // namespace proxcalc
