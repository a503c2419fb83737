#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "proxcalc/catalog.hpp"
#include "proxcalc/conjugation.hpp"
#include "proxcalc/csv.hpp"
#include "proxcalc/errors.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/parallel.hpp"
#include "proxcalc/prox.hpp"
#include "proxcalc/random.hpp"
#include "proxcalc/report.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

/// Black-box prox map x -> prox_f(x). Copies share one call counter.
class ProxOracle {
 public:
  using Fn = std::function<Vector(const Vector&)>;

  ProxOracle(int dim, Fn fn)
      : dim_(dim), fn_(std::move(fn)), calls_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("ProxOracle: bad dimension");
    if (!fn_) throw InvalidArgument("ProxOracle: empty query function");
  }

  int dim() const { return dim_; }
  std::uint64_t call_count() const { return calls_->load(); }

  Vector operator()(const Vector& x) const {
    require_dim(x, dim_, "oracle input");
    calls_->fetch_add(1, std::memory_order_relaxed);
    Vector y = fn_(x);
    if (y.size() != dim_)
      throw DimensionMismatch("oracle output has dimension " + std::to_string(y.size()) +
                              ", expected " + std::to_string(dim_));
    return y;
  }

 private:
  int dim_;
  Fn fn_;
  std::shared_ptr<std::atomic<std::uint64_t>> calls_;
};

/// Oracle backed by the catalog prox of f at lambda = 1.
inline ProxOracle catalog_oracle(const ConvexFunction& f) {
  return ProxOracle(f.dim(), [f](const Vector& x) { return prox_closed_form(f, 1.0, x); });
}

/// Oracle backed by sampled (input, output) pairs. Inputs that form a full
/// regular lattice are interpolated multilinearly, with queries outside the
/// lattice clamped onto it; any other input set answers with the output of
/// the nearest input.
inline ProxOracle table_oracle(std::vector<Vector> inputs, std::vector<Vector> outputs) {
  if (inputs.empty() || inputs.size() != outputs.size())
    throw InvalidArgument("oracle table: need matching, nonempty input and output lists");
  const int dim = static_cast<int>(inputs.front().size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    require_dim(inputs[i], dim, "oracle table: input");
    require_dim(outputs[i], dim, "oracle table: output");
  }
  if (auto lattice = dim <= SampleGrid::kMaxDim ? infer_lattice(inputs) : std::nullopt) {
    std::vector<Vector> values(lattice->grid.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) values[lattice->index[i]] = outputs[i];
    return ProxOracle(dim, [grid = lattice->grid, values = std::move(values)](const Vector& x) {
      const int n = grid.dim();
      std::vector<int> base(static_cast<std::size_t>(n));
      std::vector<double> frac(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a) {
        const int last = grid.counts()[static_cast<std::size_t>(a)] - 1;
        const double s = std::clamp((x[a] - grid.lo()[a]) / grid.spacing(a), 0.0, double(last));
        const int k = std::min(static_cast<int>(std::floor(s)), last - 1);
        base[static_cast<std::size_t>(a)] = k;
        frac[static_cast<std::size_t>(a)] = s - k;
      }
      Vector out = Vector::Zero(n);
      std::vector<int> idx(static_cast<std::size_t>(n));
      for (int corner = 0; corner < (1 << n); ++corner) {
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
          const bool up = (corner >> a) & 1;
          const double t = frac[static_cast<std::size_t>(a)];
          w *= up ? t : 1.0 - t;
          idx[static_cast<std::size_t>(a)] = base[static_cast<std::size_t>(a)] + (up ? 1 : 0);
        }
        if (w != 0.0) out += w * values[grid.flat_index(idx)];
      }
      return out;
    });
  }
  return ProxOracle(dim, [inputs = std::move(inputs), outputs = std::move(outputs)](const Vector& x) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const double d = (inputs[i] - x).squaredNorm();
      if (d < bd) bd = d, best = i;
    }
    return outputs[best];
  });
}

/// Oracle table CSV: each row holds the input point then the output point,
/// 2n columns in total.
inline ProxOracle read_oracle_table_csv(std::istream& in) {
  const auto rows = csv::read_numeric_rows(in, "oracle table");
  if (rows.empty()) throw ParseError("oracle table: no rows");
  const std::size_t cols = rows.front().size();
  if (cols < 2 || cols % 2 != 0 || cols / 2 > static_cast<std::size_t>(kMaxDim))
    throw ParseError("oracle table: expected an even number of columns (input then output)");
  const auto n = static_cast<Eigen::Index>(cols / 2);
  std::vector<Vector> inputs, outputs;
  for (const auto& r : rows) {
    Vector p(n), q(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p[i] = r[static_cast<std::size_t>(i)];
      q[i] = r[static_cast<std::size_t>(n + i)];
    }
    require_finite(p, "oracle table: input");
    require_finite(q, "oracle table: output");
    inputs.push_back(std::move(p));
    outputs.push_back(std::move(q));
  }
  return table_oracle(std::move(inputs), std::move(outputs));
}

/// Gradient of the tilted envelope (f* - <x0, .>)_1 at x: prox_f(x + x0) - x0.
inline Vector tilde_gradient(const ProxOracle& oracle, const Vector& x0, const Vector& x) {
  require_dim(x0, oracle.dim(), "tilde_gradient: anchor");
  require_dim(x, oracle.dim(), "tilde_gradient: point");
  return oracle(x + x0) - x0;
}

struct IntegrationOptions {
  /// Simpson panels per path segment; even and >= 8.
  int steps = 64;
  /// Upper bound for the automatic doubling of `steps`.
  int max_steps = 1024;
  /// Ray and staircase integrals must agree within this at the probe points.
  double path_tol = 1e-4;
  int path_probes = 8;
  /// Random points and pairs for the field pre-checks.
  int check_points = 64;
  double monotone_tol = 1e-8;
  double firm_tol = 1e-8;
  double symmetry_tol = 1e-3;
  /// Central-difference step of the cross-partial symmetry check.
  double fd_step = 1e-6;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;

  void validate() const {
    if (steps < 8 || steps % 2 != 0) throw InvalidArgument("quadrature steps must be even and >= 8");
    if (max_steps < steps) throw InvalidArgument("max quadrature steps below the initial steps");
    if (!(path_tol > 0.0) || !(fd_step > 0.0) || check_points < 1 || path_probes < 0)
      throw InvalidArgument("invalid integration options");
  }
};

/// Diagnostics of the gradient field x -> prox(x + x0) - x0.
struct FieldChecks {
  /// max over sampled pairs of -<G(x) - G(y), x - y>, clamped at 0.
  double monotonicity_residual = 0.0;
  /// max over sampled pairs of ||G(x) - G(y)||^2 - <G(x) - G(y), x - y>, clamped at 0.
  double firm_nonexpansive_residual = 0.0;
  /// max over sampled points and axis pairs of |d_i G_j - d_j G_i|.
  double symmetry_residual = 0.0;
};

struct TildeTable {
  ValueTable table;
  /// Shift applied to the raw ray integrals, so that min(table) = -f(x0).
  double pinned_constant = 0.0;
  bool pinned = false;
  bool min_on_boundary = false;
  int steps = 0;
  /// Largest ray-vs-staircase gap at the probe points for the final `steps`.
  double path_residual = 0.0;
  FieldChecks checks;
};

namespace detail {

template <class Integrand>
double simpson(Integrand&& g, int steps) {
  const double h = 1.0 / steps;
  double s = g(0.0) + g(1.0);
  for (int k = 1; k < steps; ++k) s += (k % 2 ? 4.0 : 2.0) * g(k * h);
  return s * h / 3.0;
}

inline double ray_integral(const ProxOracle& oracle, const Vector& x0, const Vector& x, int steps) {
  return simpson([&](double t) { return tilde_gradient(oracle, x0, t * x).dot(x); }, steps);
}

// Axis-aligned path 0 -> x_0 e_0 -> x_0 e_0 + x_1 e_1 -> ... -> x.
inline double staircase_integral(const ProxOracle& oracle, const Vector& x0, const Vector& x,
                                 int steps) {
  Vector corner = Vector::Zero(x.size());
  double total = 0.0;
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    if (x[a] == 0.0) continue;
    Vector d = Vector::Zero(x.size());
    d[a] = x[a];
    total += simpson([&](double t) { return tilde_gradient(oracle, x0, corner + t * d).dot(d); },
                     steps);
    corner[a] = x[a];
  }
  return total;
}

}  // namespace detail

/// Samples monotonicity, firm nonexpansiveness and Jacobian symmetry of the
/// field G over the box of `grid`.
inline FieldChecks check_field(const ProxOracle& oracle, const Vector& x0, const SampleGrid& grid,
                               const IntegrationOptions& opt) {
  const int n = grid.dim();
  Lcg64 rng(opt.seed);
  FieldChecks c;
  for (int k = 0; k < opt.check_points; ++k) {
    const Vector x = rng.in_box(grid.lo(), grid.hi());
    const Vector y = rng.in_box(grid.lo(), grid.hi());
    const Vector dg = tilde_gradient(oracle, x0, x) - tilde_gradient(oracle, x0, y);
    const double inner = dg.dot(x - y);
    c.monotonicity_residual = std::max(c.monotonicity_residual, -inner);
    c.firm_nonexpansive_residual = std::max(c.firm_nonexpansive_residual, dg.squaredNorm() - inner);
  }
  if (n >= 2) {
    const double h = opt.fd_step;
    for (int k = 0; k < opt.check_points; ++k) {
      const Vector x = rng.in_box(grid.lo(), grid.hi());
      Matrix jac(n, n);
      for (int i = 0; i < n; ++i) {
        Vector e = Vector::Zero(n);
        e[i] = h;
        jac.col(i) =
            (tilde_gradient(oracle, x0, x + e) - tilde_gradient(oracle, x0, x - e)) / (2.0 * h);
      }
      c.symmetry_residual = std::max(c.symmetry_residual, (jac - jac.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return c;
}

/// Tabulates f~(x) - f~(0) = int_0^1 <G(t x), x> dt on every lattice point by
/// composite Simpson along the ray from the origin, where
/// f~ = (f* - <x0, .>)_1 and G = grad f~. With f_at_x0 the table is shifted so
/// that its minimum equals -f(x0). Throws NonConservativeField when the field
/// fails its pre-checks.
inline TildeTable integrate_tilde(const ProxOracle& oracle, const Vector& x0, const SampleGrid& grid,
                                  std::optional<double> f_at_x0 = std::nullopt,
                                  const IntegrationOptions& opt = {}) {
  opt.validate();
  if (grid.dim() != oracle.dim())
    throw DimensionMismatch("integrate_tilde: grid dimension " + std::to_string(grid.dim()) +
                            " vs oracle dimension " + std::to_string(oracle.dim()));
  require_dim(x0, oracle.dim(), "integrate_tilde: anchor");
  require_finite(x0, "integrate_tilde: anchor");

  const FieldChecks checks = check_field(oracle, x0, grid, opt);
  if (checks.monotonicity_residual > opt.monotone_tol)
    throw NonConservativeField("field is not monotone: residual " +
                               format_real(checks.monotonicity_residual));
  if (checks.firm_nonexpansive_residual > opt.firm_tol)
    throw NonConservativeField("field is not firmly nonexpansive: residual " +
                               format_real(checks.firm_nonexpansive_residual));
  if (checks.symmetry_residual > opt.symmetry_tol)
    throw NonConservativeField("field Jacobian is not symmetric: residual " +
                               format_real(checks.symmetry_residual));

  std::vector<std::size_t> probes;
  if (grid.dim() >= 2) {
    Lcg64 rng(opt.seed ^ 0x5a5a5a5aULL);
    for (int k = 0; k < opt.path_probes; ++k)
      probes.push_back(static_cast<std::size_t>(rng.uniform() * static_cast<double>(grid.size())));
  }
  int steps = opt.steps;
  double path_residual = 0.0;
  for (;;) {
    path_residual = 0.0;
    for (std::size_t i : probes) {
      const Vector x = grid.point(i);
      path_residual = std::max(path_residual,
                               std::abs(detail::ray_integral(oracle, x0, x, steps) -
                                        detail::staircase_integral(oracle, x0, x, steps)));
    }
    if (path_residual <= opt.path_tol || steps * 2 > opt.max_steps) break;
    steps *= 2;
  }

  std::vector<double> raw(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    raw[i] = detail::ray_integral(oracle, x0, grid.point(i), steps);
  });

  TildeTable out{ValueTable(grid, std::vector<ExtReal>(raw.begin(), raw.end())), 0.0, false, false,
                 steps, path_residual, checks};
  const std::size_t imin = out.table.argmin();
  out.min_on_boundary = grid.on_boundary(imin);
  if (f_at_x0) {
    out.pinned = true;
    out.pinned_constant = -*f_at_x0 - raw[imin];
    out.table = out.table.shifted(out.pinned_constant);
  }
  return out;
}

struct ReconstructionTask {
  ProxOracle oracle;
  Vector x0;
  std::optional<double> f_at_x0;
  SampleGrid tilde_grid;
  std::vector<Vector> query_points;
  IntegrationOptions integration{};
};

struct RecoveredValue {
  Vector point;
  double value = 0.0;
  /// The conjugation maximizer hit the table boundary: the value is a
  /// grid-truncated lower estimate (e.g. outside dom f).
  bool boundary_argmax = false;
};

struct ReconstructionReport {
  std::vector<RecoveredValue> recovered;
  double pinned_constant = 0.0;
  /// "absolute" when f(x0) was supplied, otherwise values are f(q) - f(x0).
  std::string convention;
  double gradient_symmetry_residual = 0.0;
  double monotonicity_residual = 0.0;
  double firm_nonexpansive_residual = 0.0;
  double path_residual = 0.0;
  int boundary_argmax_warnings = 0;
  bool tilde_min_on_boundary = false;
  int quadrature_steps = 0;
  std::uint64_t oracle_calls = 0;
};

/// Recovers f(q) = (f~)*(q - x0) - ||q - x0||^2 / 2 from the prox oracle by
/// tabulating f~ and conjugating the table. Without f(x0) the table is pinned
/// as if f(x0) = 0, so the values are f(q) - f(x0).
inline ReconstructionReport reconstruct(const ReconstructionTask& task) {
  const int n = task.oracle.dim();
  for (const auto& q : task.query_points) require_dim(q, n, "reconstruct: query");
  const std::uint64_t calls_before = task.oracle.call_count();
  const TildeTable tilde =
      integrate_tilde(task.oracle, task.x0, task.tilde_grid, task.f_at_x0.value_or(0.0), task.integration);

  ReconstructionReport r;
  r.pinned_constant = tilde.pinned_constant;
  r.convention = task.f_at_x0 ? "absolute" : "relative to f(x0)";
  r.gradient_symmetry_residual = tilde.checks.symmetry_residual;
  r.monotonicity_residual = tilde.checks.monotonicity_residual;
  r.firm_nonexpansive_residual = tilde.checks.firm_nonexpansive_residual;
  r.path_residual = tilde.path_residual;
  r.tilde_min_on_boundary = tilde.min_on_boundary;
  r.quadrature_steps = tilde.steps;
  r.recovered.resize(task.query_points.size());
  parallel_for(
      task.query_points.size(),
      [&](std::size_t i) {
        const Vector& q = task.query_points[i];
        const Vector x = q - task.x0;
        const ConjugateValue c = numerical_conjugate_detail(tilde.table, x);
        r.recovered[i] = {q, c.value - 0.5 * x.squaredNorm(), c.on_boundary};
      },
      1);
  for (const auto& v : r.recovered) r.boundary_argmax_warnings += v.boundary_argmax ? 1 : 0;
  r.oracle_calls = task.oracle.call_count() - calls_before;
  return r;
}

/// Infimum estimate of h: the best of `count` uniform samples in the ball of
/// the given radius (plus the origin), refined by proximal-point steps
/// y <- prox_{t h}(y) with t doubling. Declared unbounded once the running
/// value drops below `divergence`.
struct InfimumEstimate {
  double value = 0.0;
  bool bounded = true;
  Vector argmin;
};

inline InfimumEstimate estimate_infimum(const ConvexFunction& h, Lcg64& rng, double radius = 50.0,
                                        int count = 10000, double divergence = -1e6) {
  const int n = h.dim();
  Vector best = Vector::Zero(n);
  ExtReal bv = evaluate(h, best);
  for (int i = 0; i < count; ++i) {
    const Vector p = rng.in_ball(Vector::Zero(n), radius);
    const ExtReal v = evaluate(h, p);
    if (v < bv) bv = v, best = p;
  }
  Vector y = best;
  double t = 1.0;
  for (int k = 0; k < 80; ++k, t *= 2.0) {
    const Vector next = prox_closed_form(h, t, y);
    const ExtReal v = evaluate(h, next);
    if (v < bv) bv = v, best = next;
    if (bv.is_finite() && bv.raw() < divergence) return {bv.raw(), false, best};
    const double move = (next - y).norm();
    y = next;
    if (move <= 1e-13 * std::max(1.0, y.norm()) && k >= 3) break;
  }
  if (bv.is_infinite()) throw AllInfinite("estimate_infimum: no finite value found");
  return {bv.raw(), true, best};
}

namespace detail {

inline void require_in_domain(const ConvexFunction& f, const Vector& x0, const char* which) {
  if (evaluate(f, x0).is_infinite())
    throw AnchorOutsideDomain(std::string(which) + "(x0) = +inf at x0 = " + format_point(x0));
}

// Samples plus the prox images of both functions, which lie in the domains.
inline std::vector<Vector> with_prox_images(const ConvexFunction& f, const ConvexFunction& g,
                                            const std::vector<Vector>& samples) {
  std::vector<Vector> pts = samples;
  for (const auto& x : samples) {
    pts.push_back(prox_closed_form(f, 1.0, x));
    pts.push_back(prox_closed_form(g, 1.0, x));
  }
  return pts;
}

inline constexpr int kRefineCount = 20000;
inline constexpr std::uint64_t kRefineSeed = 0x5eed0f5eedULL;

/// Extra probe points for a hypothesis that held on the samples while the
/// conclusion failed at `at`: the center plus uniform points of a ball around
/// `center` that reaches well past `at`.
inline std::vector<Vector> refinement_points(const Vector& center, const Vector& at) {
  Lcg64 rng(kRefineSeed);
  std::vector<Vector> pts{center};
  const double radius = 2.0 * (at - center).norm() + 2.0;
  for (int i = 0; i < kRefineCount; ++i) pts.push_back(rng.in_ball(center, radius));
  return pts;
}

/// Looks for a hypothesis violation h(x) > tol near the failing conclusion
/// point. On success the report switches to hypothesis_fails evidence.
inline bool refute_hypothesis(CheckReport& r, const std::function<double(const Vector&)>& h,
                              const Vector& center, const Vector& at) {
  double worst = 0.0;
  Vector arg;
  for (const auto& x : refinement_points(center, at)) {
    const double v = h(x);
    if (v > worst) worst = v, arg = x;
  }
  if (worst <= r.tolerance) return false;
  r.hypothesis_residual = worst;
  r.witnesses.clear();
  r.add_witness(arg, "hypothesis violated by " + format_real(worst) + " (refinement search)");
  r.notes.push_back("hypothesis held on the samples but fails at " + format_point(arg) +
                    ", found after the conclusion failed at " + format_point(at));
  return true;
}

// max |(f(x) - f(x0)) - (g(x) - g(x0))| over points where either side is
// finite; a point where exactly one side is +inf counts as +inf.
inline double constant_gap(const ConvexFunction& f, const ConvexFunction& g, const Vector& x0,
                           const std::vector<Vector>& pts, CheckReport& r, Vector* worst_at = nullptr) {
  const double f0 = evaluate(f, x0).value(), g0 = evaluate(g, x0).value();
  double worst = 0.0;
  for (const auto& x : pts) {
    const ExtReal fx = evaluate(f, x), gx = evaluate(g, x);
    if (fx.is_infinite() && gx.is_infinite()) continue;
    const double gap = fx.is_infinite() || gx.is_infinite()
                           ? std::numeric_limits<double>::infinity()
                           : std::abs((fx.raw() - f0) - (gx.raw() - g0));
    if (gap > worst) {
      worst = gap;
      if (worst_at) *worst_at = x;
    }
    if (gap > r.tolerance)
      r.add_witness(x, "f-f(x0)=" + format_real((fx - f0).raw()) + " g-g(x0)=" + format_real((gx - g0).raw()));
  }
  return worst;
}

}  // namespace detail

/// Checks "||prox_f - x0|| = ||prox_g - x0|| on the samples implies
/// f - f(x0) = g - g(x0)". The conclusion is tested on the samples and on
/// their prox images under f and g.
inline CheckReport determine_from_norm(const ConvexFunction& f, const ConvexFunction& g,
                                       const Vector& x0, const std::vector<Vector>& samples,
                                       double tol = 1e-8) {
  if (f.dim() != g.dim()) throw DimensionMismatch("determine_from_norm: f and g dimensions differ");
  require_dim(x0, f.dim(), "determine_from_norm: anchor");
  detail::require_in_domain(f, x0, "f");
  detail::require_in_domain(g, x0, "g");
  CheckReport r;
  r.name = "determine_from_norm";
  r.tolerance = tol;
  for (const auto& x : samples) require_dim(x, f.dim(), "determine_from_norm: sample");
  const auto hyp = [&](const Vector& x) {
    return std::abs((prox_closed_form(f, 1.0, x) - x0).norm() - (prox_closed_form(g, 1.0, x) - x0).norm());
  };
  const std::vector<Vector> pts = detail::with_prox_images(f, g, samples);
  for (const auto& x : pts) r.hypothesis_residual = std::max(r.hypothesis_residual, hyp(x));
  if (r.hypothesis_residual > tol) {
    r.status = CheckStatus::hypothesis_fails;
    return r;
  }
  Vector worst_at = x0;
  r.conclusion_residual = detail::constant_gap(f, g, x0, pts, r, &worst_at);
  if (r.conclusion_residual > tol) detail::refute_hypothesis(r, hyp, x0, worst_at);
  r.status = implication_status(r.hypothesis_residual, r.conclusion_residual, tol);
  if (r.status == CheckStatus::counterexample) r.theorem_consistent = false;
  return r;
}

/// Lower bound of h* estimated by sampling, or nullopt when h has no
/// closed-form conjugate.
inline std::optional<InfimumEstimate> conjugate_infimum(const ConvexFunction& h, Lcg64& rng,
                                                        double radius, int count) {
  if (!has_closed_form_conjugate(h)) return std::nullopt;
  return estimate_infimum(conjugate_closed_form(h), rng, radius, count);
}

struct SamplingOptions {
  /// Ball radius and sample count of the sampled conjugate infima.
  double radius = 50.0;
  int count = 10000;
  std::uint64_t seed = 0x1234abcdULL;
};

/// Anchor-free variant at x0 = 0: "||prox_f|| = ||prox_g|| implies f - g is
/// constant", valid when f* and g* are bounded below. A pair failing that
/// precondition (sampled) is reported as precondition_violated together with
/// the measured residuals.
inline CheckReport determine_from_origin_norm(const ConvexFunction& f, const ConvexFunction& g,
                                              const std::vector<Vector>& samples,
                                              double tol = 1e-8, const SamplingOptions& sampling = {}) {
  if (f.dim() != g.dim()) throw DimensionMismatch("determine_from_origin_norm: f and g dimensions differ");
  CheckReport r;
  r.name = "determine_from_origin_norm";
  r.tolerance = tol;
  const Vector origin = Vector::Zero(f.dim());
  for (const auto& x : samples) require_dim(x, f.dim(), "determine_from_origin_norm: sample");
  const auto hyp = [&](const Vector& x) {
    return std::abs(prox_closed_form(f, 1.0, x).norm() - prox_closed_form(g, 1.0, x).norm());
  };
  const std::vector<Vector> pts = detail::with_prox_images(f, g, samples);
  for (const auto& x : pts) r.hypothesis_residual = std::max(r.hypothesis_residual, hyp(x));
  Lcg64 rng(sampling.seed);
  bool bounded = true;
  for (int k = 0; k < 2; ++k) {
    const ConvexFunction* h = k == 0 ? &f : &g;
    const auto inf = conjugate_infimum(*h, rng, sampling.radius, sampling.count);
    const bool ok = (!inf || inf->bounded) && evaluate(*h, origin).is_finite();
    bounded = bounded && ok;
    r.notes.push_back(std::string(k == 0 ? "f*" : "g*") + " sampled infimum: " +
                      (inf ? (inf->bounded ? format_real(inf->value) : std::string("unbounded"))
                           : std::string(ok ? "bounded (h(0) finite)" : "unbounded (h(0) = +inf)")));
  }
  if (!bounded) {
    r.status = CheckStatus::precondition_violated;
    // Report whether f - g is constant anyway, referenced to any common finite point.
    std::optional<Vector> ref;
    for (const auto& x : pts)
      if (evaluate(f, x).is_finite() && evaluate(g, x).is_finite()) {
        ref = x;
        break;
      }
    if (ref) {
      r.conclusion_residual = detail::constant_gap(f, g, *ref, pts, r);
    } else {
      r.conclusion_residual = std::numeric_limits<double>::infinity();
      r.notes.push_back("dom f and dom g share no sampled point");
    }
    return r;
  }
  if (r.hypothesis_residual > tol) {
    r.status = CheckStatus::hypothesis_fails;
    return r;
  }
  Vector worst_at = origin;
  r.conclusion_residual = detail::constant_gap(f, g, origin, pts, r, &worst_at);
  if (r.conclusion_residual > tol) detail::refute_hypothesis(r, hyp, origin, worst_at);
  r.status = implication_status(r.hypothesis_residual, r.conclusion_residual, tol);
  if (r.status == CheckStatus::counterexample) r.theorem_consistent = false;
  return r;
}

}  // namespace proxcalc
