#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "proxcalc/catalog.hpp"
#include "proxcalc/conjugation.hpp"
#include "proxcalc/csv.hpp"
#include "proxcalc/determination.hpp"
#include "proxcalc/errors.hpp"
#include "proxcalc/prox.hpp"
#include "proxcalc/report.hpp"
#include "proxcalc/spec_io.hpp"
#include "proxcalc/verify.hpp"

namespace proxcalc::cli {

enum class Format { text, csv };

struct RunConfig {
  std::string command;
  std::string f_spec, g_spec;
  double lambda = 1.0;
  std::string x;
  std::string anchor;
  std::optional<double> f_at_anchor;
  std::string grid;
  std::string queries;
  std::string oracle_table;
  int samples = 200;
  double radius = 5.0;
  std::uint64_t seed = 7;
  std::optional<double> tol;
  double ell = 1.0;
  int steps = 64;
  bool numerical = false;
  std::string out;
  Format format = Format::text;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// "a,b,c" -> vector.
inline Vector parse_point(const std::string& text, const std::string& what) {
  const auto fields = csv::split(csv::trim(text), ',');
  if (fields.empty() || (fields.size() == 1 && fields[0].empty()))
    throw ParseError(what + ": empty point");
  Vector v(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = csv::parse_real(fields[i], what + " coordinate " + std::to_string(i + 1));
  require_finite(v, what.c_str());
  return v;
}

/// Point of dimension dim; a single value is repeated on every axis.
inline Vector parse_point(const std::string& text, int dim, const std::string& what) {
  Vector v = parse_point(text, what);
  if (v.size() == 1 && dim > 1) return Vector::Constant(dim, v[0]);
  if (v.size() != dim)
    throw DimensionMismatch(what + " has " + std::to_string(v.size()) + " coordinates, expected " +
                            std::to_string(dim));
  return v;
}

/// "lo:hi:count" per axis, ';' between axes.
inline SampleGrid parse_grid(const std::string& text) {
  const auto axes = csv::split(csv::trim(text), ';');
  const auto n = static_cast<Eigen::Index>(axes.size());
  Vector lo(n), hi(n);
  std::vector<int> counts;
  for (Eigen::Index a = 0; a < n; ++a) {
    const std::string where = "grid axis " + std::to_string(a + 1);
    const auto parts = csv::split(axes[static_cast<std::size_t>(a)], ':');
    if (parts.size() != 3) throw ParseError(where + ": expected lo:hi:count");
    lo[a] = csv::parse_real(parts[0], where + " lo");
    hi[a] = csv::parse_real(parts[1], where + " hi");
    const double c = csv::parse_real(parts[2], where + " count");
    if (c != static_cast<int>(c)) throw ParseError(where + ": count must be an integer");
    counts.push_back(static_cast<int>(c));
  }
  return SampleGrid(lo, hi, counts);
}

namespace detail {

inline std::vector<Vector> read_points_file(const std::string& path, int dim, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + what + " file '" + path + "'");
  auto pts = csv::read_points(in, what + " '" + path + "'");
  for (const auto& p : pts) require_dim(p, dim, what.c_str());
  return pts;
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

inline void write_prox(std::ostream& os, const ProxResult& r, Format fmt) {
  if (fmt == Format::csv) {
    os << "minimizer,envelope_value,method,iterations,residual,converged\n";
    std::string coords;
    for (Eigen::Index i = 0; i < r.minimizer.size(); ++i) coords += (i ? ";" : "") + format_real(r.minimizer[i]);
    os << coords << ',' << format_real(r.envelope_value) << ',' << to_string(r.method) << ','
       << r.iterations << ',' << format_real(r.residual) << ',' << (r.converged ? "yes" : "no") << '\n';
    return;
  }
  os << "prox: " << format_point(r.minimizer) << '\n';
  os << "envelope_value: " << format_real(r.envelope_value) << '\n';
  os << "method: " << to_string(r.method) << '\n';
  os << "iterations: " << r.iterations << '\n';
  os << "residual: " << format_real(r.residual) << '\n';
  os << "converged: " << (r.converged ? "yes" : "no") << '\n';
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
}

inline void write_reports(std::ostream& os, const std::vector<CheckReport>& reports, Format fmt) {
  if (fmt == Format::csv) {
    write_csv(os, reports);
    return;
  }
  for (const auto& r : reports) write_text(os, r);
}

inline int report_exit(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.theorem_consistent) return kExitFailure;
  return kExitOk;
}

inline int cmd_prox(const RunConfig& c, std::ostream& os) {
  require(!c.f_spec.empty() && !c.x.empty(), "prox needs --f and --x");
  const ConvexFunction f = load_function_spec(c.f_spec);
  const Vector x = parse_point(c.x, f.dim(), "--x");
  SolverBudget budget;
  if (c.tol) budget.tol = *c.tol;
  const ProxResult r = prox(f, c.lambda, x, budget, c.numerical ? ProxRoute::numerical : ProxRoute::automatic);
  write_prox(os, r, c.format);
  return r.converged ? kExitOk : kExitFailure;
}

inline int cmd_envelope(const RunConfig& c, std::ostream& os) {
  require(!c.f_spec.empty() && !c.x.empty(), "envelope needs --f and --x");
  const ConvexFunction f = load_function_spec(c.f_spec);
  const Vector x = parse_point(c.x, f.dim(), "--x");
  SolverBudget budget;
  if (c.tol) budget.tol = *c.tol;
  const ProxResult r = prox(f, c.lambda, x, budget, c.numerical ? ProxRoute::numerical : ProxRoute::automatic);
  const Vector grad = (x - r.minimizer) / c.lambda;
  if (c.format == Format::csv) {
    os << "envelope_value,gradient,converged\n";
    std::string coords;
    for (Eigen::Index i = 0; i < grad.size(); ++i) coords += (i ? ";" : "") + format_real(grad[i]);
    os << format_real(r.envelope_value) << ',' << coords << ',' << (r.converged ? "yes" : "no") << '\n';
  } else {
    os << "envelope_value: " << format_real(r.envelope_value) << '\n';
    os << "gradient: " << format_point(grad) << '\n';
    os << "converged: " << (r.converged ? "yes" : "no") << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  }
  return r.converged ? kExitOk : kExitFailure;
}

inline int cmd_conjugate(const RunConfig& c, std::ostream& os, std::ostream& err) {
  require(!c.f_spec.empty(), "conjugate needs --f");
  const ConvexFunction f = load_function_spec(c.f_spec);
  std::vector<Vector> queries;
  if (!c.x.empty()) queries.push_back(parse_point(c.x, f.dim(), "--x"));
  if (!c.queries.empty()) {
    auto more = read_points_file(c.queries, f.dim(), "queries");
    queries.insert(queries.end(), more.begin(), more.end());
  }
  const bool closed = has_closed_form_conjugate(f) && c.grid.empty();
  if (!closed && c.grid.empty())
    throw UnsupportedConjugate("no closed-form conjugate for this tree; pass --grid for grid conjugation");
  if (closed) {
    const ConvexFunction fc = conjugate_closed_form(f);
    if (c.format == Format::text) os << "conjugate: " << format_function_spec(fc, -1) << '\n';
    if (c.format == Format::csv && !queries.empty()) os << "query,value\n";
    for (const auto& q : queries) {
      const ExtReal v = evaluate(fc, q);
      if (c.format == Format::csv)
        os << format_point(q) << ',' << format_real(v.raw()) << '\n';
      else
        os << "value: " << format_point(q) << ' ' << format_real(v.raw()) << '\n';
    }
    return kExitOk;
  }
  require(!queries.empty(), "grid conjugation needs --x or --queries");
  const SampleGrid grid = parse_grid(c.grid);
  const ValueTable table = tabulate(f, grid);
  int boundary = 0;
  if (c.format == Format::csv) os << "query,value,boundary_argmax\n";
  for (const auto& q : queries) {
    const ConjugateValue v = numerical_conjugate_detail(table, q);
    boundary += v.on_boundary ? 1 : 0;
    if (c.format == Format::csv)
      os << format_point(q) << ',' << format_real(v.value) << ',' << (v.on_boundary ? "yes" : "no") << '\n';
    else
      os << "value: " << format_point(q) << ' ' << format_real(v.value)
         << (v.on_boundary ? " (maximizer on grid boundary)" : "") << '\n';
  }
  if (boundary > 0)
    err << "warning: " << boundary << " queries have their maximizer on the grid boundary\n";
  return kExitOk;
}

inline int cmd_reconstruct(const RunConfig& c, std::ostream& os, std::ostream& err) {
  require(c.oracle_table.empty() != c.f_spec.empty(), "reconstruct needs exactly one of --oracle-table or --f");
  require(!c.grid.empty(), "reconstruct needs --grid");
  require(!c.queries.empty() || !c.x.empty(), "reconstruct needs --queries or --x");
  std::optional<ProxOracle> oracle;
  if (!c.oracle_table.empty()) {
    std::ifstream in(c.oracle_table);
    if (!in) throw ParseError("cannot open oracle table '" + c.oracle_table + "'");
    oracle = read_oracle_table_csv(in);
  } else {
    oracle = catalog_oracle(load_function_spec(c.f_spec));
  }
  const int n = oracle->dim();
  const SampleGrid grid = parse_grid(c.grid);
  std::vector<Vector> queries;
  if (!c.x.empty()) queries.push_back(parse_point(c.x, n, "--x"));
  if (!c.queries.empty()) {
    auto more = read_points_file(c.queries, n, "queries");
    queries.insert(queries.end(), more.begin(), more.end());
  }
  ReconstructionTask task{*oracle, c.anchor.empty() ? Vector(Vector::Zero(n)) : parse_point(c.anchor, n, "--anchor"),
                          c.f_at_anchor, grid, queries, {}};
  task.integration.steps = c.steps;
  task.integration.max_steps = std::max(c.steps, task.integration.max_steps);
  const ReconstructionReport r = reconstruct(task);
  if (c.format == Format::csv) {
    os << "# convention: " << r.convention << '\n';
    os << "# pinned_constant: " << format_real(r.pinned_constant) << '\n';
    os << "# gradient_symmetry_residual: " << format_real(r.gradient_symmetry_residual) << '\n';
    os << "# monotonicity_residual: " << format_real(r.monotonicity_residual) << '\n';
    os << "# boundary_argmax_warnings: " << r.boundary_argmax_warnings << '\n';
    for (int a = 0; a < n; ++a) os << 'q' << a << ',';
    os << "value,boundary_argmax\n";
    for (const auto& v : r.recovered) {
      for (int a = 0; a < n; ++a) os << format_real(v.point[a]) << ',';
      os << format_real(v.value) << ',' << (v.boundary_argmax ? "yes" : "no") << '\n';
    }
  } else {
    os << "convention: " << r.convention << '\n';
    os << "pinned_constant: " << format_real(r.pinned_constant) << '\n';
    os << "gradient_symmetry_residual: " << format_real(r.gradient_symmetry_residual) << '\n';
    os << "monotonicity_residual: " << format_real(r.monotonicity_residual) << '\n';
    os << "firm_nonexpansive_residual: " << format_real(r.firm_nonexpansive_residual) << '\n';
    os << "path_residual: " << format_real(r.path_residual) << '\n';
    os << "quadrature_steps: " << r.quadrature_steps << '\n';
    os << "boundary_argmax_warnings: " << r.boundary_argmax_warnings << '\n';
    for (const auto& v : r.recovered)
      os << "recovered: " << format_point(v.point) << ' ' << format_real(v.value)
         << (v.boundary_argmax ? " (maximizer on grid boundary)" : "") << '\n';
  }
  if (r.tilde_min_on_boundary)
    err << "warning: the tabulated minimum lies on the grid boundary; the pinned constant may be off\n";
  if (r.boundary_argmax_warnings > 0)
    err << "warning: " << r.boundary_argmax_warnings << " queries have their maximizer on the grid boundary\n";
  return kExitOk;
}

inline int cmd_compare(const RunConfig& c, std::ostream& os) {
  require(!c.f_spec.empty() && !c.g_spec.empty(), "compare needs --f and --g");
  const ConvexFunction f = load_function_spec(c.f_spec);
  const ConvexFunction g = load_function_spec(c.g_spec);
  const Vector anchor = c.anchor.empty() ? Vector(Vector::Zero(f.dim())) : parse_point(c.anchor, f.dim(), "--anchor");
  Lcg64 rng(c.seed);
  const auto xs = sample_ball(rng, f.dim(), c.radius, c.samples);
  const std::vector<CheckReport> reports{check_comparison(f, g, anchor, xs, c.tol.value_or(kClosedFormTol))};
  write_reports(os, reports, c.format);
  return report_exit(reports);
}

inline int cmd_verify_all(const RunConfig& c, std::ostream& os) {
  require(!c.f_spec.empty() && !c.g_spec.empty(), "verify-all needs --f and --g");
  const ConvexFunction f = load_function_spec(c.f_spec);
  const ConvexFunction g = load_function_spec(c.g_spec);
  BatteryConfig cfg;
  cfg.anchor = c.anchor.empty() ? Vector(Vector::Zero(f.dim())) : parse_point(c.anchor, f.dim(), "--anchor");
  cfg.lambda = c.lambda;
  cfg.ell = c.ell;
  cfg.samples = c.samples;
  cfg.radius = c.radius;
  cfg.seed = c.seed;
  cfg.tol = c.tol.value_or(kClosedFormTol);
  const auto reports = run_battery(f, g, cfg);
  write_reports(os, reports, c.format);
  return report_exit(reports);
}

inline int dispatch(const RunConfig& c, std::ostream& os, std::ostream& err) {
  require(c.lambda > 0.0, "--lambda must be > 0");
  require(c.samples >= 1, "--samples must be >= 1");
  require(c.radius > 0.0, "--radius must be > 0");
  if (c.command == "prox") return cmd_prox(c, os);
  if (c.command == "envelope") return cmd_envelope(c, os);
  if (c.command == "conjugate") return cmd_conjugate(c, os, err);
  if (c.command == "reconstruct") return cmd_reconstruct(c, os, err);
  if (c.command == "compare") return cmd_compare(c, os);
  if (c.command == "verify-all") return cmd_verify_all(c, os);
  throw InvalidArgument("unknown command '" + c.command + "'");
}

}  // namespace detail

/// Runs one command. Output goes to config.out when set, otherwise to `os`.
/// Returns 0 on success, 2 for solver failures and results that contradict a
/// checked statement, 1 for usage, parse and dimension errors.
inline int run(const RunConfig& config, std::ostream& os, std::ostream& err) {
  try {
    if (config.out.empty()) return detail::dispatch(config, os, err);
    std::ostringstream buffer;
    const int code = detail::dispatch(config, buffer, err);
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw InvalidArgument("cannot write '" + config.out + "'");
    file << buffer.str();
    return code;
  } catch (const SolverDidNotConverge& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const NonConservativeField& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace proxcalc::cli
