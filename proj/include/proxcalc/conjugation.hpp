#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "proxcalc/catalog.hpp"
#include "proxcalc/csv.hpp"
#include "proxcalc/errors.hpp"
#include "proxcalc/ext_real.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/prox.hpp"
#include "proxcalc/report.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc {

/// Regular lattice in 1 to 3 dimensions, axis 0 varying slowest.
class SampleGrid {
 public:
  static constexpr int kMaxDim = 3;
  static constexpr std::size_t kMaxPoints = 1'000'000;

  SampleGrid(Vector lo, Vector hi, std::vector<int> counts)
      : lo_(std::move(lo)), hi_(std::move(hi)), counts_(std::move(counts)) {
    const auto n = lo_.size();
    if (n < 1 || n > kMaxDim) throw InvalidArgument("SampleGrid: dimension must be 1, 2 or 3");
    if (hi_.size() != n || static_cast<Eigen::Index>(counts_.size()) != n)
      throw DimensionMismatch("SampleGrid: lo, hi and counts must have the same length");
    require_finite(lo_, "SampleGrid.lo");
    require_finite(hi_, "SampleGrid.hi");
    std::size_t total = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(lo_[i] < hi_[i])) throw InvalidArgument("SampleGrid: lo < hi required on every axis");
      if (counts_[static_cast<std::size_t>(i)] < 2)
        throw InvalidArgument("SampleGrid: at least 2 points per axis");
      total *= static_cast<std::size_t>(counts_[static_cast<std::size_t>(i)]);
      if (total > kMaxPoints) throw InvalidArgument("SampleGrid: more than 10^6 lattice points");
    }
    size_ = total;
  }

  /// Same bounds on every axis.
  static SampleGrid cube(int dim, double lo, double hi, int count) {
    return SampleGrid(Vector::Constant(dim, lo), Vector::Constant(dim, hi),
                      std::vector<int>(static_cast<std::size_t>(dim), count));
  }

  int dim() const { return static_cast<int>(lo_.size()); }
  std::size_t size() const { return size_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const std::vector<int>& counts() const { return counts_; }

  double spacing(int axis) const {
    return (hi_[axis] - lo_[axis]) / (counts_[static_cast<std::size_t>(axis)] - 1);
  }

  double coordinate(int axis, int k) const {
    const int last = counts_[static_cast<std::size_t>(axis)] - 1;
    if (k == last) return hi_[axis];
    return lo_[axis] + k * spacing(axis);
  }

  std::vector<int> multi_index(std::size_t index) const {
    std::vector<int> idx(counts_.size());
    for (std::size_t a = counts_.size(); a-- > 0;) {
      idx[a] = static_cast<int>(index % static_cast<std::size_t>(counts_[a]));
      index /= static_cast<std::size_t>(counts_[a]);
    }
    return idx;
  }

  std::size_t flat_index(const std::vector<int>& idx) const {
    std::size_t out = 0;
    for (std::size_t a = 0; a < counts_.size(); ++a)
      out = out * static_cast<std::size_t>(counts_[a]) + static_cast<std::size_t>(idx[a]);
    return out;
  }

  Vector point(std::size_t index) const {
    const auto idx = multi_index(index);
    Vector p(dim());
    for (int a = 0; a < dim(); ++a) p[a] = coordinate(a, idx[static_cast<std::size_t>(a)]);
    return p;
  }

  bool on_boundary(std::size_t index) const {
    const auto idx = multi_index(index);
    for (std::size_t a = 0; a < idx.size(); ++a)
      if (idx[a] == 0 || idx[a] == counts_[a] - 1) return true;
    return false;
  }

  bool contains(const Vector& p) const {
    return p.size() == lo_.size() && (p.array() >= lo_.array()).all() &&
           (p.array() <= hi_.array()).all();
  }

 private:
  Vector lo_, hi_;
  std::vector<int> counts_;
  std::size_t size_ = 0;
};

/// Extended-real values on every lattice point of a grid.
class ValueTable {
 public:
  ValueTable(SampleGrid grid, std::vector<ExtReal> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw DimensionMismatch("ValueTable: value count does not match the lattice size");
    if (std::none_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_finite(); }))
      throw AllInfinite("ValueTable: every entry is +inf");
  }

  const SampleGrid& grid() const { return grid_; }
  const std::vector<ExtReal>& values() const { return values_; }
  ExtReal operator[](std::size_t i) const { return values_[i]; }

  /// Index of the smallest finite entry.
  std::size_t argmin() const {
    std::size_t best = 0;
    double bv = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i].raw() < bv) bv = values_[i].raw(), best = i;
    return best;
  }

  /// Copy with every value shifted by c.
  ValueTable shifted(double c) const {
    std::vector<ExtReal> v;
    v.reserve(values_.size());
    for (ExtReal x : values_) v.push_back(x + c);
    return {grid_, std::move(v)};
  }

 private:
  SampleGrid grid_;
  std::vector<ExtReal> values_;
};

inline ValueTable tabulate(const ConvexFunction& f, const SampleGrid& grid) {
  if (f.dim() != grid.dim())
    throw DimensionMismatch("tabulate: function dimension " + std::to_string(f.dim()) +
                            " vs grid dimension " + std::to_string(grid.dim()));
  std::vector<ExtReal> values;
  values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values.push_back(evaluate(f, grid.point(i)));
  return {grid, std::move(values)};
}

struct ConjugateValue {
  double value = 0.0;
  std::size_t argmax = 0;
  /// The maximizing lattice point lies on the grid boundary, so the true sup
  /// may be larger (truncation).
  bool on_boundary = false;
};

/// max over lattice points v with finite value of <query, v> - value(v).
/// A lower bound of the true conjugate that tightens as the grid refines.
/// Among tied maximizers an interior one is preferred.
inline ConjugateValue numerical_conjugate_detail(const ValueTable& table, const Vector& query) {
  const SampleGrid& g = table.grid();
  require_dim(query, g.dim(), "numerical_conjugate: query");
  ConjugateValue best{-std::numeric_limits<double>::infinity(), 0, false};
  bool found = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const ExtReal v = table[i];
    if (v.is_infinite()) continue;
    const double s = query.dot(g.point(i)) - v.raw();
    if (!found || s > best.value) {
      best = {s, i, g.on_boundary(i)};
      found = true;
    } else if (s == best.value && best.on_boundary && !g.on_boundary(i)) {
      best = {s, i, false};
    }
  }
  if (!found) throw AllInfinite("numerical_conjugate: no finite entries");
  return best;
}

inline double numerical_conjugate(const ValueTable& table, const Vector& query) {
  return numerical_conjugate_detail(table, query).value;
}

namespace detail {

// min_y max_{i in S} (<y, v_i> - f_i) + ||y - x||^2 / 2 by enumerating the
// subsets A of S with |A| <= dim + 1 that can be the active set: on A all
// pieces tie at the level t and y = x - sum mu_i v_i with mu in the simplex.
struct PieceSolution {
  Vector y;
  double level = 0.0;
  std::vector<std::size_t> active;
};

inline std::optional<PieceSolution> solve_pieces(const std::vector<Vector>& v,
                                                 const std::vector<double>& f,
                                                 const std::vector<std::size_t>& ids,
                                                 const Vector& x) {
  const std::size_t m = ids.size();
  const auto dim = static_cast<std::size_t>(x.size());
  std::optional<PieceSolution> best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> a;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) a.push_back(ids[i]);
    if (a.size() > dim + 1) continue;
    const auto k = static_cast<Eigen::Index>(a.size());
    Matrix lhs = Matrix::Zero(k + 1, k + 1);
    Vector rhs(k + 1);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) lhs(i, j) = v[a[i]].dot(v[a[j]]);
      lhs(i, k) = 1.0;
      lhs(k, i) = 1.0;
      rhs[i] = x.dot(v[a[i]]) - f[a[i]];
    }
    rhs[k] = 1.0;
    const Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible()) continue;
    const Vector sol = lu.solve(rhs);
    if ((sol.head(k).array() < -1e-12).any()) continue;
    Vector y = x;
    for (Eigen::Index i = 0; i < k; ++i) y -= sol[i] * v[a[i]];
    double level = -std::numeric_limits<double>::infinity();
    for (std::size_t id : ids) level = std::max(level, y.dot(v[id]) - f[id]);
    const double obj = level + 0.5 * (y - x).squaredNorm();
    if (obj < best_obj - 1e-15 * std::max(1.0, std::abs(obj))) {
      best_obj = obj;
      best = PieceSolution{y, level, a};
    }
  }
  return best;
}

}  // namespace detail

/// prox_{h}(x) for the grid conjugate h(y) = max_v (<y, v> - f(v)) of
/// `table`. h is the max of finitely many affine pieces, so the minimizer is
/// found exactly by a cutting-plane loop: solve over a small working set of
/// pieces, add the piece that is largest at the candidate, repeat until no
/// piece exceeds the working level.
inline ProxResult numerical_conjugate_prox(const ValueTable& table, const Vector& x,
                                           int max_iters = 200) {
  const SampleGrid& g = table.grid();
  require_dim(x, g.dim(), "numerical_conjugate_prox: point");
  require_finite(x, "numerical_conjugate_prox: point");
  std::vector<Vector> v;
  std::vector<double> f;
  std::vector<std::size_t> lattice_index;
  const auto add_piece = [&](std::size_t i) -> std::size_t {
    for (std::size_t k = 0; k < lattice_index.size(); ++k)
      if (lattice_index[k] == i) return k;
    lattice_index.push_back(i);
    v.push_back(g.point(i));
    f.push_back(table[i].raw());
    return v.size() - 1;
  };

  ProxResult out;
  out.method = ProxMethod::numerical;
  out.converged = false;
  std::vector<std::size_t> working{add_piece(numerical_conjugate_detail(table, x).argmax)};
  Vector y = x;
  for (int it = 1; it <= max_iters; ++it) {
    out.iterations = it;
    const auto sol = detail::solve_pieces(v, f, working, x);
    if (!sol) break;
    y = sol->y;
    const ConjugateValue top = numerical_conjugate_detail(table, y);
    out.residual = std::max(0.0, top.value - sol->level);
    if (out.residual <= 1e-12 * std::max(1.0, std::abs(sol->level))) {
      out.converged = true;
      break;
    }
    working = sol->active;
    const std::size_t k = add_piece(top.argmax);
    if (std::find(working.begin(), working.end(), k) != working.end()) break;
    working.push_back(k);
  }
  out.minimizer = y;
  out.envelope_value = numerical_conjugate(table, y) + 0.5 * (x - y).squaredNorm();
  if (!out.converged) out.warnings.push_back("grid conjugate prox stopped before the cutting-plane test passed");
  return out;
}

/// Moreau decomposition residual with f* taken from the closed-form rule
/// table when available and from the grid conjugate of f otherwise.
inline double moreau_decomposition_residual(const ConvexFunction& f, const Vector& x,
                                            const SampleGrid& grid,
                                            const SolverBudget& budget = {}) {
  if (has_closed_form_conjugate(f)) return moreau_decomposition_residual(f, x, budget);
  const ProxResult p = detail::require_converged(prox(f, 1.0, x, budget));
  const ProxResult q = numerical_conjugate_prox(tabulate(f, grid), x);
  if (!q.converged) throw SolverDidNotConverge("grid conjugate prox did not converge");
  return (p.minimizer + q.minimizer - x).norm();
}

/// Compares the grid conjugate of Envelope(f, lambda) with f*(q) + (lambda/2)||q||^2.
///
/// Queries outside dom f* (right side +inf) pass only when the grid
/// maximizer sits on the boundary, i.e. the sup is truncated by the grid.
/// f* comes from the rule table, or from the grid conjugate of f when the
/// rule table has no entry.
inline CheckReport verify_envelope_conjugate(const ConvexFunction& f, double lambda,
                                             const SampleGrid& grid,
                                             const std::vector<Vector>& queries,
                                             double tol = 2e-3) {
  CheckReport r;
  r.name = "envelope_conjugate";
  r.tolerance = tol;
  const ValueTable env = tabulate(ConvexFunction::envelope(f, lambda), grid);

  std::optional<ConvexFunction> fc;
  std::optional<ValueTable> f_table;
  if (has_closed_form_conjugate(f)) {
    fc = conjugate_closed_form(f);
  } else {
    f_table = tabulate(f, grid);
    r.notes.push_back("f* from grid conjugation (no closed form)");
  }
  int truncated = 0;
  for (const auto& q : queries) {
    const ConjugateValue lhs = numerical_conjugate_detail(env, q);
    const double fstar = fc ? evaluate(*fc, q).raw() : numerical_conjugate(*f_table, q);
    const double rhs = fstar + 0.5 * lambda * q.squaredNorm();
    double gap = 0.0;
    if (std::isinf(rhs)) {
      if (!lhs.on_boundary) gap = std::numeric_limits<double>::infinity();
    } else {
      gap = std::abs(lhs.value - rhs);
      if (lhs.on_boundary) ++truncated;
    }
    if (gap > r.conclusion_residual) r.conclusion_residual = gap;
    if (gap > tol)
      r.add_witness(q, "grid " + format_real(lhs.value) + " vs rule " + format_real(rhs));
  }
  if (truncated > 0)
    r.notes.push_back(std::to_string(truncated) + " finite queries had their maximizer on the grid boundary");
  if (r.conclusion_residual > tol) {
    r.status = CheckStatus::counterexample;
    r.theorem_consistent = false;
  }
  return r;
}

// ValueTable CSV: one row per lattice point, coordinates then value, "+inf"
// for infinite entries, lattice order.
inline void write_value_table_csv(std::ostream& os, const ValueTable& t) {
  const SampleGrid& g = t.grid();
  for (int a = 0; a < g.dim(); ++a) os << 'x' << a << ',';
  os << "value\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vector p = g.point(i);
    for (int a = 0; a < g.dim(); ++a) os << csv::format_exact(p[a]) << ',';
    os << csv::format_exact(t[i].raw()) << '\n';
  }
}

struct Lattice {
  SampleGrid grid;
  /// Flat lattice index of each input point, in input order.
  std::vector<std::size_t> index;
};

/// Recognizes points that cover a full regular lattice exactly once, in any
/// order. Returns nullopt otherwise.
inline std::optional<Lattice> infer_lattice(const std::vector<Vector>& points) {
  if (points.empty()) return std::nullopt;
  const int dim = static_cast<int>(points.front().size());
  if (dim < 1 || dim > SampleGrid::kMaxDim) return std::nullopt;
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    auto& ax = axes[static_cast<std::size_t>(a)];
    for (const auto& p : points) ax.push_back(p[a]);
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
    if (ax.size() < 2) return std::nullopt;
  }
  Vector lo(dim), hi(dim);
  std::vector<int> counts;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    const auto& ax = axes[static_cast<std::size_t>(a)];
    lo[a] = ax.front();
    hi[a] = ax.back();
    counts.push_back(static_cast<int>(ax.size()));
    total *= ax.size();
  }
  if (total != points.size() || total > SampleGrid::kMaxPoints) return std::nullopt;
  SampleGrid grid(lo, hi, counts);
  for (int a = 0; a < dim; ++a) {
    const auto& ax = axes[static_cast<std::size_t>(a)];
    const double h = grid.spacing(a);
    for (std::size_t k = 0; k < ax.size(); ++k)
      if (std::abs(ax[k] - grid.coordinate(a, static_cast<int>(k))) > 1e-6 * h) return std::nullopt;
  }
  Lattice out{grid, {}};
  out.index.reserve(points.size());
  std::vector<bool> seen(grid.size(), false);
  for (const auto& p : points) {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      const auto& ax = axes[static_cast<std::size_t>(a)];
      idx[static_cast<std::size_t>(a)] =
          static_cast<int>(std::lower_bound(ax.begin(), ax.end(), p[a]) - ax.begin());
    }
    const std::size_t flat = grid.flat_index(idx);
    if (seen[flat]) return std::nullopt;
    seen[flat] = true;
    out.index.push_back(flat);
  }
  return out;
}

/// Inverse of write_value_table_csv. Rows may come in any order but must
/// cover a full regular lattice exactly once.
inline ValueTable read_value_table_csv(std::istream& in) {
  const auto rows = csv::read_numeric_rows(in, "value table");
  if (rows.empty()) throw ParseError("value table: no rows");
  const std::size_t cols = rows.front().size();
  if (cols < 2 || cols > SampleGrid::kMaxDim + 1)
    throw ParseError("value table: expected 2 to 4 columns");
  const auto dim = static_cast<Eigen::Index>(cols - 1);
  std::vector<Vector> points;
  points.reserve(rows.size());
  for (const auto& r : rows) {
    Vector p(dim);
    for (Eigen::Index a = 0; a < dim; ++a) p[a] = r[static_cast<std::size_t>(a)];
    require_finite(p, "value table: coordinates");
    points.push_back(std::move(p));
  }
  auto lattice = infer_lattice(points);
  if (!lattice) throw ParseError("value table: rows do not form a full regular lattice");
  std::vector<ExtReal> values(lattice->grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double v = rows[i].back();
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw ParseError("value table: row " + std::to_string(i + 1) + ": value must be finite or +inf");
    values[lattice->index[i]] = ExtReal(v);
  }
  return {lattice->grid, std::move(values)};
}

}  // namespace proxcalc
