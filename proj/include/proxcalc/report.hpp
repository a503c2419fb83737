#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "proxcalc/vector.hpp"

namespace proxcalc {

enum class CheckStatus { verified, hypothesis_fails, counterexample, precondition_violated };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::verified: return "verified";
    case CheckStatus::hypothesis_fails: return "hypothesis_fails";
    case CheckStatus::counterexample: return "counterexample";
    case CheckStatus::precondition_violated: return "precondition_violated";
  }
  return "unknown";
}

struct Witness {
  Vector point;
  std::string details;
};

/// Outcome of one empirical check. Residuals are maxima over the declared
/// sample set; +inf marks a domain mismatch (one side finite, the other not).
struct CheckReport {
  static constexpr std::size_t kMaxWitnesses = 5;

  std::string name;
  CheckStatus status = CheckStatus::verified;
  double hypothesis_residual = 0.0;
  double conclusion_residual = 0.0;
  double tolerance = 0.0;
  /// False when the sampled data contradicts the checked statement itself.
  /// A `counterexample` to a property of the input (e.g. "f is l-Lipschitz")
  /// can still be consistent with the statement.
  bool theorem_consistent = true;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  void add_witness(Vector p, std::string details) {
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back({std::move(p), std::move(details)});
  }
};

/// Status assembled the same way by every one-directional check.
inline CheckStatus implication_status(double hypothesis_residual, double conclusion_residual,
                                      double tol) {
  if (hypothesis_residual > tol) return CheckStatus::hypothesis_fails;
  if (conclusion_residual > tol) return CheckStatus::counterexample;
  return CheckStatus::verified;
}

/// Structured-text form: one "key: value" line per field, blank line after.
inline void write_text(std::ostream& os, const CheckReport& r) {
  os << "check: " << r.name << '\n';
  os << "status: " << to_string(r.status) << '\n';
  os << "theorem_consistent: " << (r.theorem_consistent ? "yes" : "no") << '\n';
  os << "hypothesis_residual: " << format_real(r.hypothesis_residual) << '\n';
  os << "conclusion_residual: " << format_real(r.conclusion_residual) << '\n';
  os << "tolerance: " << format_real(r.tolerance) << '\n';
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  for (const auto& w : r.witnesses) {
    os << "witness: " << format_point(w.point);
    if (!w.details.empty()) os << ' ' << w.details;
    os << '\n';
  }
  os << '\n';
}

inline constexpr const char* kReportCsvHeader =
    "check_name,status,hypothesis_residual,conclusion_residual,witness_coords,tolerance";

/// One CSV row. Witness coordinates are ';'-joined, witnesses '|'-joined.
inline void write_csv_row(std::ostream& os, const CheckReport& r) {
  std::string coords;
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    if (i) coords += '|';
    const Vector& p = r.witnesses[i].point;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (j) coords += ';';
      coords += format_real(p[j]);
    }
  }
  os << r.name << ',' << to_string(r.status) << ',' << format_real(r.hypothesis_residual) << ','
     << format_real(r.conclusion_residual) << ',' << coords << ',' << format_real(r.tolerance)
     << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<CheckReport>& reports) {
  os << kReportCsvHeader << '\n';
  for (const auto& r : reports) write_csv_row(os, r);
}

}  // namespace proxcalc
