#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "proxcalc/errors.hpp"
#include "proxcalc/vector.hpp"

namespace proxcalc::csv {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Decimal number, or "+inf"/"inf" for +infinity.
inline bool try_parse_real(std::string_view s, double& out) {
  s = trim(s);
  if (s == "+inf" || s == "inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline double parse_real(std::string_view s, const std::string& where) {
  double v = 0.0;
  if (!try_parse_real(s, v)) throw ParseError(where + ": not a number: '" + std::string(s) + "'");
  return v;
}

/// Exact round-trip rendering for table files.
inline std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Numeric rows of a CSV stream. Blank lines and '#' comments are skipped; a
/// first line that does not parse as numbers is taken as a header.
inline std::vector<std::vector<double>> read_numeric_rows(std::istream& in, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(t, ',');
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = true;
    for (auto f : fields) {
      double v = 0.0;
      if (!try_parse_real(f, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError(what + ": line " + std::to_string(lineno) + ": non-numeric field");
    }
    first = false;
    if (!rows.empty() && rows.front().size() != row.size())
      throw ParseError(what + ": line " + std::to_string(lineno) + ": expected " +
                       std::to_string(rows.front().size()) + " fields, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// One point per row.
inline std::vector<Vector> read_points(std::istream& in, const std::string& what) {
  std::vector<Vector> out;
  for (const auto& row : read_numeric_rows(in, what)) {
    Vector v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) v[static_cast<Eigen::Index>(i)] = row[i];
    require_finite(v, what.c_str());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace proxcalc::csv
