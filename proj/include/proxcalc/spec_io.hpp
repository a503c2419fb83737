#pragma once

#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxcalc/errors.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/vector.hpp"

// Function-spec documents: JSON trees of {"atom": name, params...} and
// {"op": name, "f": child, params...}. Unknown keys are errors.

namespace proxcalc {

namespace detail {

using Json = nlohmann::ordered_json;

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string child_path(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

[[noreturn]] inline void spec_error(const std::string& path, const std::string& msg) {
  throw ParseError("function spec " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

inline double spec_real(const Json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) spec_error(path, "missing field \"" + key + "\"");
  if (!it->is_number()) spec_error(child_path(path, key), "expected a number");
  return it->get<double>();
}

inline Vector spec_vector(const Json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) spec_error(path, "missing field \"" + key + "\"");
  const std::string p = child_path(path, key);
  if (!it->is_array() || it->empty()) spec_error(p, "expected a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(it->size()));
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number()) spec_error(p + "/" + std::to_string(i), "expected a number");
    v[static_cast<Eigen::Index>(i)] = (*it)[i].get<double>();
  }
  return v;
}

inline Matrix spec_matrix(const Json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) spec_error(path, "missing field \"" + key + "\"");
  const std::string p = child_path(path, key);
  if (!it->is_array() || it->empty()) spec_error(p, "expected an array of rows");
  const std::size_t n = it->size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = (*it)[i];
    if (!row.is_array() || row.size() != n)
      spec_error(p + "/" + std::to_string(i), "expected a row of " + std::to_string(n) + " numbers");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number())
        spec_error(p + "/" + std::to_string(i) + "/" + std::to_string(j), "expected a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

inline void allow_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) spec_error(path, "unknown key \"" + k + "\"");
}

inline ConvexFunction function_from_json(const Json& j, const std::string& path);

template <class Build>
ConvexFunction build_at(const std::string& path, Build&& build) {
  try {
    return build();
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch("function spec " + (path.empty() ? std::string("/") : path) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("function spec " + (path.empty() ? std::string("/") : path) + ": " + e.what());
  }
}

inline ConvexFunction function_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) spec_error(path, "expected an object");
  const bool has_atom = j.contains("atom"), has_op = j.contains("op");
  if (has_atom == has_op) spec_error(path, "exactly one of \"atom\" or \"op\" is required");
  if (has_atom) {
    if (!j["atom"].is_string()) spec_error(child_path(path, "atom"), "expected a string");
    const std::string name = j["atom"].get<std::string>();
    if (name == "affine") {
      allow_keys(j, {"atom", "a", "c"}, path);
      return build_at(path, [&] {
        return ConvexFunction::affine(spec_vector(j, "a", path), j.contains("c") ? spec_real(j, "c", path) : 0.0);
      });
    }
    if (name == "quadratic") {
      allow_keys(j, {"atom", "Q", "b", "c"}, path);
      return build_at(path, [&] {
        return ConvexFunction::quadratic(spec_matrix(j, "Q", path), spec_vector(j, "b", path),
                                         j.contains("c") ? spec_real(j, "c", path) : 0.0);
      });
    }
    if (name == "scaled_norm") {
      allow_keys(j, {"atom", "ell", "center"}, path);
      return build_at(path, [&] {
        return ConvexFunction::scaled_norm(spec_real(j, "ell", path), spec_vector(j, "center", path));
      });
    }
    if (name == "indicator_point") {
      allow_keys(j, {"atom", "p"}, path);
      return build_at(path, [&] { return ConvexFunction::indicator_point(spec_vector(j, "p", path)); });
    }
    if (name == "indicator_ball" || name == "support_ball") {
      allow_keys(j, {"atom", "center", "radius"}, path);
      return build_at(path, [&] {
        auto c = spec_vector(j, "center", path);
        const double r = spec_real(j, "radius", path);
        return name == "indicator_ball" ? ConvexFunction::indicator_ball(std::move(c), r)
                                        : ConvexFunction::support_ball(std::move(c), r);
      });
    }
    if (name == "indicator_box" || name == "support_box") {
      allow_keys(j, {"atom", "lo", "hi"}, path);
      return build_at(path, [&] {
        auto lo = spec_vector(j, "lo", path);
        auto hi = spec_vector(j, "hi", path);
        return name == "indicator_box" ? ConvexFunction::indicator_box(std::move(lo), std::move(hi))
                                       : ConvexFunction::support_box(std::move(lo), std::move(hi));
      });
    }
    if (name == "indicator_halfspace") {
      allow_keys(j, {"atom", "a", "beta"}, path);
      return build_at(path, [&] {
        return ConvexFunction::indicator_halfspace(spec_vector(j, "a", path), spec_real(j, "beta", path));
      });
    }
    spec_error(child_path(path, "atom"), "unknown atom \"" + name + "\"");
  }
  if (!j["op"].is_string()) spec_error(child_path(path, "op"), "expected a string");
  const std::string op = j["op"].get<std::string>();
  const auto child = [&] {
    if (!j.contains("f")) spec_error(path, "missing field \"f\"");
    return function_from_json(j["f"], child_path(path, "f"));
  };
  if (op == "tilt") {
    allow_keys(j, {"op", "f", "a"}, path);
    auto f = child();
    return build_at(path, [&] { return ConvexFunction::tilt(f, spec_vector(j, "a", path)); });
  }
  if (op == "translate") {
    allow_keys(j, {"op", "f", "t"}, path);
    auto f = child();
    return build_at(path, [&] { return ConvexFunction::translate(f, spec_vector(j, "t", path)); });
  }
  if (op == "add_const") {
    allow_keys(j, {"op", "f", "c"}, path);
    auto f = child();
    return build_at(path, [&] { return ConvexFunction::add_const(f, spec_real(j, "c", path)); });
  }
  if (op == "add_sq_norm") {
    allow_keys(j, {"op", "f", "mu"}, path);
    auto f = child();
    return build_at(path, [&] { return ConvexFunction::add_sq_norm(f, spec_real(j, "mu", path)); });
  }
  if (op == "envelope") {
    allow_keys(j, {"op", "f", "lambda"}, path);
    auto f = child();
    return build_at(path, [&] { return ConvexFunction::envelope(f, spec_real(j, "lambda", path)); });
  }
  spec_error(child_path(path, "op"), "unknown op \"" + op + "\"");
}

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace detail

/// Parses a function-spec document. Syntax errors report line and column;
/// schema errors report the JSON path of the offending value.
inline ConvexFunction parse_function_spec(const std::string& text) {
  detail::Json j;
  try {
    j = detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("function spec: syntax error at " + detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) +
                     ": " + e.what());
  }
  return detail::function_from_json(j, "");
}

inline ConvexFunction load_function_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open function spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_function_spec(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline nlohmann::ordered_json function_to_json(const ConvexFunction& f) {
  using detail::Json;
  using detail::vector_json;
  return visit(
      f, Overloaded{
             [](const atom::Affine& a) { return Json{{"atom", "affine"}, {"a", vector_json(a.a)}, {"c", a.c}}; },
             [](const atom::Quadratic& a) {
               Json q = Json::array();
               for (Eigen::Index i = 0; i < a.q.rows(); ++i) q.push_back(vector_json(a.q.row(i).transpose()));
               return Json{{"atom", "quadratic"}, {"Q", q}, {"b", vector_json(a.b)}, {"c", a.c}};
             },
             [](const atom::ScaledNorm& a) {
               return Json{{"atom", "scaled_norm"}, {"ell", a.ell}, {"center", vector_json(a.center)}};
             },
             [](const atom::IndicatorPoint& a) { return Json{{"atom", "indicator_point"}, {"p", vector_json(a.p)}}; },
             [](const atom::IndicatorBall& a) {
               return Json{{"atom", "indicator_ball"}, {"center", vector_json(a.center)}, {"radius", a.radius}};
             },
             [](const atom::IndicatorBox& a) {
               return Json{{"atom", "indicator_box"}, {"lo", vector_json(a.lo)}, {"hi", vector_json(a.hi)}};
             },
             [](const atom::IndicatorHalfspace& a) {
               return Json{{"atom", "indicator_halfspace"}, {"a", vector_json(a.a)}, {"beta", a.beta}};
             },
             [](const atom::SupportBall& a) {
               return Json{{"atom", "support_ball"}, {"center", vector_json(a.center)}, {"radius", a.radius}};
             },
             [](const atom::SupportBox& a) {
               return Json{{"atom", "support_box"}, {"lo", vector_json(a.lo)}, {"hi", vector_json(a.hi)}};
             },
             [](const combinator::Tilt& c) {
               return Json{{"op", "tilt"}, {"f", function_to_json(c.f)}, {"a", vector_json(c.a)}};
             },
             [](const combinator::Translate& c) {
               return Json{{"op", "translate"}, {"f", function_to_json(c.f)}, {"t", vector_json(c.t)}};
             },
             [](const combinator::AddConst& c) {
               return Json{{"op", "add_const"}, {"f", function_to_json(c.f)}, {"c", c.c}};
             },
             [](const combinator::AddSqNorm& c) {
               return Json{{"op", "add_sq_norm"}, {"f", function_to_json(c.f)}, {"mu", c.mu}};
             },
             [](const combinator::Envelope& c) {
               return Json{{"op", "envelope"}, {"f", function_to_json(c.f)}, {"lambda", c.lambda}};
             },
         });
}

inline std::string format_function_spec(const ConvexFunction& f, int indent = 2) {
  return function_to_json(f).dump(indent);
}

}  // namespace proxcalc
