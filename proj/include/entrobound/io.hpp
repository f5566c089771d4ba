#pragma once

// JSON configs, CSV point files and fit reports.

#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrobound/scan.hpp"

namespace entrobound {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ValidationError(std::string(where) + ": unknown key \"" + it.key() + "\"");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key \"") + key + "\": " + e.what());
  }
}

inline KineticSign parse_kinetic(const json& j) {
  const auto s = get_or<std::string>(j, "kinetic", "positive");
  if (s == "positive") return KineticSign::Positive;
  if (s == "negative") return KineticSign::Negative;
  throw ValidationError("kinetic must be \"positive\" or \"negative\", got \"" + s + "\"");
}

inline GridAxis parse_axis(const json& j, GridAxis fallback, const char* where) {
  reject_unknown_keys(j, {"lo", "hi", "steps"}, where);
  return {get_or(j, "lo", fallback.lo), get_or(j, "hi", fallback.hi), get_or(j, "steps", fallback.steps)};
}

}  // namespace detail

inline HamiltonianSpec spec_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"dim", "terms", "kinetic"}, "spec");
  HamiltonianSpec s;
  if (!j.contains("dim")) throw ValidationError("spec: missing \"dim\"");
  s.dim = detail::get_or<int>(j, "dim", 0);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 2) throw ValidationError("spec: each term must be [exponent, factor]");
      try {
        s.terms.push_back({t[0].get<int>(), t[1].get<double>()});
      } catch (const json::exception& e) {
        throw ValidationError(std::string("spec term: ") + e.what());
      }
    }
  }
  s.kinetic = detail::parse_kinetic(j);
  s.validate();
  return s;
}

inline json spec_to_json(const HamiltonianSpec& s) {
  json terms = json::array();
  for (const auto& t : s.terms) terms.push_back({t.exponent, t.factor});
  return {{"dim", s.dim}, {"terms", terms}, {"kinetic", to_string(s.kinetic)}};
}

/// Config schema:
///   {"specs": [spec...], "families": [{"type": "monomial"|"laurent", ...}],
///    "beta1": {"lo","hi","steps"}, "beta2": {...},
///    "window": {"c_min","c_max"}, "parallelism": int, "prune": bool}
inline ScanConfig config_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"specs", "families", "beta1", "beta2", "window", "parallelism", "prune"}, "config");
  ScanConfig c;
  if (j.contains("specs"))
    for (const auto& s : j.at("specs")) c.specs.push_back(spec_from_json(s));
  if (j.contains("families")) {
    for (const auto& f : j.at("families")) {
      detail::reject_unknown_keys(f, {"type", "dims", "thetas", "coefficients", "exponents", "kinetic"}, "family");
      const auto type = detail::get_or<std::string>(f, "type", "");
      const auto dims = detail::get_or<std::vector<int>>(f, "dims", {});
      const auto kin = detail::parse_kinetic(f);
      std::vector<HamiltonianSpec> add;
      if (type == "monomial") {
        add = monomial_family(dims, detail::get_or<std::vector<double>>(f, "thetas", {}),
                              detail::get_or<std::vector<int>>(f, "exponents", {}), kin);
      } else if (type == "laurent") {
        add = laurent_family(dims, detail::get_or<std::vector<double>>(f, "coefficients", {}),
                             detail::get_or<std::vector<int>>(f, "exponents", {-2, -1, 1, 2}), kin);
      } else {
        throw ValidationError("family: type must be \"monomial\" or \"laurent\"");
      }
      for (auto& s : add) s.validate();
      c.specs.insert(c.specs.end(), add.begin(), add.end());
    }
  }
  if (j.contains("beta1")) c.beta1 = detail::parse_axis(j.at("beta1"), c.beta1, "beta1");
  if (j.contains("beta2")) c.beta2 = detail::parse_axis(j.at("beta2"), c.beta2, "beta2");
  if (j.contains("window")) {
    const auto& w = j.at("window");
    detail::reject_unknown_keys(w, {"c_min", "c_max"}, "window");
    c.window = {detail::get_or(w, "c_min", c.window.c_min), detail::get_or(w, "c_max", c.window.c_max)};
  }
  c.parallelism = detail::get_or(j, "parallelism", c.parallelism);
  c.prune = detail::get_or(j, "prune", c.prune);
  c.validate();
  return c;
}

inline ScanConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kCsvHeader = "spec_id,beta1,beta2,entropy,energy_cost,space_cost,product,in_window";

inline void write_csv(std::ostream& out, const std::vector<CostPoint>& points, const CostWindow& window) {
  out << kCsvHeader << '\n';
  for (const auto& p : points)
    out << p.spec_id << ',' << format_double(p.beta1) << ',' << format_double(p.beta2) << ','
        << format_double(p.entropy) << ',' << format_double(p.energy_cost) << ',' << format_double(p.space_cost)
        << ',' << format_double(p.product) << ',' << (window.contains(p.product) ? 1 : 0) << '\n';
}

inline std::string to_csv(const std::vector<CostPoint>& points, const CostWindow& window) {
  std::ostringstream os;
  write_csv(os, points, window);
  return os.str();
}

/// Parses CSV written by write_csv. The in_window column is ignored: fitting
/// re-applies whatever window it is given.
inline std::vector<CostPoint> read_csv(std::istream& in) {
  std::vector<CostPoint> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ValidationError("csv: unexpected header \"" + line + "\"");
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw ValidationError("csv line " + std::to_string(lineno) + ": expected 8 fields");
    auto num = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0')
        throw ValidationError("csv line " + std::to_string(lineno) + ": bad number \"" + s + "\"");
      return v;
    };
    CostPoint p;
    p.spec_id = static_cast<int>(num(f[0]));
    p.beta1 = num(f[1]);
    p.beta2 = num(f[2]);
    p.entropy = num(f[3]);
    p.energy_cost = num(f[4]);
    p.space_cost = num(f[5]);
    p.product = num(f[6]);
    out.push_back(p);
  }
  return out;
}

inline std::vector<CostPoint> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open csv " + path);
  return read_csv(in);
}

// ---------------------------------------------------------------------------
// Fit reports

inline json fit_to_json(const BoundFit& f) {
  return {{"alpha", f.alpha},
          {"spec_id", f.attaining_point.spec_id},
          {"beta1", f.attaining_point.beta1},
          {"beta2", f.attaining_point.beta2},
          {"entropy", f.attaining_point.entropy},
          {"product", f.attaining_point.product},
          {"n_points", f.n_points},
          {"c_min", f.window.c_min},
          {"c_max", f.window.c_max}};
}

inline BoundFit fit_from_json(const json& j) {
  BoundFit f;
  try {
    f.alpha = j.at("alpha").get<double>();
    f.attaining_point.spec_id = j.value("spec_id", 0);
    f.attaining_point.beta1 = j.value("beta1", 0.0);
    f.attaining_point.beta2 = j.value("beta2", 0.0);
    f.attaining_point.entropy = j.value("entropy", 0.0);
    f.attaining_point.product = j.value("product", 0.0);
    f.n_points = j.value("n_points", 0);
    f.window = {j.value("c_min", 1.0), j.value("c_max", 100.0)};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fit json: ") + e.what());
  }
  return f;
}

inline BoundFit load_fit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open fit json " + path);
  try {
    return fit_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError("fit json " + path + ": " + e.what());
  }
}

}  // namespace entrobound
