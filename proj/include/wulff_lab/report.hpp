#pragma once

// Verification reports: sampled LHS/RHS pairs, fitted constants, refinement
// traces, JSON and CSV serialization.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wulff_lab/field.hpp"
#include "wulff_lab/random.hpp"

namespace wlab {

using ojson = nlohmann::ordered_json;

/// lhs/rhs with 0/0 = 0 and lhs/0 = ∞.
inline double safe_ratio(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

struct SampleRecord {
  std::string label;
  Point x;
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct TraceEntry {
  double h = 0.0;
  double c_star = 0.0;
};

class VerificationReport {
 public:
  std::string theorem;
  ojson params = ojson::object();
  std::vector<SampleRecord> samples;
  std::vector<TraceEntry> trace;
  double c_star = 0.0;
  double band = 0.0;
  bool pass = false;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;

  VerificationReport() = default;
  explicit VerificationReport(std::string id) : theorem(std::move(id)) {}

  void add(std::string label, Point x, double r, double lhs, double rhs) {
    samples.push_back({std::move(label), std::move(x), r, lhs, rhs, safe_ratio(lhs, rhs)});
  }

  /// Max ratio over the samples whose label starts with `prefix` (all when empty).
  double max_ratio(const std::string& prefix = "") const {
    double c = 0.0;
    for (const auto& s : samples)
      if (s.label.compare(0, prefix.size(), prefix) == 0) c = std::max(c, s.ratio);
    return c;
  }

  /// Relative spread max/min − 1 of the trace constants (0 with fewer than 2).
  double trace_spread() const {
    if (trace.size() < 2) return 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& t : trace) {
      lo = std::min(lo, t.c_star);
      hi = std::max(hi, t.c_star);
    }
    if (hi == 0.0) return 0.0;
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo - 1.0;
  }

  bool finite() const { return std::isfinite(c_star); }

  void note(std::string s) { notes.push_back(std::move(s)); }
};

namespace detail {

inline ojson num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline std::string csv_num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline ojson to_json(const VerificationReport& r) {
  ojson j;
  j["theorem"] = r.theorem;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["family_version"] = kFamilyVersion;
  ojson samples = ojson::array();
  for (const auto& s : r.samples) {
    ojson e;
    e["label"] = s.label;
    ojson x = ojson::array();
    for (double v : s.x) x.push_back(detail::num(v));
    e["x"] = x;
    e["r"] = detail::num(s.r);
    e["lhs"] = detail::num(s.lhs);
    e["rhs"] = detail::num(s.rhs);
    e["ratio"] = detail::num(s.ratio);
    samples.push_back(e);
  }
  j["samples"] = samples;
  j["C_star"] = detail::num(r.c_star);
  ojson trace = ojson::array();
  for (const auto& t : r.trace) trace.push_back({{"h", detail::num(t.h)}, {"C_star", detail::num(t.c_star)}});
  j["trace"] = trace;
  j["band"] = detail::num(r.band);
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  return j;
}

inline std::string to_json_text(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

inline std::string to_csv(const VerificationReport& r) {
  std::ostringstream os;
  os << "theorem,label,x0,x1,r,lhs,rhs,ratio\n";
  for (const auto& s : r.samples) {
    os << detail::csv_field(r.theorem) << ',' << detail::csv_field(s.label) << ','
       << (s.x.size() > 0 ? detail::csv_num(s.x[0]) : "") << ',' << (s.x.size() > 1 ? detail::csv_num(s.x[1]) : "")
       << ',' << detail::csv_num(s.r) << ',' << detail::csv_num(s.lhs) << ',' << detail::csv_num(s.rhs) << ','
       << detail::csv_num(s.ratio) << '\n';
  }
  return os.str();
}

}  // namespace wlab
