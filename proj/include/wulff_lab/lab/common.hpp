#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/plaplace.hpp"
#include "wulff_lab/report.hpp"

namespace wlab::lab {

inline constexpr const char* kLebesgueNote =
    "every cell centre is treated as a Lebesgue point; the almost-everywhere exclusion has no grid analogue";

/// per_axis^n cell centres spread over the box shrunk by R + 2h, so that
/// B_R(x) stays inside the grid for every point.
inline std::vector<Point> interior_samples(const GridGeometry& g, int per_axis, double R) {
  const int n = g.dim();
  std::vector<std::vector<double>> axes(n);
  for (int a = 0; a < n; ++a) {
    const double lo = g.origin(a) + R + 2.0 * g.spacing(a);
    const double hi = g.origin(a) + g.extent(a) - R - 2.0 * g.spacing(a);
    if (hi < lo) throw Error(Errc::BallOutsideDomain, "radius too large for interior samples");
    for (int k = 0; k < per_axis; ++k)
      axes[a].push_back(per_axis == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (per_axis - 1));
  }
  std::vector<Point> out;
  std::vector<int> idx(n, 0);
  for (;;) {
    Point x(n);
    for (int a = 0; a < n; ++a) x[a] = axes[a][idx[a]];
    out.push_back(g.center(g.locate(x)));
    int a = 0;
    while (a < n && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == n) break;
  }
  return out;
}

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  return d == 0.0 ? 0.0 : (n * sxy - sx * sy) / d;
}

/// Dyadic radii R, R/2, ... down to r_min (inclusive up to slack).
inline std::vector<double> dyadic_radii(double R, double r_min, int max_count = 64) {
  std::vector<double> r;
  for (double t = R; t >= r_min * (1.0 - 1e-12) && static_cast<int>(r.size()) < max_count; t *= 0.5) r.push_back(t);
  return r;
}

/// Relative weak residual; throws ResidualTooLarge above tol.
inline double require_weak_solution(const GridField& u, const GridField& F, double p, double tol) {
  const double res = weak_residual(u, F, p);
  const double sc = flux_scale(u, F, p);
  const double rel = sc > 0.0 ? res / sc : res;
  if (!(rel <= tol))
    throw Error(Errc::ResidualTooLarge, "weak residual " + std::to_string(rel) + " exceeds " + std::to_string(tol));
  return rel;
}

/// Merges single-resolution reports at h and h/2 into one with a refinement trace.
inline VerificationReport combine_levels(const VerificationReport& coarse, const VerificationReport& fine, double hc,
                                         double hf, double band) {
  VerificationReport r(fine.theorem);
  r.params = fine.params;
  r.seed = fine.seed;
  for (const auto& s : coarse.samples) r.samples.push_back({"h0/" + s.label, s.x, s.r, s.lhs, s.rhs, s.ratio});
  for (const auto& s : fine.samples) r.samples.push_back({"h1/" + s.label, s.x, s.r, s.lhs, s.rhs, s.ratio});
  r.trace = {{hc, coarse.c_star}, {hf, fine.c_star}};
  r.c_star = fine.c_star;
  r.band = band;
  r.notes = coarse.notes;
  for (const auto& nt : fine.notes)
    if (std::find(r.notes.begin(), r.notes.end(), nt) == r.notes.end()) r.notes.push_back(nt);
  const double spread = r.trace_spread();
  r.params["trace_spread"] = wlab::detail::num(spread);
  r.pass = coarse.pass && fine.pass && std::isfinite(coarse.c_star) && std::isfinite(fine.c_star) && spread <= band;
  return r;
}

}  // namespace wlab::lab
