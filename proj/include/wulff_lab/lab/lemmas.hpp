#pragma once

// One-dimensional Hardy inequalities and the telescoping bound for ball means.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wulff_lab/campanato.hpp"
#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/lab/common.hpp"
#include "wulff_lab/quad1d.hpp"
#include "wulff_lab/radial.hpp"
#include "wulff_lab/random.hpp"
#include "wulff_lab/report.hpp"

namespace wlab::lab {

// ---------------------------------------------------------------- Hardy

enum class HardyCase { I, IIFar, IINear };

inline HardyCase parse_hardy_case(const std::string& s) {
  if (s == "i") return HardyCase::I;
  if (s == "ii-far") return HardyCase::IIFar;
  if (s == "ii-near") return HardyCase::IINear;
  throw Error(Errc::InvalidArgument, "unknown Hardy case '" + s + "' (i, ii-far, ii-near)");
}

inline const char* to_string(HardyCase c) {
  switch (c) {
    case HardyCase::I: return "i";
    case HardyCase::IIFar: return "ii-far";
    case HardyCase::IINear: return "ii-near";
  }
  return "?";
}

struct HardyParams {
  HardyCase hardy_case = HardyCase::I;
  double q = 1.0;
  double alpha = 0.0;
  double k = 2.0;          ///< quasi-increasing constant for case ii
  double a = 1.0;          ///< right end for ii-near
  std::string family = "";  ///< bump | ramp | const; empty picks the case default
  int count = 100;
  std::uint64_t seed = 1;
};

/// Positive test function φ on (0, ∞), stored as t ↦ log φ(e^t), with the
/// log-abscissae of its kinks.
struct HardyFunction {
  std::function<double(double)> log_phi;
  std::vector<double> kinks;
  std::string name;
  double operator()(double r) const { return std::exp(log_phi(std::log(r))); }
};

inline void check_hardy_params(const HardyParams& p) {
  const double q = p.q, a = p.alpha;
  switch (p.hardy_case) {
    case HardyCase::I:
      if (!(q >= 1.0)) throw Error(Errc::ParameterRangeViolation, "case (i) needs q >= 1");
      break;
    case HardyCase::IIFar:
      if (!(q > 0.0 && q < 1.0)) throw Error(Errc::ParameterRangeViolation, "case (ii) needs q in (0, 1)");
      if (!(a < -1.0 - 1.0 / q)) throw Error(Errc::ParameterRangeViolation, "ii-far needs alpha < -1 - 1/q");
      break;
    case HardyCase::IINear:
      if (!(q > 0.0 && q < 1.0)) throw Error(Errc::ParameterRangeViolation, "case (ii) needs q in (0, 1)");
      if (!(a >= -1.0 - 1.0 / q && a < -1.0))
        throw Error(Errc::ParameterRangeViolation, "ii-near needs -1 - 1/q <= alpha < -1");
      if (!(p.a > 0.0)) throw Error(Errc::ParameterRangeViolation, "ii-near needs a > 0");
      break;
  }
  if (p.hardy_case != HardyCase::I && !(p.k >= 1.0))
    throw Error(Errc::ParameterRangeViolation, "quasi-increasing constant must be >= 1");
}

/// Random member of the family, with integrability adapted to (q, α).
inline HardyFunction hardy_member(const HardyParams& p, Rng& rng) {
  const double q = p.q, al = p.alpha;
  std::string fam = p.family;
  if (fam.empty()) fam = p.hardy_case == HardyCase::I ? "bump" : "ramp";
  const double c = rng.uniform(0.5, 2.0);
  const double om = rng.uniform(0.5, 3.0);
  const double a_min = -1.0 / q - al - 1.0;  // integrability of the right side at 0
  const double lc = std::log(c);
  if (fam == "const") return {[lc](double) { return lc; }, {}, "const"};
  if (fam == "bump") {
    if (p.hardy_case != HardyCase::I) throw Error(Errc::InvalidArgument, "the bump family is for case (i)");
    const double eps = rng.uniform(0.0, 0.5);
    const double a = a_min + rng.uniform(0.3, 1.5);
    const double b = std::max(a + al + 1.0 + 1.0 / q, a + al + 1.0) + rng.uniform(0.5, 2.0);
    const double r0 = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
    const double l0 = std::log(r0);
    return {[=](double t) {
              const double z = b * (t - l0);
              const double soft = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
              return lc + a * t - soft + std::log1p(eps * std::sin(om * t));
            },
            {},
            "bump"};
  }
  if (fam == "ramp") {
    // min(r/r0, 1)^a (1 + ε sin(ω log r)) is k-quasi-increasing for (1+ε)/(1−ε) <= k.
    const double emax = (p.k - 1.0) / (p.k + 1.0);
    const double eps = rng.uniform(0.0, emax);
    const double a = std::max(0.0, a_min) + rng.uniform(0.2, 1.5);
    const double span = p.hardy_case == HardyCase::IINear ? p.a : 1.0;
    const double r0 = span * std::exp(rng.uniform(std::log(0.05), std::log(1.5)));
    const double l0 = std::log(r0);
    return {[=](double t) { return lc + a * std::min(t - l0, 0.0) + std::log1p(eps * std::sin(om * t)); },
            {std::log(r0)},
            "ramp"};
  }
  throw Error(Errc::InvalidArgument, "unknown Hardy family '" + fam + "'");
}

namespace detail {

inline constexpr double kLogSpan = 200.0;

/// Unit panels on [lo, hi] with the kinks inserted as extra nodes.
inline std::vector<double> log_panels(double lo, double hi, const std::vector<double>& kinks) {
  std::vector<double> x;
  for (double t = lo; t < hi; t += 1.0) x.push_back(t);
  x.push_back(hi);
  for (double k : kinks)
    if (k > lo && k < hi) x.push_back(k);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace detail

/// Both sides of the Hardy inequality for one φ, in log variables r = e^t:
/// LHS^q = ∫ G(u)^q e^u du with G(u) = ∫_u^T φ(e^t) e^{(α+1)t} dt, RHS^q = ∫ φ^q e^{(q(α+1)+1)t} dt.
inline std::pair<double, double> hardy_sides(const HardyParams& p, const HardyFunction& fn) {
  const double q = p.q, al = p.alpha;
  const bool near = p.hardy_case == HardyCase::IINear;
  const double T = near ? std::log(p.a) : detail::kLogSpan;
  const double Tr = near ? std::log(2.0 * p.a) : detail::kLogSpan;
  const double lo = -detail::kLogSpan;
  auto psi = [&](double t) { return std::exp(fn.log_phi(t) + (al + 1.0) * t); };
  auto right = [&](double t) { return std::exp(q * fn.log_phi(t) + (q * (al + 1.0) + 1.0) * t); };

  const auto nodes = detail::log_panels(lo, T, fn.kinks);
  const std::size_t m = nodes.size();
  std::vector<double> tail(m, 0.0);  // G at the nodes
  for (std::size_t k = m - 1; k-- > 0;) tail[k] = tail[k + 1] + quad::tanh_sinh(psi, nodes[k], nodes[k + 1]);
  double L = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double b = nodes[k + 1], gb = tail[k + 1];
    L += quad::tanh_sinh(
        [&](double u) {
          const double G = gb + quad::gauss_fixed(psi, u, b);
          return (G > 0.0 ? std::pow(G, q) : 0.0) * std::exp(u);
        },
        nodes[k], b);
  }
  double R = 0.0;
  const auto rn = detail::log_panels(lo, Tr, fn.kinks);
  for (std::size_t k = 0; k + 1 < rn.size(); ++k) R += quad::tanh_sinh(right, rn[k], rn[k + 1]);
  return {std::pow(L, 1.0 / q), std::pow(R, 1.0 / q)};
}

inline VerificationReport verify_hardy(const HardyParams& p) {
  check_hardy_params(p);
  VerificationReport r("hardy");
  r.seed = p.seed;
  r.params["case"] = to_string(p.hardy_case);
  r.params["q"] = p.q;
  r.params["alpha"] = p.alpha;
  if (p.hardy_case != HardyCase::I) r.params["k"] = p.k;
  if (p.hardy_case == HardyCase::IINear) r.params["a"] = p.a;
  r.params["count"] = p.count;
  double cmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.count; ++i) {
    Rng rng = Rng::derive(p.seed, static_cast<std::uint64_t>(i));
    HardyFunction fn = hardy_member(p, rng);
    if (i == 0) r.params["family"] = fn.name;
    if (p.hardy_case != HardyCase::I) {
      // Sandwich check of the quasi-increasing hypothesis on a log grid.
      const double top = p.hardy_case == HardyCase::IINear ? 2.0 * p.a : 1e3;
      std::vector<double> phi;
      for (int j = 0; j <= 4000; ++j) phi.push_back(fn(top * std::exp(-20.0 + 20.0 * j / 4000.0)));
      auto env = monotone_envelope(phi, p.k);
      if (!env.sandwich)
        throw Error(Errc::QuasiIncreasingViolation, "test function " + std::to_string(i) + " has envelope ratio " +
                                                        std::to_string(env.max_ratio) + " > k");
    }
    auto [lhs, rhs] = hardy_sides(p, fn);
    r.add(fn.name + " " + std::to_string(i), {}, 0.0, lhs, rhs);
    cmin = std::min(cmin, safe_ratio(lhs, rhs));
  }
  r.c_star = r.max_ratio();
  r.params["min_ratio"] = wlab::detail::num(cmin);
  r.pass = std::isfinite(r.c_star);
  return r;
}

// ------------------------------------------------------------ telescope

inline double telescope_constant(int n, bool absolute) { return std::ldexp(1.0, 2 * n + (absolute ? 3 : 2)); }

inline constexpr double kQuadratureAllowance = 0.10;

/// Mean-oscillation integral ∫_r^R ⨍_{B_ρ}|f − ⟨f⟩_{B_ρ}| dρ/ρ on log panels.
inline double oscillation_integral(const GridField& f, const BallProfile& prof, double r, double R, int panels = 24) {
  if (!(r < R)) return 0.0;
  RadialQuadrature q(r, R, panels);
  double s = 0.0;
  for (int j = 0; j < q.size(); ++j) {
    auto cells = prof.prefix(q.radii()[j]);
    if (cells.empty()) continue;
    auto m = mean_over(f, cells);
    s += deviation_over(f, cells, m, 1.0) * q.weights()[j];
  }
  return s;
}

/// Ratios for both telescoping bounds at one (x, r, R). Samples carry the
/// observed constants lhs/integral; the report passes when they stay within the
/// explicit constants plus the quadrature allowance.
inline VerificationReport verify_telescope(const GridField& f, const Point& x, double r, double R) {
  const GridGeometry& g = f.geometry();
  check_ball(g, Ball{x, R});
  check_ball(g, Ball{x, r});
  if (r < 2.0 * g.max_spacing() * (1.0 - 1e-12) || r > R)
    throw Error(Errc::InvalidArgument, "telescope needs 2h <= r <= R");
  VerificationReport rep("telescope");
  const int n = g.dim();
  rep.params["C_tele1"] = telescope_constant(n, false);
  rep.params["C_tele2"] = telescope_constant(n, true);
  rep.params["allowance"] = kQuadratureAllowance;
  BallProfile prof(g, x, R);
  const double I = oscillation_integral(f, prof, r, R);
  auto cr = cells_in_ball(g, Ball{x, r});
  auto cR = cells_in_ball(g, Ball{x, R});
  auto mr = mean_over(f, cr), mR = mean_over(f, cR);
  double d2 = 0.0;
  for (std::size_t c = 0; c < mr.size(); ++c) d2 += (mr[c] - mR[c]) * (mr[c] - mR[c]);
  std::vector<double> zero(mr.size(), 0.0);
  const double ar = deviation_over(f, cr, zero, 1.0), aR = deviation_over(f, cR, zero, 1.0);
  rep.add("tele1", x, r, std::sqrt(d2), I);
  rep.add("tele2", x, r, std::abs(ar - aR), I);
  rep.c_star = rep.max_ratio();
  const double lim = 1.0 + kQuadratureAllowance;
  rep.pass = rep.max_ratio("tele1") <= telescope_constant(n, false) * lim &&
             rep.max_ratio("tele2") <= telescope_constant(n, true) * lim;
  return rep;
}

struct TelescopeFamilyParams {
  int cells = 128;
  int count = 100;
  std::uint64_t seed = 1;
  double R = 0.25;
  int ratios = 4;  ///< r = R/2, ..., R/2^ratios (kept >= 2h)
};

/// verify_telescope over seeded random smooth fields with random interior centres.
inline VerificationReport verify_telescope_family(const TelescopeFamilyParams& p) {
  const auto g = GridGeometry::square(p.cells);
  VerificationReport rep("telescope");
  rep.seed = p.seed;
  const int n = g.dim();
  rep.params["cells"] = p.cells;
  rep.params["count"] = p.count;
  rep.params["R"] = p.R;
  rep.params["C_tele1"] = telescope_constant(n, false);
  rep.params["C_tele2"] = telescope_constant(n, true);
  rep.params["allowance"] = kQuadratureAllowance;
  std::vector<VerificationReport> parts(static_cast<std::size_t>(p.count));
  parallel_for(parts.size(), [&](std::size_t i) {
    Rng rng = Rng::derive(p.seed, i);
    const GridField f = sample_scalar(g, random_bumps(rng, g));
    Point x(n);
    for (int a = 0; a < n; ++a) x[a] = rng.uniform(p.R + 2.0 * g.spacing(a), 1.0 - p.R - 2.0 * g.spacing(a));
    x = g.center(g.locate(x));
    VerificationReport acc("telescope");
    acc.pass = true;
    double r = p.R;
    for (int k = 0; k < p.ratios; ++k) {
      r *= 0.5;
      if (r < 2.0 * g.max_spacing()) break;
      auto one = verify_telescope(f, x, r, p.R);
      for (auto& s : one.samples) {
        s.label += " field " + std::to_string(i);
        acc.samples.push_back(s);
      }
      acc.pass = acc.pass && one.pass;
    }
    parts[i] = std::move(acc);
  });
  rep.pass = true;
  for (auto& part : parts) {
    for (auto& s : part.samples) rep.samples.push_back(std::move(s));
    rep.pass = rep.pass && part.pass;
  }
  rep.c_star = rep.max_ratio();
  rep.params["max_tele1"] = wlab::detail::num(rep.max_ratio("tele1"));
  rep.params["max_tele2"] = wlab::detail::num(rep.max_ratio("tele2"));
  return rep;
}

}  // namespace wlab::lab
