#pragma once

// Pointwise domination of the Wulff potential by the Havin-Maz'ya potential,
// and the Lorentz / Orlicz mapping properties of V_{α,s}.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/lab/common.hpp"
#include "wulff_lab/parallel.hpp"
#include "wulff_lab/potential.hpp"
#include "wulff_lab/random.hpp"
#include "wulff_lab/rearrangement.hpp"
#include "wulff_lab/report.hpp"
#include "wulff_lab/young.hpp"

namespace wlab::lab {

struct DominationParams {
  double alpha = 0.5;
  double s = 3.0;
  int count = 100;
  int cells = 64;  ///< coarse level; the fine level doubles it
  std::uint64_t seed = 1;
  double band = 0.10;
  int per_axis = 3;
};

namespace detail {

inline GridField nonnegative_member(const GridGeometry& g, std::uint64_t seed, std::size_t i) {
  Rng rng = Rng::derive(seed, i);
  BumpOptions opt;
  opt.nonnegative = true;
  return sample_scalar(g, random_bumps(rng, g, opt));
}

inline VerificationReport domination_level(const DominationParams& p, int cells) {
  const auto g = GridGeometry::square(cells);
  const auto xs = interior_samples(g, p.per_axis, 0.25);
  VerificationReport r("domination");
  r.seed = p.seed;
  std::vector<std::vector<SampleRecord>> parts(static_cast<std::size_t>(p.count));
  // The fine level is dominated by riesz_field, which is itself parallel.
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const GridField f = nonnegative_member(g, p.seed, i);
    const HavinMazya V(f, p.alpha, p.s);
    auto& out = parts[i];
    out.resize(2 * xs.size());
    parallel_for(xs.size(), [&](std::size_t k) {
      const double w = wulff_potential_whole_space(f, p.alpha, p.s, xs[k]);
      const double v = V(xs[k]);
      const std::string tag = " field " + std::to_string(i);
      out[2 * k] = {"dis" + tag, xs[k], 0.0, w, v, safe_ratio(w, v)};
      out[2 * k + 1] = {"rev" + tag, xs[k], 0.0, v, w, safe_ratio(v, w)};
    });
  }
  for (auto& part : parts)
    for (auto& s : part) r.samples.push_back(std::move(s));
  r.c_star = r.max_ratio("dis");
  r.params["reverse_max_ratio"] = wlab::detail::num(r.max_ratio("rev"));
  r.pass = std::isfinite(r.c_star);
  return r;
}

}  // namespace detail

/// W_{α,s} f(x) <= C V_{α,s} f(x) over seeded nonnegative fields at h and h/2.
inline VerificationReport verify_domination(const DominationParams& p) {
  if (!(p.s > 1.0) || !(p.alpha > 0.0) || !(p.alpha * p.s < 2.0))
    throw Error(Errc::InadmissibleParams, "domination needs s > 1 and 0 < alpha*s < n");
  auto coarse = detail::domination_level(p, p.cells);
  auto fine = detail::domination_level(p, 2 * p.cells);
  auto r = combine_levels(coarse, fine, 1.0 / p.cells, 0.5 / p.cells, p.band);
  r.params["alpha"] = p.alpha;
  r.params["s"] = p.s;
  r.params["count"] = p.count;
  r.params["cells"] = p.cells;
  r.params["reverse_max_ratio_coarse"] = coarse.params["reverse_max_ratio"];
  r.note("whole-space W uses the zero extension of f outside the grid box");
  r.note("V integrates its outer Riesz potential over the grid box only");
  r.note("the reverse ratio V/W is measured, not asserted");
  return r;
}

// ----------------------------------------------------- norm inequalities

enum class NormPart { Lorentz, LogEndpoint, LinfEndpoint, Orlicz };

inline NormPart parse_norm_part(const std::string& s) {
  if (s == "lorentz") return NormPart::Lorentz;
  if (s == "log-endpoint") return NormPart::LogEndpoint;
  if (s == "linf-endpoint") return NormPart::LinfEndpoint;
  if (s == "orlicz") return NormPart::Orlicz;
  throw Error(Errc::InvalidArgument, "unknown norm part '" + s + "' (lorentz, log-endpoint, linf-endpoint, orlicz)");
}

inline const char* to_string(NormPart p) {
  switch (p) {
    case NormPart::Lorentz: return "lorentz";
    case NormPart::LogEndpoint: return "log-endpoint";
    case NormPart::LinfEndpoint: return "linf-endpoint";
    case NormPart::Orlicz: return "orlicz";
  }
  return "?";
}

struct NormMapParams {
  NormPart part = NormPart::Lorentz;
  double alpha = 0.5;
  double s = 3.0;
  double sigma = 1.2;  ///< source Lorentz index for the lorentz part
  double rho = 2.0;    ///< source second index
  std::string A = "power:1.2";
  std::string B = "power:12";
  int cells = 64;
  int count = 30;
  std::uint64_t seed = 1;
};

/// Source and target spaces prescribed for the Lorentz parts.
struct LorentzMap {
  LorentzParams source, target;
};

inline LorentzMap lorentz_map(const NormMapParams& p, int n) {
  const double as = p.alpha * p.s;
  LorentzMap m;
  switch (p.part) {
    case NormPart::Lorentz:
      if (!(p.sigma > 1.0 && p.sigma < n / as))
        throw Error(Errc::InadmissibleParams, "the Lorentz part needs 1 < sigma < n/(alpha s)");
      m.source = {p.sigma, p.rho, 0.0};
      m.target = {p.sigma * n * (p.s - 1.0) / (n - p.sigma * as), p.rho * (p.s - 1.0), 0.0};
      break;
    case NormPart::LogEndpoint:
      if (!(p.rho > 1.0 / (p.s - 1.0)))
        throw Error(Errc::InadmissibleParams, "the logarithmic endpoint needs rho > 1/(s-1)");
      m.source = {n / as, p.rho, 0.0};
      m.target = {kInf, p.rho * (p.s - 1.0), -1.0};
      break;
    case NormPart::LinfEndpoint:
      if (!(p.rho > 0.0 && p.rho <= 1.0 / (p.s - 1.0)))
        throw Error(Errc::InadmissibleParams, "the L-infinity endpoint needs 0 < rho <= 1/(s-1)");
      m.source = {n / as, p.rho, 0.0};
      m.target = {kInf, kInf, 0.0};
      break;
    case NormPart::Orlicz: throw Error(Errc::InvalidArgument, "the Orlicz part has no Lorentz map");
  }
  return m;
}

/// Test family: random nonnegative bumps, then truncated |x − x0|^{−γ} with
/// γ cycling through {0.25, 0.5, 0.75, 1}.
inline GridField norm_member(const GridGeometry& g, std::uint64_t seed, std::size_t i) {
  if (i % 2 == 0) return detail::nonnegative_member(g, seed, i);
  static constexpr double kGammas[] = {0.25, 0.5, 0.75, 1.0};
  Rng rng = Rng::derive(seed, i);
  const double gamma = kGammas[(i / 2) % 4];
  Point x0(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    x0[a] = g.origin(a) + h * std::round(rng.uniform(0.25, 0.75) * g.cells(a));
  }
  const double floor_r = g.max_spacing();
  return GridField::scalar(g, [&](const Point& x) {
    double d2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) d2 += (x[a] - x0[a]) * (x[a] - x0[a]);
    return std::pow(std::max(std::sqrt(d2), floor_r), -gamma);
  });
}

namespace detail {

/// Full-grid V_{α,s} f.
inline GridField havin_mazya_field(const GridField& f, double alpha, double s) {
  const HavinMazya V(f, alpha, s);
  return riesz_field(V.inner(), alpha);
}

inline GridField scaled(const GridField& f, double lambda) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& t : v) t *= lambda;
  return GridField(f.geometry(), f.shape(), f.rows(), std::move(v));
}

}  // namespace detail

/// Norm inequalities for V_{α,s}: the three Lorentz parts compare
/// ‖V f‖_target with ‖f‖_source^{1/(s−1)}; the Orlicz part compares
/// ‖(V f)^{s−1}‖_{L^B} with ‖f‖_{L^A} under the balance condition.
inline VerificationReport verify_potential_norms(const NormMapParams& p) {
  const auto g = GridGeometry::square(p.cells);
  const int n = g.dim();
  if (!(p.s > 1.0) || !(p.alpha > 0.0) || !(p.alpha * p.s < n))
    throw Error(Errc::InadmissibleParams, "norm maps need s > 1 and 0 < alpha*s < n");
  VerificationReport r("potential-norms");
  r.seed = p.seed;
  r.params["part"] = to_string(p.part);
  r.params["alpha"] = p.alpha;
  r.params["s"] = p.s;
  r.params["cells"] = p.cells;
  r.params["count"] = p.count;
  const double e = 1.0 / (p.s - 1.0);

  std::function<std::pair<double, double>(const GridField&)> sides;
  LorentzMap lm;
  std::optional<YoungFunction> A, B;
  if (p.part == NormPart::Orlicz) {
    if (!(p.alpha < n - n / p.s)) throw Error(Errc::InadmissibleParams, "the Orlicz part needs alpha < n/s'");
    A = YoungFunction::parse(p.A);
    B = YoungFunction::parse(p.B);
    const YoungTransforms T(*A, *B, p.alpha, p.s, n);
    const auto bal = balance_report(T);
    r.params["A"] = A->name();
    r.params["B"] = B->name();
    r.params["balance_gamma"] = wlab::detail::num(bal.gamma);
    if (!bal.satisfiable) throw Error(Errc::InadmissibleParams, "A and B violate the balance condition: " + bal.reason);
    sides = [&](const GridField& f) {
      const GridField V = detail::havin_mazya_field(f, p.alpha, p.s);
      std::vector<double> v(V.values().begin(), V.values().end());
      for (double& t : v) t = std::pow(t, p.s - 1.0);
      const GridField Vs(V.geometry(), Shape::Scalar, 1, std::move(v));
      return std::pair{luxemburg_norm(Vs, *B), luxemburg_norm(f, *A)};
    };
  } else {
    lm = lorentz_map(p, n);
    r.params["source"] = {wlab::detail::num(lm.source.q), wlab::detail::num(lm.source.rho), lm.source.beta};
    r.params["target"] = {wlab::detail::num(lm.target.q), wlab::detail::num(lm.target.rho), lm.target.beta};
    sides = [&](const GridField& f) {
      const GridField V = detail::havin_mazya_field(f, p.alpha, p.s);
      const double lhs = lorentz_zygmund_norm(V, lm.target);
      return std::pair{lhs, wlab::detail::pow_avg(lorentz_zygmund_norm(f, lm.source), e)};
    };
  }

  for (int i = 0; i < p.count; ++i) {
    const GridField f = norm_member(g, p.seed, static_cast<std::size_t>(i));
    auto [lhs, rhs] = sides(f);
    r.add((i % 2 == 0 ? "bump " : "power ") + std::to_string(i), {}, 0.0, lhs, rhs);
  }
  r.c_star = r.max_ratio();
  r.pass = std::isfinite(r.c_star);

  if (p.part != NormPart::Orlicz && p.count > 0) {
    // Both sides are (1/(s−1))-homogeneous in f.
    const GridField f = norm_member(g, p.seed, 0);
    const double lam = 3.0;
    auto [l1, r1] = sides(f);
    auto [l2, r2] = sides(detail::scaled(f, lam));
    const double defect = std::abs(safe_ratio(l2, r2) / safe_ratio(l1, r1) - 1.0);
    r.params["scaling_defect"] = defect;
    r.pass = r.pass && defect <= 1e-10;
  }
  return r;
}

}  // namespace wlab::lab
