#pragma once

// Pointwise and oscillation estimates for weak solutions, and the energy
// inequalities (reverse Hölder, Caccioppoli, interpolation).

#include <cmath>
#include <string>
#include <vector>

#include "wulff_lab/field.hpp"
#include "wulff_lab/lab/common.hpp"
#include "wulff_lab/lab/pairs.hpp"
#include "wulff_lab/potential.hpp"
#include "wulff_lab/radial.hpp"
#include "wulff_lab/report.hpp"

namespace wlab::lab {

struct EstimateOptions {
  double R = 0.25;
  double tol = 1e-6;  ///< residual gate
  int radii = 4;      ///< dyadic radii for the oscillation estimate
  int panels = kDefaultPanels;
};

namespace detail {

inline double cell_magnitude(const GridField& u, const Point& x) { return u.magnitude(u.geometry().locate(x)); }

/// ⨍_{B_r(x)} |u − u(x)|.
inline double lebesgue_average(const GridField& u, const Point& x, double r) {
  const std::size_t c = u.geometry().locate(x);
  auto cells = cells_in_ball(u.geometry(), Ball{x, r});
  return deviation_over(u, cells, u.at(c), 1.0);
}

/// (⨍_{B_ρ(x)} |F − ⟨F⟩|^{p'})^{1/p'} from a profile prefix.
inline double osc_pp(const GridField& F, const BallProfile& prof, double rho, double pp) {
  auto cells = prof.prefix(rho);
  if (cells.empty()) return 0.0;
  auto m = mean_over(F, cells);
  return deviation_over(F, cells, m, pp);
}

inline void base_params(VerificationReport& r, const GridField& u, double p, const EstimateOptions& o) {
  r.params["p"] = p;
  r.params["R"] = o.R;
  r.params["h"] = u.geometry().max_spacing();
  r.params["cells"] = u.geometry().cells();
}

}  // namespace detail

/// |u(x)| <= C [W^R_{p/(p+1),p+1}(|F|^{p'})(x) + ⨍_{B_R(x)} |u|].
inline VerificationReport verify_pointwise(const GridField& u, const GridField& F, double p,
                                           const std::vector<Point>& xs, const EstimateOptions& o = {},
                                           bool lipschitz_class = false) {
  VerificationReport r("pointwise");
  detail::base_params(r, u, p, o);
  r.params["residual"] = require_weak_solution(u, F, p, o.tol);
  const double pp = p / (p - 1.0);
  const GridField Fp = magnitude_field(F, pp);
  const GridField du = magnitude_field(gradient(u));
  const PotentialParams prm{p / (p + 1.0), p + 1.0, o.R};
  bool leb_ok = true;
  for (const auto& x : xs) {
    const double lhs = detail::cell_magnitude(u, x);
    const double w = wulff_potential(Fp, prm, x, o.panels);
    const double avg = ball_mean_magnitude(u, Ball{x, o.R});
    r.add("pt", x, o.R, lhs, w + avg);
    // Averaged Lebesgue-point check along dyadic radii.
    double lip = 0.0;
    for_each_cell_in_ball(u.geometry(), x, o.R, [&](std::size_t i, double) { lip = std::max(lip, du.values()[i]); });
    for (double rr : dyadic_radii(o.R, 2.0 * u.geometry().max_spacing())) {
      const double la = detail::lebesgue_average(u, x, rr);
      r.add("leb", x, rr, la, rr);
      if (lipschitz_class && la > 1.1 * lip * rr + 1e-12) leb_ok = false;
    }
  }
  r.c_star = r.max_ratio("pt");
  r.note(kLebesgueNote);
  if (lipschitz_class) r.note(leb_ok ? "linear decay of the Lebesgue averages holds" : "Lebesgue averages decay slower than r");
  r.pass = std::isfinite(r.c_star) && leb_ok;
  return r;
}

/// |u(x)| <= C [∫_0^R (⨍_{B_ρ}|F − ⟨F⟩|^{p'})^{1/p} dρ + ⨍_{B_R(x)} |u|], plus
/// the per-sample comparison of the two potentials: osc <= 2^{1/(p−1)} W.
inline VerificationReport verify_pointwise_osc(const GridField& u, const GridField& F, double p,
                                               const std::vector<Point>& xs, const EstimateOptions& o = {}) {
  VerificationReport r("pointwise-osc");
  detail::base_params(r, u, p, o);
  r.params["residual"] = require_weak_solution(u, F, p, o.tol);
  const double pp = p / (p - 1.0);
  const double factor = std::pow(2.0, 1.0 / (p - 1.0));
  r.params["comparison_factor"] = factor;
  const GridField Fp = magnitude_field(F, pp);
  const PotentialParams prm{p / (p + 1.0), p + 1.0, o.R};
  bool cmp_ok = true;
  for (const auto& x : xs) {
    const double lhs = detail::cell_magnitude(u, x);
    const double osc = oscillation_potential(F, p, o.R, x, o.panels);
    const double avg = ball_mean_magnitude(u, Ball{x, o.R});
    r.add("pt", x, o.R, lhs, osc + avg);
    const double w = wulff_potential(Fp, prm, x, o.panels);
    r.add("cmp", x, o.R, osc, factor * w);
    if (osc > factor * w * (1.0 + 1e-12)) cmp_ok = false;
  }
  r.c_star = r.max_ratio("pt");
  r.note(kLebesgueNote);
  if (!cmp_ok) r.note("oscillation potential exceeds the scaled Wulff potential at some sample");
  r.pass = std::isfinite(r.c_star) && cmp_ok;
  return r;
}

/// ⨍_{B_r}|u − ⟨u⟩| <= C r [(∫_r^R (⨍_{B_ρ}|F − ⟨F⟩|^{p'})^{1/p'} dρ/ρ)^{1/(p−1)} + ⨍_{B_R}|∇u|]
/// for r = R, R/2, ... (o.radii values, all >= 2h).
inline VerificationReport verify_oscillation(const GridField& u, const GridField& F, double p,
                                             const std::vector<Point>& xs, const EstimateOptions& o = {}) {
  VerificationReport r("oscillation");
  detail::base_params(r, u, p, o);
  r.params["residual"] = require_weak_solution(u, F, p, o.tol);
  const GridGeometry& g = u.geometry();
  const double pp = p / (p - 1.0);
  const GridField du = gradient(u);
  auto radii = dyadic_radii(o.R, 2.0 * g.max_spacing(), o.radii);
  r.params["radii"] = radii;
  for (const auto& x : xs) {
    check_ball(g, Ball{x, o.R});
    BallProfile prof(g, x, o.R);
    const double grad_avg = ball_mean_magnitude(du, Ball{x, o.R});
    for (double rr : radii) {
      const double lhs = ball_oscillation(u, Ball{x, rr}, 1.0);
      double integral = 0.0;
      if (rr < o.R) {
        RadialQuadrature q(rr, o.R, 16);
        for (int j = 0; j < q.size(); ++j) integral += detail::osc_pp(F, prof, q.radii()[j], pp) * q.weights()[j];
      }
      const double rhs = rr * (wlab::detail::pow_avg(integral, 1.0 / (p - 1.0)) + grad_avg);
      r.add("osc", x, rr, lhs, rhs);
    }
  }
  r.c_star = r.max_ratio("osc");
  r.note(kLebesgueNote);
  r.pass = std::isfinite(r.c_star);
  return r;
}

/// Reverse Hölder, Caccioppoli and interpolation bounds on B = B_{R/2}(x), 2B = B_R(x).
inline VerificationReport verify_energy_inequalities(const GridField& u, const GridField& F, double p,
                                                     const std::vector<Point>& xs, const EstimateOptions& o = {}) {
  VerificationReport r("energy");
  detail::base_params(r, u, p, o);
  r.params["residual"] = require_weak_solution(u, F, p, o.tol);
  const GridGeometry& g = u.geometry();
  const int n = g.dim();
  const double pp = p / (p - 1.0);
  const double qi = p < n ? std::min(2.0, n / (n - p)) : 2.0;
  r.params["interpolation_q"] = qi;
  const GridField du = gradient(u);
  for (const auto& x : xs) {
    const Ball B{x, 0.5 * o.R}, B2{x, o.R};
    check_ball(g, B2);
    const double diam = o.R;
    const double fterm = std::pow(ball_oscillation(F, B2, pp), pp / p);
    const double grad_p = ball_mean_magnitude(du, B, p);
    r.add("revH", x, o.R, grad_p, ball_mean_magnitude(du, B2, 1.0) + fterm);
    r.add("cacc", x, o.R, grad_p, ball_oscillation(u, B2, p) / diam + fterm);
    r.add("revHu", x, o.R, ball_mean_magnitude(u, B, qi * p), ball_mean_magnitude(u, B2, 1.0) + diam * fterm);
  }
  r.params["C_revH"] = wlab::detail::num(r.max_ratio("revH"));
  r.params["C_cacc"] = wlab::detail::num(r.max_ratio("cacc"));
  r.params["C_revHu"] = wlab::detail::num(r.max_ratio("revHu"));
  r.c_star = r.max_ratio();
  r.pass = std::isfinite(r.c_star);
  return r;
}

/// Runs `verify` on the pair at `cells` and `2 cells` and records the trace.
template <class Verify>
VerificationReport refine_pair(const PairSpec& spec, int cells, double band, Verify&& verify) {
  const Pair c = build_pair(spec, cells);
  const Pair f = build_pair(spec, 2 * cells);
  auto rc = verify(c);
  auto rf = verify(f);
  auto out = combine_levels(rc, rf, c.u.geometry().max_spacing(), f.u.geometry().max_spacing(), band);
  out.params["pair"] = spec.kind;
  return out;
}

}  // namespace wlab::lab
