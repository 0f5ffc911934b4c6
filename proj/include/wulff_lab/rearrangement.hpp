#pragma once

// Decreasing rearrangements of sampled fields and the rearrangement-invariant
// quasi-norms computed from them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/quad1d.hpp"

namespace wlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Step function |f|^* on (0, |Ω|]: value v_i on (s_i, s_{i+1}].
struct Rearrangement {
  std::vector<double> edges;   ///< s_0 = 0 < s_1 < ... < s_k = |Ω|
  std::vector<double> values;  ///< v_0 > v_1 > ... >= 0

  double measure() const { return edges.empty() ? 0.0 : edges.back(); }
  std::size_t steps() const { return values.size(); }

  /// f^*(s) with the right-continuous convention at breakpoints.
  double operator()(double s) const {
    auto it = std::upper_bound(edges.begin(), edges.end(), s);
    if (it == edges.begin()) return values.empty() ? 0.0 : values.front();
    std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
    return i < values.size() ? values[i] : 0.0;
  }
};

/// Builds a rearrangement from per-cell magnitudes of equal measure `cell`.
inline Rearrangement rearrange_samples(std::vector<double> mags, double cell) {
  std::sort(mags.begin(), mags.end(), std::greater<>());
  Rearrangement r;
  r.edges.push_back(0.0);
  std::size_t i = 0;
  while (i < mags.size()) {
    std::size_t j = i;
    while (j < mags.size() && mags[j] == mags[i]) ++j;
    r.values.push_back(mags[i]);
    r.edges.push_back(static_cast<double>(j) * cell);
    i = j;
  }
  return r;
}

inline Rearrangement rearrange(const GridField& f) {
  std::vector<double> mags(f.cell_count());
  for (std::size_t c = 0; c < mags.size(); ++c) mags[c] = f.magnitude(c);
  return rearrange_samples(std::move(mags), f.geometry().cell_volume());
}

/// ‖f‖_{L^q(Ω)} from samples, q ∈ (0, ∞].
inline double lebesgue_norm(const GridField& f, double q) {
  if (!(q > 0.0)) throw Error(Errc::InadmissibleParams, "Lebesgue exponent must be positive");
  double s = 0.0;
  if (std::isinf(q)) {
    for (std::size_t c = 0; c < f.cell_count(); ++c) s = std::max(s, f.magnitude(c));
    return s;
  }
  for (std::size_t c = 0; c < f.cell_count(); ++c) s += std::pow(f.magnitude(c), q);
  return std::pow(s * f.geometry().cell_volume(), 1.0 / q);
}

struct LorentzParams {
  double q = 2.0;
  double rho = 2.0;
  double beta = 0.0;
};

inline void check_lorentz(const LorentzParams& p) {
  bool a = p.q > 1.0 && p.rho > 0.0 && std::isfinite(p.beta);
  bool b = p.q == 1.0 && p.rho > 0.0 && p.rho <= 1.0 && p.beta >= 0.0;
  if (!(a || b))
    throw Error(Errc::InadmissibleParams, "Lorentz-Zygmund indices need q in (1,inf], rho in (0,inf], or q = 1, "
                                          "rho in (0,1], beta >= 0");
}

namespace detail {

/// ∫_a^b s^{κ−1} (1 + log(M/s))^γ ds for 0 <= a < b <= M.
inline double lz_weight_integral(double a, double b, double kappa, double gamma, double M) {
  auto L = [&](double s) { return 1.0 + std::log(M / s); };
  if (gamma == 0.0) {
    if (kappa > 0.0) return (std::pow(b, kappa) - std::pow(a, kappa)) / kappa;
    return a > 0.0 ? std::log(b / a) : kInf;
  }
  if (kappa == 0.0) {
    const double lb = L(b);
    if (a == 0.0) {
      if (gamma < -1.0) return -std::pow(lb, gamma + 1.0) / (gamma + 1.0);
      return kInf;
    }
    const double la = L(a);
    if (gamma == -1.0) return std::log(la / lb);
    return (std::pow(la, gamma + 1.0) - std::pow(lb, gamma + 1.0)) / (gamma + 1.0);
  }
  // s = M e^{1−t}: ds = −s dt, so the integrand becomes M^κ e^{κ(1−t)} t^γ.
  const double tb = L(b);
  const double ta = a > 0.0 ? L(a) : kInf;
  const double Mk = std::pow(M, kappa);
  auto g = [&](double t) { return Mk * std::exp(kappa * (1.0 - t)) * std::pow(t, gamma); };
  if (std::isinf(ta)) return quad::exp_sinh(g, tb);
  return quad::gauss_kronrod(g, tb, ta);
}

}  // namespace detail

/// ‖s^{1/q − 1/ϱ}(1 + log(|Ω|/s))^β f^*(s)‖_{L^ϱ(0,|Ω|)}, integrated exactly over
/// the steps of the rearrangement.
inline double lorentz_zygmund_norm(const Rearrangement& r, const LorentzParams& p) {
  check_lorentz(p);
  const double M = r.measure();
  const double invq = std::isinf(p.q) ? 0.0 : 1.0 / p.q;
  if (std::isinf(p.rho)) {
    // sup of w(s) f^*(s), w(s) = s^{1/q} (1 + log(M/s))^β.
    auto w = [&](double s) {
      if (s <= 0.0) {
        if (invq > 0.0) return 0.0;
        return p.beta > 0.0 ? kInf : (p.beta < 0.0 ? 0.0 : 1.0);
      }
      return std::pow(s, invq) * std::pow(1.0 + std::log(M / s), p.beta);
    };
    const double s_crit = (p.beta > 0.0 && invq > 0.0) ? M * std::exp(1.0 - p.beta * p.q) : -1.0;
    double best = 0.0;
    for (std::size_t i = 0; i < r.steps(); ++i) {
      const double v = r.values[i];
      if (v == 0.0) continue;
      const double a = r.edges[i], b = r.edges[i + 1];
      double m = std::max(w(a), w(b));
      if (s_crit > a && s_crit < b) m = std::max(m, w(s_crit));
      best = std::max(best, v * m);
    }
    return best;
  }
  const double kappa = p.rho * invq;
  const double gamma = p.beta * p.rho;
  double total = 0.0;
  for (std::size_t i = 0; i < r.steps(); ++i) {
    const double v = r.values[i];
    if (v == 0.0) continue;
    total += std::pow(v, p.rho) * detail::lz_weight_integral(r.edges[i], r.edges[i + 1], kappa, gamma, M);
  }
  return std::pow(total, 1.0 / p.rho);
}

inline double lorentz_zygmund_norm(const GridField& f, const LorentzParams& p) {
  check_lorentz(p);
  return lorentz_zygmund_norm(rearrange(f), p);
}

}  // namespace wlab
