#pragma once

// Sup-type norms over sampled balls: Campanato seminorms, Morrey norms, BMO.

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/parallel.hpp"
#include "wulff_lab/weights.hpp"

namespace wlab {

inline constexpr int kCenterStride = 4;

struct SupResult {
  double value = 0.0;
  Ball argmax;
  std::size_t balls = 0;
};

struct BallSampling {
  int stride = kCenterStride;
  double r_min = 0.0;  ///< 0 means 2h
  double r_max = 0.0;  ///< 0 means the largest admissible
};

/// Centers on the stride sublattice, dyadic radii r_min·2^j; every ball contained in Ω.
template <class Fn>
SupResult ball_sup(const GridGeometry& g, const BallSampling& smp, Fn&& value) {
  const int n = g.dim();
  const double h = g.max_spacing();
  const double r0 = smp.r_min > 0.0 ? smp.r_min : 2.0 * h;
  double side = g.extent(0);
  for (int a = 1; a < n; ++a) side = std::min(side, g.extent(a));
  const double rcap = smp.r_max > 0.0 ? std::min(smp.r_max, 0.5 * side) : 0.5 * side;
  std::vector<double> radii;
  for (double r = r0; r <= rcap * (1.0 + 1e-12); r *= 2.0) radii.push_back(r);

  std::vector<std::size_t> centers;
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx) {
    auto m = g.multi_index(idx);
    bool on = true;
    for (int a = 0; a < n; ++a) on = on && (m[a] % smp.stride == smp.stride / 2);
    if (on) centers.push_back(idx);
  }

  std::vector<SupResult> part(centers.size());
  parallel_for(centers.size(), [&](std::size_t k) {
    const Point x = g.center(centers[k]);
    SupResult& best = part[k];
    best.value = -1.0;
    for (double r : radii) {
      if (r < h || !g.contains_ball(x, r)) continue;
      Ball b{x, r};
      const double v = value(b);
      ++best.balls;
      if (v > best.value) {
        best.value = v;
        best.argmax = b;
      }
    }
  });
  SupResult out;
  out.value = -1.0;
  for (const auto& p : part) {
    out.balls += p.balls;
    if (p.balls > 0 && p.value > out.value) {
      out.value = p.value;
      out.argmax = p.argmax;
    }
  }
  if (out.balls == 0) throw Error(Errc::NoAdmissibleBalls, "no sampled ball fits inside the domain");
  return out;
}

/// sup_B (1/ω(r)) (⨍_B |f − ⟨f⟩_B|^q)^{1/q}. `w` is a WeightFunction or any
/// callable r ↦ ω(r).
template <class W>
SupResult campanato_seminorm(const GridField& f, const W& w, double q = 1.0, const BallSampling& smp = {}) {
  if (!(q >= 1.0)) throw Error(Errc::InadmissibleParams, "Campanato exponent must be >= 1");
  return ball_sup(f.geometry(), smp, [&](const Ball& b) { return ball_oscillation(f, b, q) / w(b.radius); });
}

inline SupResult bmo_seminorm(const GridField& f, const BallSampling& smp = {}) {
  return campanato_seminorm(f, WeightFunction::constant(1.0), 1.0, smp);
}

/// sup_B (1/ω(r)) (∫_B |f|^q)^{1/q}, with |B| the cell-count measure.
inline SupResult morrey_norm(const GridField& f, const WeightFunction& w, double q = 1.0,
                             const BallSampling& smp = {}) {
  if (!(q >= 1.0)) throw Error(Errc::InadmissibleParams, "Morrey exponent must be >= 1");
  const double cell = f.geometry().cell_volume();
  return ball_sup(f.geometry(), smp, [&](const Ball& b) {
    double s = 0.0;
    for_each_cell_in_ball(f.geometry(), b.center, b.radius, [&](std::size_t i, double) {
      s += std::pow(f.magnitude(i), q);
    });
    return std::pow(s * cell, 1.0 / q) / w(b.radius);
  });
}

/// Running supremum ψ_i = max_{j <= i} φ_j and the sandwich φ <= ψ <= kφ.
struct Envelope {
  std::vector<double> psi;
  double max_ratio = 1.0;  ///< max ψ/φ over samples with φ > 0
  bool sandwich = true;
};

inline Envelope monotone_envelope(const std::vector<double>& phi, double k) {
  if (!(k >= 1.0)) throw Error(Errc::InadmissibleParams, "quasi-increasing constant must be >= 1");
  Envelope e;
  e.psi.resize(phi.size());
  double run = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    run = std::max(run, phi[i]);
    e.psi[i] = run;
    if (phi[i] > 0.0) e.max_ratio = std::max(e.max_ratio, run / phi[i]);
    else if (run > 0.0) e.max_ratio = std::numeric_limits<double>::infinity();
  }
  e.sandwich = e.max_ratio <= k * (1.0 + 1e-12);
  return e;
}

}  // namespace wlab
