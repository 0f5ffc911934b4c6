#pragma once

// Nonlinear potentials of nonnegative scalar fields: Wulff (truncated and
// windowed whole-space), Riesz with zero extension, Havin-Maz'ya compositions,
// and the oscillation potential of a matrix field.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/parallel.hpp"
#include "wulff_lab/radial.hpp"

namespace wlab {

inline constexpr double kInfRadius = std::numeric_limits<double>::infinity();

struct PotentialParams {
  double alpha = 0.5;
  double s = 2.0;
  double R = kInfRadius;
};

/// |S^{n-1}| and |B_1| in ℝⁿ.
inline double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }
inline double unit_ball_volume(int n) { return sphere_area(n) / n; }

namespace detail {

inline void require_nonnegative_scalar(const GridField& f) {
  if (f.shape() != Shape::Scalar) throw Error(Errc::ShapeMismatch, "potential input must be a scalar field");
  for (double v : f.values())
    if (v < 0.0) throw Error(Errc::NonNegativityViolation, "potential input has a negative sample");
}

inline void check_wulff_params(const PotentialParams& p) {
  if (!(p.alpha > 0.0)) throw Error(Errc::InadmissibleParams, "alpha must be positive");
  if (!(p.s > 1.0)) throw Error(Errc::InadmissibleParams, "s must exceed 1");
  if (!(p.R > 0.0)) throw Error(Errc::InadmissibleParams, "R must be positive");
}

inline double pow_avg(double avg, double e) { return avg > 0.0 ? std::pow(avg, e) : 0.0; }

/// Lattice points (o + (i + 1/2) h) of the grid extended to all of ℤⁿ inside B_r(x).
inline double extended_lattice_count(const GridGeometry& g, const Point& x, double r, int axis, double rem2) {
  const double h = g.spacing(axis);
  const double o = g.origin(axis);
  if (rem2 < 0.0) return 0.0;
  const double w = std::sqrt(rem2);
  const long lo = static_cast<long>(std::ceil((x[axis] - w - o) / h - 0.5 - 1e-9));
  const long hi = static_cast<long>(std::floor((x[axis] + w - o) / h - 0.5 + 1e-9));
  double total = 0.0;
  for (long i = lo; i <= hi; ++i) {
    const double d = o + (static_cast<double>(i) + 0.5) * h - x[axis];
    const double left = rem2 - d * d;
    if (left < 0.0) continue;
    if (axis == 0)
      total += 1.0;
    else
      total += extended_lattice_count(g, x, r, axis - 1, left);
  }
  return total;
}

}  // namespace detail

/// Whole-space W_{α,s} with f continued by zero outside the grid box. Radii up
/// to the farthest box corner use the sampled profile; beyond it the ball holds
/// all the mass and the remaining radial integral is evaluated in closed form.
inline double wulff_potential_whole_space(const GridField& f, double alpha, double s, const Point& x,
                                          int panels = kDefaultPanels) {
  detail::require_nonnegative_scalar(f);
  detail::check_wulff_params({alpha, s, kInfRadius});
  const GridGeometry& g = f.geometry();
  const int n = g.dim();
  if (!(alpha * s < n)) throw Error(Errc::InadmissibleParams, "whole-space W needs alpha*s < n");
  const double e = 1.0 / (s - 1.0);
  const double k = alpha * s / (s - 1.0);
  const double vol = g.cell_volume();

  double dmax2 = 0.0;
  for (int a = 0; a < n; ++a) {
    double lo = x[a] - g.origin(a), hi = g.origin(a) + g.extent(a) - x[a];
    double m = std::max(std::abs(lo), std::abs(hi));
    dmax2 += m * m;
  }
  const double dmax = std::sqrt(dmax2);
  const double r_min = std::min(2.0 * g.max_spacing(), dmax);

  BallProfile prof(g, x, dmax);
  const auto cum = prof.cumulative(f.values());
  auto avg = [&](double r) {
    double cnt = detail::extended_lattice_count(g, x, r, n - 1, r * r * (1.0 + kGeomSlack));
    if (cnt <= 0.0) return 0.0;
    return cum[prof.count(r)] / cnt;
  };

  double total = detail::pow_avg(avg(r_min), e) * std::pow(r_min, k) / k;
  if (dmax > r_min) {
    RadialQuadrature q(r_min, dmax, panels);
    for (int j = 0; j < q.size(); ++j)
      total += detail::pow_avg(avg(q.radii()[j]), e) * (std::pow(q.upper(j), k) - std::pow(q.lower(j), k)) / k;
  }
  const double mass = cum.back() * vol;
  const double tail_exp = (alpha * s - n) / (s - 1.0);
  total += detail::pow_avg(mass / unit_ball_volume(n), e) * ((s - 1.0) / (n - alpha * s)) * std::pow(dmax, tail_exp);
  return total;
}

/// W^R_{α,s} f(x) = ∫₀^R (r^{αs} ⨍_{B_r(x)} f)^{1/(s−1)} dr/r.
///
/// Product integration: on each panel the average is frozen at the node and
/// r^{αs/(s−1)} dr/r is integrated exactly, so constant inputs are reproduced
/// exactly. On [0, 2h] the average at 2h is used.
inline double wulff_potential(const GridField& f, const PotentialParams& prm, const Point& x,
                              int panels = kDefaultPanels) {
  if (std::isinf(prm.R)) return wulff_potential_whole_space(f, prm.alpha, prm.s, x, panels);
  detail::require_nonnegative_scalar(f);
  detail::check_wulff_params(prm);
  const GridGeometry& g = f.geometry();
  check_ball(g, Ball{x, prm.R});
  const double e = 1.0 / (prm.s - 1.0);
  const double k = prm.alpha * prm.s / (prm.s - 1.0);

  BallProfile prof(g, x, prm.R);
  const auto cum = prof.cumulative(f.values());
  auto avg = [&](double r) {
    std::size_t c = prof.count(r);
    return c ? cum[c] / static_cast<double>(c) : 0.0;
  };
  const double r_min = 2.0 * g.max_spacing();
  if (prm.R <= r_min) return detail::pow_avg(avg(prm.R), e) * std::pow(prm.R, k) / k;

  double total = detail::pow_avg(avg(r_min), e) * std::pow(r_min, k) / k;
  RadialQuadrature q(r_min, prm.R, panels);
  for (int j = 0; j < q.size(); ++j)
    total += detail::pow_avg(avg(q.radii()[j]), e) * (std::pow(q.upper(j), k) - std::pow(q.lower(j), k)) / k;
  return total;
}

namespace detail {

inline void check_riesz_alpha(const GridGeometry& g, double alpha) {
  if (!(alpha > 0.0 && alpha < g.dim()))
    throw Error(Errc::AlphaOutOfRange, "Riesz order must lie in (0, n)");
}

/// ∫ over the inscribed ball of the self cell of |y|^{α−n}.
inline double self_cell_weight(const GridGeometry& g, double alpha) {
  const double rho = 0.5 * g.min_spacing();
  return sphere_area(g.dim()) * std::pow(rho, alpha) / alpha;
}

}  // namespace detail

/// I_α f(x) = ∫ f(y) |x − y|^{α−n} dy, f continued by zero outside the grid.
/// The cell containing x contributes f times the exact kernel integral over its
/// inscribed ball.
inline double riesz_potential(const GridField& f, double alpha, const Point& x) {
  detail::require_nonnegative_scalar(f);
  const GridGeometry& g = f.geometry();
  detail::check_riesz_alpha(g, alpha);
  const int n = g.dim();
  std::vector<long> i0(n);
  std::vector<double> delta(n);
  bool inside = true;
  for (int a = 0; a < n; ++a) {
    double t = (x[a] - g.origin(a)) / g.spacing(a) - 0.5;
    i0[a] = std::lround(t);
    delta[a] = t - static_cast<double>(i0[a]);
    if (std::abs(delta[a]) < 1e-9) delta[a] = 0.0;
    if (i0[a] < 0 || i0[a] >= g.cells(a)) inside = false;
  }
  const double vol = g.cell_volume();
  const double ex = 0.5 * (alpha - n);
  const std::size_t m = g.cell_count();
  auto vals = f.values();
  double total = 0.0;
  std::vector<int> idx(n, 0);
  for (std::size_t c = 0; c < m; ++c) {
    if (c) {
      for (int a = 0; a < n; ++a) {
        if (++idx[a] < g.cells(a)) break;
        idx[a] = 0;
      }
    }
    const double v = vals[c];
    if (v == 0.0) continue;
    bool self = inside;
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) {
      long off = i0[a] - idx[a];
      if (off != 0) self = false;
      double d = (static_cast<double>(off) + delta[a]) * g.spacing(a);
      d2 += d * d;
    }
    total += self ? v * detail::self_cell_weight(g, alpha) : v * std::pow(d2, ex) * vol;
  }
  return total;
}

/// I_α f at every cell centre of the grid. For n = 2 this is a kernel-table
/// convolution accumulated row by row.
inline GridField riesz_field(const GridField& f, double alpha) {
  detail::require_nonnegative_scalar(f);
  const GridGeometry& g = f.geometry();
  detail::check_riesz_alpha(g, alpha);
  const std::size_t m = g.cell_count();
  std::vector<double> out(m, 0.0);
  auto vals = f.values();
  if (g.dim() != 2) {
    parallel_for(m, [&](std::size_t i) { out[i] = riesz_potential(f, alpha, g.center(i)); });
    return GridField(g, Shape::Scalar, 1, std::move(out));
  }
  const int c0 = g.cells(0), c1 = g.cells(1);
  const int w0 = 2 * c0 - 1, w1 = 2 * c1 - 1;
  const double h0 = g.spacing(0), h1 = g.spacing(1);
  const double vol = g.cell_volume();
  const double ex = 0.5 * (alpha - 2.0);
  std::vector<double> K(static_cast<std::size_t>(w0) * w1);
  for (int b = 0; b < w1; ++b)
    for (int a = 0; a < w0; ++a) {
      double dx = (a - (c0 - 1)) * h0, dy = (b - (c1 - 1)) * h1;
      K[static_cast<std::size_t>(b) * w0 + a] = (a == c0 - 1 && b == c1 - 1)
                                                    ? detail::self_cell_weight(g, alpha)
                                                    : std::pow(dx * dx + dy * dy, ex) * vol;
    }
  // Rows of the output are independent; split them across workers.
  parallel_for(static_cast<std::size_t>(c1), [&](std::size_t row) {
    const int i1 = static_cast<int>(row);
    double* dst = out.data() + static_cast<std::size_t>(i1) * c0;
    for (int j1 = 0; j1 < c1; ++j1) {
      const double* krow = K.data() + static_cast<std::size_t>(i1 - j1 + c1 - 1) * w0;
      for (int j0 = 0; j0 < c0; ++j0) {
        const double v = vals[static_cast<std::size_t>(j1) * c0 + j0];
        if (v == 0.0) continue;
        const double* k = krow + (c0 - 1 - j0);
        for (int i0 = 0; i0 < c0; ++i0) dst[i0] += v * k[i0];
      }
    }
  });
  return GridField(g, Shape::Scalar, 1, std::move(out));
}

/// V_{α,s} f = I_α((I_α f)^{1/(s−1)}). The inner field is computed once on the
/// grid; the outer potential integrates over the grid box.
class HavinMazya {
 public:
  HavinMazya(const GridField& f, double alpha, double s) : alpha_(alpha), s_(s) {
    if (!(s > 1.0)) throw Error(Errc::InadmissibleParams, "s must exceed 1");
    if (!(alpha * s < f.geometry().dim()))
      throw Error(Errc::InadmissibleParams, "Havin-Maz'ya potential needs alpha*s < n");
    GridField inner = riesz_field(f, alpha);
    std::vector<double> v(inner.values().begin(), inner.values().end());
    const double e = 1.0 / (s - 1.0);
    for (double& t : v) t = detail::pow_avg(t, e);
    inner_ = GridField(f.geometry(), Shape::Scalar, 1, std::move(v));
  }

  double operator()(const Point& x) const { return riesz_potential(inner_, alpha_, x); }
  GridField field() const { return riesz_field(inner_, alpha_); }
  const GridField& inner() const { return inner_; }
  double alpha() const { return alpha_; }
  double s() const { return s_; }

 private:
  double alpha_, s_;
  GridField inner_;
};

inline double havin_mazya_potential(const GridField& f, double alpha, double s, const Point& x) {
  return HavinMazya(f, alpha, s)(x);
}

/// ρ ↦ (⨍_{B_ρ(x)} |F − ⟨F⟩_{B_ρ(x)}|^{p'})^{1/p} on the radii of a profile.
inline double oscillation_density(const GridField& F, const BallProfile& prof, double rho, double p) {
  auto cells = prof.prefix(rho);
  if (cells.empty()) return 0.0;
  const double pp = p / (p - 1.0);
  auto m = mean_over(F, cells);
  double osc = deviation_over(F, cells, m, pp);  // (⨍|F−⟨F⟩|^{p'})^{1/p'}
  return detail::pow_avg(osc, pp / p);
}

/// ∫₀^R (⨍_{B_ρ(x)} |F − ⟨F⟩_{B_ρ(x)}|^{p'})^{1/p} dρ, on the same panels and
/// inner cap as wulff_potential with (α, s) = (p/(p+1), p+1).
inline double oscillation_potential(const GridField& F, double p, double R, const Point& x,
                                    int panels = kDefaultPanels) {
  if (!(p > 1.0)) throw Error(Errc::InadmissibleParams, "p must exceed 1");
  const GridGeometry& g = F.geometry();
  check_ball(g, Ball{x, R});
  BallProfile prof(g, x, R);
  const double r_min = 2.0 * g.max_spacing();
  if (R <= r_min) return oscillation_density(F, prof, R, p) * R;
  double total = oscillation_density(F, prof, r_min, p) * r_min;
  RadialQuadrature q(r_min, R, panels);
  for (int j = 0; j < q.size(); ++j)
    total += oscillation_density(F, prof, q.radii()[j], p) * (q.upper(j) - q.lower(j));
  return total;
}

}  // namespace wlab
