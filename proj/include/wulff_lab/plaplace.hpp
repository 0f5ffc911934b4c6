#pragma once

// Discrete p-Laplace systems −div(|∇u|^{p−2}∇u) = −div F on a box with
// Dirichlet data.
//
// The discrete gradient G is the same operator as gradient(): centred in the
// interior, second-order one-sided on the outer ring. Energies and weak forms
// integrate with the per-axis summation-by-parts weights
//   (1/4, 5/4, 1, ..., 1, 5/4, 1/4),
// for which Σ_c w_c (Gφ)_c = 0 whenever φ vanishes on the outer ring. Hence
// constant fluxes are discretely divergence-free and the weak residual of a
// manufactured pair vanishes identically.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"

namespace wlab {

struct SystemParams {
  double p = 2.0;
  int N = 1;
  double eps = 0.0;   ///< regularization of the final stage
  double tol = 1e-8;  ///< weak residual relative to the flux scale
  int max_iters = 20000;

  double p_conj() const { return p / (p - 1.0); }
};

struct DirichletProblem {
  GridGeometry geometry;
  GridField F;  ///< N x n
  GridField g;  ///< N components; outer ring imposed, interior used as initial guess
  SystemParams params;
};

struct SolveReport {
  GridField u;
  double residual = 0.0;  ///< weak residual / flux scale at the final stage
  double scale = 0.0;
  int iterations = 0;
  std::vector<double> stage_eps;
  std::vector<double> energy;  ///< energy after each accepted step, all stages
  std::vector<int> stage_start;
};

namespace detail {

class SbpOperator {
 public:
  SbpOperator(const GridGeometry& g, int rows) : g_(g), N_(rows), n_(g.dim()), m_(g.cell_count()) {
    weight_.assign(m_, g.cell_volume());
    interior_.assign(m_, 1);
    for (std::size_t c = 0; c < m_; ++c) {
      auto idx = g.multi_index(c);
      for (int a = 0; a < n_; ++a) {
        weight_[c] *= axis_weight(idx[a], g.cells(a));
        if (idx[a] == 0 || idx[a] == g.cells(a) - 1) interior_[c] = 0;
      }
    }
    // Test-function gradient mass Σ_c w_c |(G e_k)_c|, one value per cell k.
    mass_.assign(m_, 0.0);
    for (int a = 0; a < n_; ++a) scatter_transpose(weight_.data(), a, mass_.data(), true);
  }

  static double axis_weight(int i, int c) {
    if (i == 0 || i == c - 1) return 0.25;
    if (i == 1 || i == c - 2) return 1.25;
    return 1.0;
  }

  const GridGeometry& geometry() const { return g_; }
  int rows() const { return N_; }
  int dim() const { return n_; }
  std::size_t cells() const { return m_; }
  const std::vector<double>& weight() const { return weight_; }
  const std::vector<char>& interior() const { return interior_; }
  const std::vector<double>& mass() const { return mass_; }

  /// Gu in block layout (r * n + a) * m + c.
  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(static_cast<std::size_t>(N_ * n_) * m_);
    for (int r = 0; r < N_; ++r)
      for (int a = 0; a < n_; ++a)
        axis_derivative(g_, std::span<const double>(u).subspan(static_cast<std::size_t>(r) * m_, m_), a,
                        std::span<double>(out).subspan(static_cast<std::size_t>(r * n_ + a) * m_, m_));
  }

  /// out = Gᵀ V restricted to interior cells (outer ring set to zero).
  void apply_transpose(const std::vector<double>& V, std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(N_) * m_, 0.0);
    for (int r = 0; r < N_; ++r)
      for (int a = 0; a < n_; ++a)
        scatter_transpose(V.data() + static_cast<std::size_t>(r * n_ + a) * m_, a,
                          out.data() + static_cast<std::size_t>(r) * m_, false);
    for (int r = 0; r < N_; ++r)
      for (std::size_t c = 0; c < m_; ++c)
        if (!interior_[c]) out[static_cast<std::size_t>(r) * m_ + c] = 0.0;
  }

 private:
  /// out_k += Σ_c v_c (G_a e_k)_c, or with |coefficients| when absolute.
  void scatter_transpose(const double* v, int a, double* out, bool absolute) const {
    const int c = g_.cells(a);
    const std::size_t st = g_.stride(a);
    const double s = 1.0 / (2.0 * g_.spacing(a));
    auto put = [&](std::size_t k, double coef, double val) { out[k] += (absolute ? std::abs(coef) : coef) * val; };
    for (std::size_t idx = 0; idx < m_; ++idx) {
      const int i = static_cast<int>((idx / st) % static_cast<std::size_t>(c));
      const double val = v[idx];
      if (i == 0) {
        put(idx, -3.0 * s, val);
        put(idx + st, 4.0 * s, val);
        put(idx + 2 * st, -1.0 * s, val);
      } else if (i == c - 1) {
        put(idx, 3.0 * s, val);
        put(idx - st, -4.0 * s, val);
        put(idx - 2 * st, 1.0 * s, val);
      } else {
        put(idx + st, s, val);
        put(idx - st, -s, val);
      }
    }
  }

  GridGeometry g_;
  int N_, n_;
  std::size_t m_;
  std::vector<double> weight_;
  std::vector<char> interior_;
  std::vector<double> mass_;
};

/// Per-cell Frobenius squared norm of a block-layout matrix field.
inline void cell_norm2(const std::vector<double>& xi, int comps, std::size_t m, std::vector<double>& out) {
  out.assign(m, 0.0);
  for (int q = 0; q < comps; ++q) {
    const double* b = xi.data() + static_cast<std::size_t>(q) * m;
    for (std::size_t c = 0; c < m; ++c) out[c] += b[c] * b[c];
  }
}

/// Flux factor (ε² + |ξ|²)^{(p−2)/2}; at ξ = 0, ε = 0 the flux itself is 0.
inline double flux_factor(double eps2, double norm2, double p) {
  const double a = eps2 + norm2;
  if (p == 2.0) return 1.0;
  if (a == 0.0) return 0.0;
  return std::pow(a, 0.5 * (p - 2.0));
}

inline std::vector<double> field_block(const GridField& f) {
  return std::vector<double>(f.values().begin(), f.values().end());
}

}  // namespace detail

/// |∇u|^{p−2}∇u sample-wise; u is then an exact discrete weak solution with datum F.
inline GridField manufacture(const GridField& u, double p) {
  if (u.shape() == Shape::Matrix) throw Error(Errc::ShapeMismatch, "manufacture expects a scalar or vector field");
  GridField G = gradient(u);
  std::vector<double> xi = detail::field_block(G);
  const std::size_t m = u.cell_count();
  const int comps = G.components();
  std::vector<double> n2;
  detail::cell_norm2(xi, comps, m, n2);
  for (std::size_t c = 0; c < m; ++c) {
    double f = detail::flux_factor(0.0, n2[c], p);
    for (int q = 0; q < comps; ++q) xi[static_cast<std::size_t>(q) * m + c] *= f;
  }
  return GridField(u.geometry(), Shape::Matrix, u.components(), std::move(xi));
}

namespace detail {

inline void check_pair(const GridField& u, const GridField& F) {
  if (u.shape() == Shape::Matrix) throw Error(Errc::ShapeMismatch, "u must be scalar or vector valued");
  if (F.shape() != Shape::Matrix || F.rows() != u.components() || !(F.geometry() == u.geometry()))
    throw Error(Errc::ShapeMismatch, "F must be an N x n matrix field on the grid of u");
}

/// max_k |⟨A(Gu) − F, G e_k⟩_w| / mass_k over interior cells k and components.
inline double weak_residual_with(const SbpOperator& op, const std::vector<double>& u, const std::vector<double>& F,
                                 double p, double eps2, double* scale_out) {
  const std::size_t m = op.cells();
  const int comps = op.rows() * op.dim();
  std::vector<double> xi, n2, V, out;
  op.apply(u, xi);
  cell_norm2(xi, comps, m, n2);
  V.resize(xi.size());
  double scale = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const double f = flux_factor(eps2, n2[c], p);
    double fa = 0.0, ff = 0.0;
    for (int q = 0; q < comps; ++q) {
      const std::size_t k = static_cast<std::size_t>(q) * m + c;
      const double a = f * xi[k];
      fa += a * a;
      ff += F[k] * F[k];
      V[k] = op.weight()[c] * (a - F[k]);
    }
    scale = std::max({scale, std::sqrt(fa), std::sqrt(ff)});
  }
  op.apply_transpose(V, out);
  double res = 0.0;
  for (int r = 0; r < op.rows(); ++r)
    for (std::size_t c = 0; c < m; ++c)
      if (op.interior()[c]) res = std::max(res, std::abs(out[static_cast<std::size_t>(r) * m + c]) / op.mass()[c]);
  if (scale_out) *scale_out = scale;
  return res;
}

}  // namespace detail

/// Discrete weak residual of (u, F): largest normalized gap over the interior
/// test basis. Zero iff u is a discrete weak solution for F.
inline double weak_residual(const GridField& u, const GridField& F, double p) {
  detail::check_pair(u, F);
  detail::SbpOperator op(u.geometry(), u.components());
  return detail::weak_residual_with(op, detail::field_block(u), detail::field_block(F), p, 0.0, nullptr);
}

/// max over cells of |F| and |∇u|^{p−1}; the reference size for relative residuals.
inline double flux_scale(const GridField& u, const GridField& F, double p) {
  detail::check_pair(u, F);
  detail::SbpOperator op(u.geometry(), u.components());
  double s = 0.0;
  detail::weak_residual_with(op, detail::field_block(u), detail::field_block(F), p, 0.0, &s);
  return s;
}

namespace detail {

class EnergyMinimizer {
 public:
  EnergyMinimizer(const SbpOperator& op, const std::vector<double>& F, double p)
      : op_(op), F_(F), p_(p), m_(op.cells()), comps_(op.rows() * op.dim()) {}

  /// J(u) for the current ξ = Gu.
  double energy(const std::vector<double>& xi, double eps2) const {
    std::vector<double> n2;
    cell_norm2(xi, comps_, m_, n2);
    double J = 0.0;
    for (std::size_t c = 0; c < m_; ++c) {
      double fx = 0.0;
      for (int q = 0; q < comps_; ++q) fx += F_[static_cast<std::size_t>(q) * m_ + c] * xi[static_cast<std::size_t>(q) * m_ + c];
      J += op_.weight()[c] * (std::pow(eps2 + n2[c], 0.5 * p_) / p_ - fx);
    }
    return J;
  }

  /// Gradient of J with respect to u (zero on the outer ring) and ξ's per-cell norms.
  void gradient(const std::vector<double>& xi, double eps2, std::vector<double>& grad) const {
    std::vector<double> n2, V(xi.size());
    cell_norm2(xi, comps_, m_, n2);
    for (std::size_t c = 0; c < m_; ++c) {
      const double f = flux_factor(eps2, n2[c], p_);
      for (int q = 0; q < comps_; ++q) {
        const std::size_t k = static_cast<std::size_t>(q) * m_ + c;
        V[k] = op_.weight()[c] * (f * xi[k] - F_[k]);
      }
    }
    op_.apply_transpose(V, grad);
  }

  /// Energy change J(u + t d) − J(u) and the slope φ'(t), given ξ = Gu and η = Gd.
  /// The difference is accumulated cell by cell so it stays accurate when it is
  /// far below the rounding level of J itself.
  void line_values(const std::vector<double>& xi, const std::vector<double>& eta, double t, double eps2,
                   double& delta, double& slope) const {
    delta = 0.0;
    slope = 0.0;
    for (std::size_t c = 0; c < m_; ++c) {
      double a = eps2, xe = 0.0, ee = 0.0, fe = 0.0;
      for (int q = 0; q < comps_; ++q) {
        const std::size_t k = static_cast<std::size_t>(q) * m_ + c;
        a += xi[k] * xi[k];
        xe += xi[k] * eta[k];
        ee += eta[k] * eta[k];
        fe += F_[k] * eta[k];
      }
      const double d = 2.0 * t * xe + t * t * ee;
      const double b = std::max(a + d, 0.0);
      double dpsi;
      if (p_ == 2.0)
        dpsi = 0.5 * d;
      else if (a == 0.0)
        dpsi = std::pow(b, 0.5 * p_) / p_;
      else
        dpsi = std::pow(a, 0.5 * p_) * std::expm1(0.5 * p_ * std::log1p(std::max(d / a, -1.0))) / p_;
      const double w = op_.weight()[c];
      delta += w * (dpsi - t * fe);
      const double f = (p_ == 2.0) ? 1.0 : (b == 0.0 ? 0.0 : std::pow(b, 0.5 * (p_ - 2.0)));
      slope += w * (f * (xe + t * ee) - fe);
    }
  }

  /// max over cells of |a_ε(ξ)|.
  double flux_max(const std::vector<double>& xi, double eps2) const {
    std::vector<double> n2;
    cell_norm2(xi, comps_, m_, n2);
    double s = 0.0;
    for (std::size_t c = 0; c < m_; ++c) s = std::max(s, flux_factor(eps2, n2[c], p_) * std::sqrt(n2[c]));
    return s;
  }

  /// Σ w_c (ε² + |ξ|²)^{(p−2)/2} |η|², the exact curvature for p = 2.
  double curvature(const std::vector<double>& xi, const std::vector<double>& eta, double eps2) const {
    std::vector<double> n2, e2;
    cell_norm2(xi, comps_, m_, n2);
    cell_norm2(eta, comps_, m_, e2);
    double k = 0.0;
    for (std::size_t c = 0; c < m_; ++c) {
      double a = eps2 + n2[c];
      double f = p_ == 2.0 ? 1.0 : (a > 0.0 ? std::pow(a, 0.5 * (p_ - 2.0)) : 0.0);
      k += op_.weight()[c] * f * e2[c];
    }
    return k;
  }

 private:
  const SbpOperator& op_;
  const std::vector<double>& F_;
  double p_;
  std::size_t m_;
  int comps_;
};

/// Minimizes along u + t d for convex φ(t); returns the accepted t (0 when
/// no decrease could be certified) and the energy change.
inline double line_search(const EnergyMinimizer& em, const std::vector<double>& xi, const std::vector<double>& eta,
                          double eps2, double slope0, double t_guess, double& delta_out) {
  double lo = 0.0, slo = slope0, hi = -1.0, shi = 0.0;
  double t = t_guess > 0.0 && std::isfinite(t_guess) ? t_guess : 1.0;
  double delta = 0.0, slope = 0.0;
  for (int k = 0; k < 60; ++k) {
    em.line_values(xi, eta, t, eps2, delta, slope);
    if (slope < 0.0) {
      lo = t;
      slo = slope;
      t *= 2.0;
    } else {
      hi = t;
      shi = slope;
      break;
    }
  }
  if (hi > 0.0) {
    // Illinois regula falsi on φ' inside [lo, hi].
    int side = 0;
    for (int k = 0; k < 40; ++k) {
      if (std::abs(slope) <= 1e-3 * std::abs(slope0)) break;
      double tn = (lo * shi - hi * slo) / (shi - slo);
      if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
      t = tn;
      em.line_values(xi, eta, t, eps2, delta, slope);
      if (slope < 0.0) {
        lo = t;
        slo = slope;
        if (side == -1) shi *= 0.5;
        side = -1;
      } else {
        hi = t;
        shi = slope;
        if (side == 1) slo *= 0.5;
        side = 1;
      }
      if (hi - lo <= 1e-15 * hi) break;
    }
  }
  // Armijo guard with backtracking.
  for (int k = 0; k < 60; ++k) {
    if (delta <= 1e-4 * t * slope0 || (delta < 0.0 && k > 0)) {
      delta_out = delta;
      return t;
    }
    t *= 0.5;
    em.line_values(xi, eta, t, eps2, delta, slope);
  }
  delta_out = 0.0;
  return 0.0;
}

}  // namespace detail

/// Minimizes the regularized energy with ε-continuation and returns the full
/// iteration record.
inline SolveReport solve_detailed(const DirichletProblem& prob) {
  const SystemParams& P = prob.params;
  const GridGeometry& g = prob.geometry;
  if (!(P.p > 1.0)) throw Error(Errc::InadmissibleParams, "p must exceed 1");
  if (P.N < 1 || !(P.eps >= 0.0) || !(P.tol > 0.0) || P.max_iters < 1)
    throw Error(Errc::InadmissibleParams, "invalid solver parameters");
  for (int a = 0; a < g.dim(); ++a)
    if (g.cells(a) < 16) throw Error(Errc::DegenerateGrid, "solver needs >= 16 cells per axis");
  if (!(prob.F.geometry() == g) || prob.F.shape() != Shape::Matrix || prob.F.rows() != P.N)
    throw Error(Errc::ShapeMismatch, "F must be an N x n field on the problem grid");
  if (!(prob.g.geometry() == g) || prob.g.shape() == Shape::Matrix || prob.g.components() != P.N)
    throw Error(Errc::ShapeMismatch, "boundary data must have N components on the problem grid");

  detail::SbpOperator op(g, P.N);
  const std::vector<double> F = detail::field_block(prob.F);
  detail::EnergyMinimizer em(op, F, P.p);
  std::vector<double> u = detail::field_block(prob.g);
  double F_scale = 0.0;
  for (std::size_t c = 0; c < op.cells(); ++c) {
    double f2 = 0.0;
    for (int q = 0; q < P.N * g.dim(); ++q) f2 += F[static_cast<std::size_t>(q) * op.cells() + c] * F[static_cast<std::size_t>(q) * op.cells() + c];
    F_scale = std::max(F_scale, std::sqrt(f2));
  }

  std::vector<double> stages;
  if (P.p != 2.0)
    for (double e = 1e-1; e > P.eps * (1.0 + 1e-12) && e >= 1e-6 * (1.0 - 1e-12); e *= 0.1) stages.push_back(e);
  stages.push_back(P.eps);

  SolveReport rep;
  rep.stage_eps = stages;
  std::vector<double> xi, eta, grad, grad_old, d;
  double J = 0.0;
  int total = 0;
  for (std::size_t si = 0; si < stages.size(); ++si) {
    const bool final_stage = si + 1 == stages.size();
    const double eps2 = stages[si] * stages[si];
    const double stage_tol = final_stage ? P.tol : std::max(P.tol, 1e-4);
    op.apply(u, xi);
    J = em.energy(xi, eps2);
    rep.stage_start.push_back(static_cast<int>(rep.energy.size()));
    rep.energy.push_back(J);
    em.gradient(xi, eps2, grad);
    d.assign(grad.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -grad[i];
    double t_prev = -1.0;
    bool done = false;
    for (int it = 0; it < P.max_iters; ++it) {
      double scale = std::max(F_scale, em.flux_max(xi, eps2));
      double res = 0.0;
      for (int r = 0; r < P.N; ++r)
        for (std::size_t c = 0; c < op.cells(); ++c)
          if (op.interior()[c])
            res = std::max(res, std::abs(grad[static_cast<std::size_t>(r) * op.cells() + c]) / op.mass()[c]);
      if (res <= stage_tol * scale || scale == 0.0) {
        done = true;
        break;
      }
      op.apply(d, eta);
      double slope0 = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) slope0 += grad[i] * d[i];
      if (!(slope0 < 0.0)) {
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = -grad[i];
        op.apply(d, eta);
        slope0 = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) slope0 += grad[i] * d[i];
        if (!(slope0 < 0.0)) break;
      }
      double kappa = em.curvature(xi, eta, eps2);
      double guess = kappa > 0.0 ? -slope0 / kappa : t_prev;
      double delta = 0.0;
      double t = detail::line_search(em, xi, eta, eps2, slope0, guess, delta);
      if (t == 0.0) {
        // Restart once from steepest descent before giving up.
        bool steep = true;
        for (std::size_t i = 0; i < d.size(); ++i) steep = steep && d[i] == -grad[i];
        if (steep) break;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = -grad[i];
        continue;
      }
      t_prev = t;
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += t * d[i];
      ++total;
      if (total % 64 == 0)
        op.apply(u, xi);
      else
        for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += t * eta[i];
      J += delta;
      rep.energy.push_back(J);
      grad_old.swap(grad);
      em.gradient(xi, eps2, grad);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) {
        num += grad[i] * (grad[i] - grad_old[i]);
        den += grad_old[i] * grad_old[i];
      }
      const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = -grad[i] + beta * d[i];
    }
    double scale = 0.0;
    double res = detail::weak_residual_with(op, u, F, P.p, eps2, &scale);
    rep.residual = scale > 0.0 ? res / scale : 0.0;
    rep.scale = scale;
    if (final_stage && !done && rep.residual > P.tol)
      throw Error(Errc::NonConvergence, "solver stopped after " + std::to_string(total) +
                                            " iterations with relative weak residual " + std::to_string(rep.residual));
  }
  rep.iterations = total;
  GridField ug = prob.g;
  rep.u = GridField(g, prob.g.shape(), ug.rows(), std::move(u));
  return rep;
}

inline GridField solve(const DirichletProblem& prob) { return solve_detailed(prob).u; }

}  // namespace wlab
