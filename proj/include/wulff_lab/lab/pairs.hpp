#pragma once

// Weak-solution pairs (u, F) used as verification inputs, rebuilt at any
// resolution so that fitted constants can be traced under refinement.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/plaplace.hpp"

namespace wlab::lab {

struct Pair {
  GridField u;
  GridField F;
  double p = 2.0;
  double residual = 0.0;  ///< weak residual relative to the flux scale
  std::string kind;
};

/// Recipe for a pair on [0, side]^2 with a given number of cells per axis.
struct PairSpec {
  std::string kind = "manufactured-sin";
  double p = 2.0;
  double side = 1.0;
  double q = 4.0;      ///< integrability index for the Hölder family
  double gamma = 0.5;  ///< singularity order for the Lorentz family
  double tol = 1e-8;   ///< solver tolerance and residual gate
};

inline const std::vector<std::string>& pair_kinds() {
  static const std::vector<std::string> k = {"manufactured-sin", "manufactured-radial", "poisson", "affine",
                                             "holder", "bmo", "lorentz", "zero"};
  return k;
}

namespace detail {

/// Centre of the square rounded to the nearest cell corner.
inline Point corner_center(const GridGeometry& g) {
  Point x(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    x[a] = g.origin(a) + std::round(0.5 * g.cells(a)) * h;
  }
  return x;
}

inline double dist(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) s += (x[a] - y[a]) * (x[a] - y[a]);
  return std::sqrt(s);
}

inline Pair finish(GridField u, GridField F, double p, std::string kind, double tol) {
  const double res = weak_residual(u, F, p);
  const double sc = flux_scale(u, F, p);
  const double rel = sc > 0.0 ? res / sc : res;
  if (!(rel <= tol))
    throw Error(Errc::ResidualTooLarge, kind + " pair has weak residual " + std::to_string(rel) + " > " +
                                            std::to_string(tol));
  return {std::move(u), std::move(F), p, rel, std::move(kind)};
}

inline Pair solved(const GridGeometry& g, GridField F, GridField gdata, const PairSpec& s) {
  DirichletProblem prob{g, std::move(F), std::move(gdata), {}};
  prob.params.p = s.p;
  prob.params.tol = s.tol;
  auto rep = solve_detailed(prob);
  return finish(std::move(rep.u), std::move(prob.F), s.p, s.kind, s.tol);
}

}  // namespace detail

/// Builds the pair `s.kind` on a cells x cells grid.
inline Pair build_pair(const PairSpec& s, int cells) {
  const double pi = std::numbers::pi;
  const auto g = GridGeometry::square(cells, s.side);
  const double L = s.side;
  if (!(s.p > 1.0)) throw Error(Errc::InadmissibleParams, "pairs need p > 1");

  if (s.kind == "manufactured-sin") {
    auto u = GridField::scalar(g, [&](const Point& x) { return std::sin(pi * x[0] / L) * std::sin(pi * x[1] / L); });
    auto F = manufacture(u, s.p);
    return detail::finish(std::move(u), std::move(F), s.p, s.kind, s.tol);
  }
  if (s.kind == "manufactured-radial") {
    // Radial p-harmonic profile with its pole outside the square (p ≠ 2).
    const Point x0{-0.5 * L, 0.5 * L};
    const double e = s.p == 2.0 ? 0.0 : (s.p - 2.0) / (s.p - 1.0);
    auto u = GridField::scalar(g, [&](const Point& x) {
      const double r = detail::dist(x, x0) / L;
      return e == 0.0 ? std::log(r) : std::pow(r, e);
    });
    auto F = manufacture(u, s.p);
    return detail::finish(std::move(u), std::move(F), s.p, s.kind, s.tol);
  }
  if (s.kind == "poisson") {
    // −Δu = −div ∇v with the analytic gradient sampled; u = v on the boundary.
    if (s.p != 2.0) throw Error(Errc::InadmissibleParams, "the Poisson instance needs p = 2");
    auto v = GridField::scalar(g, [&](const Point& x) { return std::sin(pi * x[0] / L) * std::sin(pi * x[1] / L); });
    auto F = GridField::sample(g, Shape::Matrix, 1, [&](const Point& x, std::span<double> out) {
      out[0] = (pi / L) * std::cos(pi * x[0] / L) * std::sin(pi * x[1] / L);
      out[1] = (pi / L) * std::sin(pi * x[0] / L) * std::cos(pi * x[1] / L);
    });
    return detail::solved(g, std::move(F), std::move(v), s);
  }
  if (s.kind == "affine") {
    const double a0 = 0.7, a1 = -0.4;
    auto u = GridField::scalar(g, [&](const Point& x) { return a0 * x[0] + a1 * x[1]; });
    const double c = std::pow(a0 * a0 + a1 * a1, 0.5 * (s.p - 2.0));
    std::vector<double> Fv = {c * a0, c * a1};
    auto F = GridField::constant(g, Shape::Matrix, 1, Fv);
    return detail::finish(std::move(u), std::move(F), s.p, s.kind, s.tol);
  }
  if (s.kind == "holder") {
    // F = ∇w with w = |x − x0|^{1 − n/(q(p−1))}, x0 a grid corner; solved with g = w.
    if (s.p != 2.0) throw Error(Errc::InadmissibleParams, "the Hölder instance is defined for p = 2");
    const Point x0 = detail::corner_center(g);
    const double e = 1.0 - 2.0 / (s.q * (s.p - 1.0));
    auto w = GridField::scalar(g, [&](const Point& x) { return std::pow(detail::dist(x, x0), e); });
    auto F = GridField::sample(g, Shape::Matrix, 1, [&](const Point& x, std::span<double> out) {
      const double r = detail::dist(x, x0);
      const double c = e * std::pow(r, e - 2.0);
      out[0] = c * (x[0] - x0[0]);
      out[1] = c * (x[1] - x0[1]);
    });
    return detail::solved(g, std::move(F), std::move(w), s);
  }
  if (s.kind == "bmo") {
    // u = log|x − x0|: F = |∇u|^{p−2}∇u ~ |x − x0|^{1−p} lies in the Morrey
    // space of order (n − p)/p' with exponent p'.
    const Point x0 = detail::corner_center(g);
    auto u = GridField::scalar(g, [&](const Point& x) { return std::log(detail::dist(x, x0)); });
    auto F = manufacture(u, s.p);
    return detail::finish(std::move(u), std::move(F), s.p, s.kind, s.tol);
  }
  if (s.kind == "lorentz") {
    // u = |x − x0|^{e−1}(x − x0)_1 with e = 1 − γ/(p−1), so |F| = |∇u|^{p−1} ~ |x − x0|^{−γ}.
    const Point x0 = detail::corner_center(g);
    const double e = 1.0 - s.gamma / (s.p - 1.0);
    auto u = GridField::scalar(g, [&](const Point& x) { return std::pow(detail::dist(x, x0), e - 1.0) * (x[0] - x0[0]); });
    auto F = manufacture(u, s.p);
    return detail::finish(std::move(u), std::move(F), s.p, s.kind, s.tol);
  }
  if (s.kind == "zero") {
    auto u = GridField::zeros(g, Shape::Scalar, 1);
    auto F = GridField::zeros(g, Shape::Matrix, 1);
    return detail::finish(std::move(u), std::move(F), s.p, s.kind, s.tol);
  }
  throw Error(Errc::InvalidArgument, "unknown pair kind '" + s.kind + "'");
}

}  // namespace wlab::lab
