#pragma once

// Sampled functions on rectangular grids: geometry, component-block storage,
// ball averaging with the cell-centre inclusion rule, and finite differences.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wulff_lab/error.hpp"

namespace wlab {

using Point = std::vector<double>;

/// Relative slack used by every "centre lies in ball" and "ball lies in box" test.
inline constexpr double kGeomSlack = 1e-12;

class GridGeometry {
 public:
  GridGeometry() = default;

  GridGeometry(std::vector<int> cells, std::vector<double> extent, std::vector<double> origin)
      : cells_(std::move(cells)), extent_(std::move(extent)), origin_(std::move(origin)) {
    if (cells_.size() < 2) throw Error(Errc::DimensionMismatch, "grid dimension must be >= 2");
    if (extent_.size() != cells_.size() || origin_.size() != cells_.size())
      throw Error(Errc::DimensionMismatch, "cells/extent/origin lengths differ");
    for (std::size_t a = 0; a < cells_.size(); ++a) {
      if (cells_[a] <= 0) throw Error(Errc::DegenerateGrid, "cell count per axis must be positive");
      if (!(extent_[a] > 0.0) || !std::isfinite(extent_[a]))
        throw Error(Errc::DegenerateGrid, "extent per axis must be positive and finite");
      if (!std::isfinite(origin_[a])) throw Error(Errc::NonFiniteValue, "origin must be finite");
    }
  }

  /// [origin, origin + side]^2 with `cells` cells per axis.
  static GridGeometry square(int cells, double side = 1.0, double origin = 0.0) {
    return GridGeometry({cells, cells}, {side, side}, {origin, origin});
  }

  int dim() const { return static_cast<int>(cells_.size()); }
  int cells(int axis) const { return cells_[axis]; }
  const std::vector<int>& cells() const { return cells_; }
  double extent(int axis) const { return extent_[axis]; }
  const std::vector<double>& extents() const { return extent_; }
  double origin(int axis) const { return origin_[axis]; }
  const std::vector<double>& origins() const { return origin_; }
  double spacing(int axis) const { return extent_[axis] / cells_[axis]; }

  double max_spacing() const {
    double h = 0.0;
    for (int a = 0; a < dim(); ++a) h = std::max(h, spacing(a));
    return h;
  }
  double min_spacing() const {
    double h = spacing(0);
    for (int a = 1; a < dim(); ++a) h = std::min(h, spacing(a));
    return h;
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int c : cells_) n *= static_cast<std::size_t>(c);
    return n;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= spacing(a);
    return v;
  }
  double measure() const {
    double v = 1.0;
    for (double e : extent_) v *= e;
    return v;
  }

  /// Axis 0 varies fastest.
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(cells_[a]);
    return s;
  }

  double center_coord(int axis, int i) const { return origin_[axis] + (i + 0.5) * spacing(axis); }

  std::vector<int> multi_index(std::size_t idx) const {
    std::vector<int> m(cells_.size());
    for (std::size_t a = 0; a < cells_.size(); ++a) {
      m[a] = static_cast<int>(idx % static_cast<std::size_t>(cells_[a]));
      idx /= static_cast<std::size_t>(cells_[a]);
    }
    return m;
  }

  std::size_t linear_index(std::span<const int> m) const {
    std::size_t idx = 0;
    for (int a = dim() - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(cells_[a]) + m[a];
    return idx;
  }

  Point center(std::size_t idx) const {
    Point x(cells_.size());
    for (std::size_t a = 0; a < cells_.size(); ++a) {
      int i = static_cast<int>(idx % static_cast<std::size_t>(cells_[a]));
      idx /= static_cast<std::size_t>(cells_[a]);
      x[a] = center_coord(static_cast<int>(a), i);
    }
    return x;
  }

  /// Index of the cell containing x (clamped onto the grid).
  std::size_t locate(const Point& x) const {
    std::vector<int> m(cells_.size());
    for (int a = 0; a < dim(); ++a) {
      int i = static_cast<int>(std::floor((x[a] - origin_[a]) / spacing(a)));
      m[a] = std::clamp(i, 0, cells_[a] - 1);
    }
    return linear_index(m);
  }

  bool contains_point(const Point& x) const {
    for (int a = 0; a < dim(); ++a) {
      double tol = kGeomSlack * extent_[a];
      if (x[a] < origin_[a] - tol || x[a] > origin_[a] + extent_[a] + tol) return false;
    }
    return true;
  }

  bool contains_ball(const Point& c, double r) const {
    if (static_cast<int>(c.size()) != dim()) return false;
    for (int a = 0; a < dim(); ++a) {
      double tol = kGeomSlack * extent_[a];
      if (c[a] - r < origin_[a] - tol || c[a] + r > origin_[a] + extent_[a] + tol) return false;
    }
    return true;
  }

  bool is_boundary_cell(std::size_t idx) const {
    for (int a = 0; a < dim(); ++a) {
      int i = static_cast<int>(idx % static_cast<std::size_t>(cells_[a]));
      idx /= static_cast<std::size_t>(cells_[a]);
      if (i == 0 || i == cells_[a] - 1) return true;
    }
    return false;
  }

  bool operator==(const GridGeometry&) const = default;

 private:
  std::vector<int> cells_;
  std::vector<double> extent_;
  std::vector<double> origin_;
};

struct Ball {
  Point center;
  double radius = 0.0;
};

namespace detail {

template <class Fn>
void ball_scan_axis(const GridGeometry& g, const Point& c, double r2, int axis, std::size_t base,
                    double partial, Fn& fn) {
  const double h = g.spacing(axis);
  const double o = g.origin(axis);
  const double rem = r2 - partial;
  if (rem < 0.0) return;
  const double w = std::sqrt(rem);
  int lo = static_cast<int>(std::ceil((c[axis] - w - o) / h - 0.5 - 1e-9));
  int hi = static_cast<int>(std::floor((c[axis] + w - o) / h - 0.5 + 1e-9));
  lo = std::max(lo, 0);
  hi = std::min(hi, g.cells(axis) - 1);
  const std::size_t st = g.stride(axis);
  for (int i = lo; i <= hi; ++i) {
    const double d = o + (i + 0.5) * h - c[axis];
    const double p = partial + d * d;
    if (p > r2) continue;
    if (axis == 0)
      fn(base + static_cast<std::size_t>(i) * st, p);
    else
      ball_scan_axis(g, c, r2, axis - 1, base + static_cast<std::size_t>(i) * st, p, fn);
  }
}

}  // namespace detail

/// Calls fn(cell index, squared distance) for every cell whose centre lies in
/// the closed ball B_r(c). Cells outside the grid are never visited; the caller
/// decides whether partial balls are acceptable.
template <class Fn>
void for_each_cell_in_ball(const GridGeometry& g, const Point& c, double r, Fn&& fn) {
  const double r2 = r * r * (1.0 + kGeomSlack);
  detail::ball_scan_axis(g, c, r2, g.dim() - 1, 0, 0.0, fn);
}

/// Throws unless b is admissible for averaging: inside the box and at least one
/// (largest) grid spacing in radius.
inline void check_ball(const GridGeometry& g, const Ball& b) {
  if (static_cast<int>(b.center.size()) != g.dim())
    throw Error(Errc::DimensionMismatch, "ball centre has wrong dimension");
  if (!(b.radius > 0.0)) throw Error(Errc::BallBelowResolution, "ball radius must be positive");
  if (b.radius < g.max_spacing() * (1.0 - kGeomSlack))
    throw Error(Errc::BallBelowResolution,
                "radius " + std::to_string(b.radius) + " below grid spacing " +
                    std::to_string(g.max_spacing()));
  if (!g.contains_ball(b.center, b.radius))
    throw Error(Errc::BallOutsideDomain, "ball of radius " + std::to_string(b.radius) +
                                             " leaves the grid domain");
}

inline std::vector<std::size_t> cells_in_ball(const GridGeometry& g, const Ball& b) {
  std::vector<std::size_t> out;
  for_each_cell_in_ball(g, b.center, b.radius, [&](std::size_t i, double) { out.push_back(i); });
  return out;
}

enum class Shape { Scalar, Vector, Matrix };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::Scalar: return "scalar";
    case Shape::Vector: return "vector";
    case Shape::Matrix: return "matrix";
  }
  return "?";
}

/// Immutable sampled field. Values are stored one block per component, each
/// block in cell order (axis 0 fastest). A matrix field of N rows stores
/// component (a, j) at index a * n + j.
class GridField {
 public:
  GridField() = default;

  GridField(GridGeometry geometry, Shape shape, int rows, std::vector<double> values)
      : geom_(std::move(geometry)), shape_(shape), rows_(rows), values_(std::move(values)) {
    if (shape_ == Shape::Scalar && rows_ != 1)
      throw Error(Errc::DimensionMismatch, "scalar field must have N = 1");
    if (rows_ < 1) throw Error(Errc::DimensionMismatch, "N must be >= 1");
    if (values_.size() != geom_.cell_count() * static_cast<std::size_t>(components()))
      throw Error(Errc::DimensionMismatch, "value count does not match cells x components");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "field samples must be finite");
  }

  static GridField zeros(const GridGeometry& g, Shape shape, int rows) {
    std::size_t comps = component_count(g, shape, rows);
    return GridField(g, shape, rows, std::vector<double>(g.cell_count() * comps, 0.0));
  }

  static GridField constant(const GridGeometry& g, Shape shape, int rows, std::span<const double> value) {
    std::size_t comps = component_count(g, shape, rows);
    if (value.size() != comps) throw Error(Errc::DimensionMismatch, "constant has wrong component count");
    std::vector<double> v(g.cell_count() * comps);
    for (std::size_t c = 0; c < comps; ++c)
      std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(c * g.cell_count()), g.cell_count(), value[c]);
    return GridField(g, shape, rows, std::move(v));
  }

  static GridField scalar(const GridGeometry& g, const std::function<double(const Point&)>& fn) {
    std::vector<double> v(g.cell_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g.center(i));
    return GridField(g, Shape::Scalar, 1, std::move(v));
  }

  /// fn(x, out) fills all components at the cell centre x.
  static GridField sample(const GridGeometry& g, Shape shape, int rows,
                          const std::function<void(const Point&, std::span<double>)>& fn) {
    std::size_t comps = component_count(g, shape, rows);
    std::size_t m = g.cell_count();
    std::vector<double> v(m * comps);
    std::vector<double> buf(comps);
    for (std::size_t i = 0; i < m; ++i) {
      fn(g.center(i), buf);
      for (std::size_t c = 0; c < comps; ++c) v[c * m + i] = buf[c];
    }
    return GridField(g, shape, rows, std::move(v));
  }

  static std::size_t component_count(const GridGeometry& g, Shape shape, int rows) {
    switch (shape) {
      case Shape::Scalar: return 1;
      case Shape::Vector: return static_cast<std::size_t>(rows);
      case Shape::Matrix: return static_cast<std::size_t>(rows) * static_cast<std::size_t>(g.dim());
    }
    return 0;
  }

  const GridGeometry& geometry() const { return geom_; }
  Shape shape() const { return shape_; }
  int rows() const { return rows_; }
  int components() const { return static_cast<int>(component_count(geom_, shape_, rows_)); }
  std::size_t cell_count() const { return geom_.cell_count(); }

  std::span<const double> values() const { return values_; }
  std::span<const double> component(int c) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(c) * cell_count(), cell_count());
  }
  double operator()(std::size_t cell, int c) const {
    return values_[static_cast<std::size_t>(c) * cell_count() + cell];
  }

  /// Euclidean (Frobenius for matrices) magnitude at one cell.
  double magnitude(std::size_t cell) const {
    double s = 0.0;
    const std::size_t m = cell_count();
    for (int c = 0; c < components(); ++c) {
      double v = values_[static_cast<std::size_t>(c) * m + cell];
      s += v * v;
    }
    return std::sqrt(s);
  }

  std::vector<double> at(std::size_t cell) const {
    std::vector<double> out(static_cast<std::size_t>(components()));
    for (int c = 0; c < components(); ++c) out[static_cast<std::size_t>(c)] = (*this)(cell, c);
    return out;
  }

  GridField scaled(double lambda) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= lambda;
    return GridField(geom_, shape_, rows_, std::move(v));
  }

  GridField plus(const GridField& other) const {
    if (!(other.geom_ == geom_) || other.components() != components())
      throw Error(Errc::ShapeMismatch, "fields differ in geometry or shape");
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
    return GridField(geom_, shape_, rows_, std::move(v));
  }

  bool same_layout(const GridField& other) const {
    return geom_ == other.geom_ && shape_ == other.shape_ && rows_ == other.rows_;
  }

 private:
  GridGeometry geom_;
  Shape shape_ = Shape::Scalar;
  int rows_ = 1;
  std::vector<double> values_;
};

/// |f|^power as a scalar field.
inline GridField magnitude_field(const GridField& f, double power = 1.0) {
  std::vector<double> v(f.cell_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double m = f.magnitude(i);
    v[i] = power == 1.0 ? m : std::pow(m, power);
  }
  return GridField(f.geometry(), Shape::Scalar, 1, std::move(v));
}

inline std::vector<double> mean_over(const GridField& f, std::span<const std::size_t> cells) {
  std::vector<double> mean(static_cast<std::size_t>(f.components()), 0.0);
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    double s = 0.0;
    for (std::size_t i : cells) s += comp[i];
    mean[static_cast<std::size_t>(c)] = s / static_cast<double>(cells.size());
  }
  return mean;
}

/// (⨍ |f - m|^q)^{1/q} over the given cells, Euclidean magnitude across components.
inline double deviation_over(const GridField& f, std::span<const std::size_t> cells,
                             std::span<const double> m, double q) {
  const int nc = f.components();
  double s = 0.0;
  for (std::size_t i : cells) {
    double d2 = 0.0;
    for (int c = 0; c < nc; ++c) {
      double d = f(i, c) - m[static_cast<std::size_t>(c)];
      d2 += d * d;
    }
    double d = std::sqrt(d2);
    s += q == 1.0 ? d : (q == 2.0 ? d2 : std::pow(d, q));
  }
  s /= static_cast<double>(cells.size());
  return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

/// Per-component average over the cells whose centres lie in b.
inline std::vector<double> ball_average(const GridField& f, const Ball& b) {
  check_ball(f.geometry(), b);
  auto cells = cells_in_ball(f.geometry(), b);
  return mean_over(f, cells);
}

/// (⨍_B |f - <f>_B|^q)^{1/q}.
inline double ball_oscillation(const GridField& f, const Ball& b, double q = 1.0) {
  if (!(q >= 1.0)) throw Error(Errc::InvalidArgument, "oscillation exponent must be >= 1");
  check_ball(f.geometry(), b);
  auto cells = cells_in_ball(f.geometry(), b);
  auto m = mean_over(f, cells);
  return deviation_over(f, cells, m, q);
}

/// (⨍_B |f|^q)^{1/q}.
inline double ball_mean_magnitude(const GridField& f, const Ball& b, double q = 1.0) {
  check_ball(f.geometry(), b);
  auto cells = cells_in_ball(f.geometry(), b);
  std::vector<double> zero(static_cast<std::size_t>(f.components()), 0.0);
  return deviation_over(f, cells, zero, q);
}

/// Derivative along one axis of one component: centred differences inside,
/// second-order one-sided differences on the first and last cell.
inline void axis_derivative(const GridGeometry& g, std::span<const double> u, int axis, std::span<double> out) {
  const int c = g.cells(axis);
  const std::size_t st = g.stride(axis);
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  const std::size_t m = g.cell_count();
  for (std::size_t idx = 0; idx < m; ++idx) {
    const int i = static_cast<int>((idx / st) % static_cast<std::size_t>(c));
    double d;
    if (i == 0)
      d = (-3.0 * u[idx] + 4.0 * u[idx + st] - u[idx + 2 * st]) * inv2h;
    else if (i == c - 1)
      d = (3.0 * u[idx] - 4.0 * u[idx - st] + u[idx - 2 * st]) * inv2h;
    else
      d = (u[idx + st] - u[idx - st]) * inv2h;
    out[idx] = d;
  }
}

/// ∇u for a scalar or vector field u with N components; result is N x n.
inline GridField gradient(const GridField& u) {
  if (u.shape() == Shape::Matrix) throw Error(Errc::ShapeMismatch, "gradient expects a scalar or vector field");
  const GridGeometry& g = u.geometry();
  for (int a = 0; a < g.dim(); ++a)
    if (g.cells(a) < 3) throw Error(Errc::GridTooCoarse, "gradient needs >= 3 cells per axis");
  const int rows = u.components();
  const int n = g.dim();
  const std::size_t m = g.cell_count();
  std::vector<double> v(m * static_cast<std::size_t>(rows * n));
  for (int r = 0; r < rows; ++r)
    for (int a = 0; a < n; ++a)
      axis_derivative(g, u.component(r), a,
                      std::span<double>(v).subspan(static_cast<std::size_t>(r * n + a) * m, m));
  return GridField(g, Shape::Matrix, rows, std::move(v));
}

}  // namespace wlab
