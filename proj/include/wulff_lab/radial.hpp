#pragma once

// Log-radius quadrature and concentric-ball profiles. A profile sorts the cells
// of B_R(x) by distance once; every smaller concentric ball is then a prefix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"

namespace wlab {

inline constexpr int kDefaultPanels = 24;

/// Panels with log-spaced edges r_min = e_0 < ... < e_m = R; node j is the
/// geometric midpoint of panel j and carries weight log(e_{j+1}/e_j).
class RadialQuadrature {
 public:
  RadialQuadrature(double r_min, double r_max, int panels = kDefaultPanels) {
    if (!(r_min > 0.0) || !(r_max > r_min))
      throw Error(Errc::InvalidArgument, "radial quadrature needs 0 < r_min < R");
    if (panels < 16) throw Error(Errc::InvalidArgument, "radial quadrature needs >= 16 panels");
    const double lr = std::log(r_max / r_min);
    edges_.resize(static_cast<std::size_t>(panels) + 1);
    for (int j = 0; j <= panels; ++j) edges_[j] = r_min * std::exp(lr * j / panels);
    edges_.front() = r_min;
    edges_.back() = r_max;
    for (int j = 0; j < panels; ++j) {
      nodes_.push_back(std::sqrt(edges_[j] * edges_[j + 1]));
      weights_.push_back(std::log(edges_[j + 1] / edges_[j]));
    }
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  double r_min() const { return edges_.front(); }
  double r_max() const { return edges_.back(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& radii() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double lower(int j) const { return edges_[j]; }
  double upper(int j) const { return edges_[j + 1]; }

 private:
  std::vector<double> edges_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Cells of B_R(x) sorted by distance to x (ties by cell index).
class BallProfile {
 public:
  BallProfile(const GridGeometry& g, const Point& x, double R) : radius_(R) {
    std::vector<std::pair<double, std::size_t>> tmp;
    for_each_cell_in_ball(g, x, R, [&](std::size_t i, double d2) { tmp.emplace_back(d2, i); });
    std::sort(tmp.begin(), tmp.end());
    d2_.reserve(tmp.size());
    cells_.reserve(tmp.size());
    for (auto& [d2, i] : tmp) {
      d2_.push_back(d2);
      cells_.push_back(i);
    }
  }

  double radius() const { return radius_; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<std::size_t>& cells() const { return cells_; }

  /// Number of cells whose centres lie in B_r(x), same slack as for_each_cell_in_ball.
  std::size_t count(double r) const {
    const double r2 = r * r * (1.0 + kGeomSlack);
    return static_cast<std::size_t>(std::upper_bound(d2_.begin(), d2_.end(), r2) - d2_.begin());
  }

  /// Cells of B_r(x) for r <= radius().
  std::span<const std::size_t> prefix(double r) const {
    return std::span<const std::size_t>(cells_).first(count(r));
  }

  /// Prefix sums of v over the sorted cells; entry k sums the first k cells.
  std::vector<double> cumulative(std::span<const double> v) const {
    std::vector<double> c(cells_.size() + 1, 0.0);
    for (std::size_t k = 0; k < cells_.size(); ++k) c[k + 1] = c[k] + v[cells_[k]];
    return c;
  }

 private:
  double radius_;
  std::vector<double> d2_;
  std::vector<std::size_t> cells_;
};

}  // namespace wlab
