#pragma once

// Seeded test families. Draws use only raw mt19937_64 output so sequences are
// identical across standard libraries. Fields are sums of Gaussian bumps
// evaluated at cell centres, so the same draw refines consistently with h.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wulff_lab/field.hpp"

namespace wlab {

/// Bumped whenever a family generator changes its draw sequence.
inline constexpr int kFamilyVersion = 1;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t bits() { return eng_(); }

  /// Child stream for member k of a family; independent of how many draws
  /// earlier members consumed.
  static Rng derive(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 eng_;
};

struct Bump {
  Point center;
  double amplitude = 0.0;
  double width = 1.0;
};

struct BumpSum {
  std::vector<Bump> bumps;
  double offset = 0.0;

  double operator()(const Point& x) const {
    double v = offset;
    for (const Bump& b : bumps) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) d2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
      v += b.amplitude * std::exp(-d2 / (2.0 * b.width * b.width));
    }
    return v;
  }
};

struct BumpOptions {
  int count = 6;
  double min_width = 0.05;
  double max_width = 0.25;
  bool nonnegative = false;
};

/// Bump centres are drawn inside the geometry's box.
inline BumpSum random_bumps(Rng& rng, const GridGeometry& g, const BumpOptions& opt = {}) {
  BumpSum s;
  for (int k = 0; k < opt.count; ++k) {
    Bump b;
    b.center.resize(static_cast<std::size_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) b.center[a] = g.origin(a) + g.extent(a) * rng.uniform();
    b.amplitude = opt.nonnegative ? rng.uniform(0.1, 1.0) : rng.uniform(-1.0, 1.0);
    b.width = rng.uniform(opt.min_width, opt.max_width);
    s.bumps.push_back(std::move(b));
  }
  if (!opt.nonnegative) s.offset = rng.uniform(-0.5, 0.5);
  return s;
}

inline GridField sample_scalar(const GridGeometry& g, const BumpSum& s) {
  return GridField::scalar(g, [&](const Point& x) { return s(x); });
}

}  // namespace wlab
