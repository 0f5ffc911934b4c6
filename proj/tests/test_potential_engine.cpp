#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wulff_lab/potential.hpp"
#include "wulff_lab/random.hpp"

using namespace wlab;

namespace {

GridField constant_field(const GridGeometry& g, double c) {
  return GridField::constant(g, Shape::Scalar, 1, std::span<const double>(&c, 1));
}

/// Brute-force I_α on cell centres: off-diagonal kernel |x − y|^{α−2} h², self
/// cell ∫_{|y|<h/2} |y|^{α−2} dy = 2π (h/2)^α / α.
std::vector<double> brute_riesz(const GridGeometry& g, const std::vector<double>& f, double alpha) {
  const double h = g.spacing(0);
  std::vector<double> out(g.cell_count(), 0.0);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Point x = g.center(i);
    for (std::size_t j = 0; j < g.cell_count(); ++j) {
      if (i == j) {
        out[i] += f[j] * 2.0 * std::numbers::pi * std::pow(0.5 * h, alpha) / alpha;
        continue;
      }
      const Point y = g.center(j);
      const double d = std::hypot(x[0] - y[0], x[1] - y[1]);
      out[i] += f[j] * std::pow(d, alpha - 2.0) * h * h;
    }
  }
  return out;
}

}  // namespace

TEST(WulffPotential, ConstantClosedFormAlphaSEqualsP) {
  auto g = GridGeometry::square(64);
  for (double p : {1.5, 2.0, 3.0})
    for (double c : {1.0, 4.0})
      for (double R : {0.1, 0.25}) {
        const double w = wulff_potential(constant_field(g, c), {p / (p + 1.0), p + 1.0, R}, {0.5, 0.5});
        EXPECT_NEAR(w, std::pow(c, 1.0 / p) * R, 1e-12 * R) << "p=" << p << " c=" << c << " R=" << R;
      }
}

TEST(WulffPotential, ConstantClosedFormGeneral) {
  auto g = GridGeometry::square(48);
  for (auto [alpha, s] : {std::pair{0.5, 3.0}, {0.4, 2.0}, {1.2, 1.5}}) {
    const double c = 2.7, R = 0.3;
    const double exact = std::pow(c, 1.0 / (s - 1.0)) * ((s - 1.0) / (alpha * s)) * std::pow(R, alpha * s / (s - 1.0));
    EXPECT_NEAR(wulff_potential(constant_field(g, c), {alpha, s, R}, {0.45, 0.55}), exact, 1e-12 * exact);
  }
}

TEST(WulffPotential, ZeroAndErrors) {
  auto g = GridGeometry::square(32);
  EXPECT_EQ(wulff_potential(constant_field(g, 0.0), {0.5, 3.0, 0.2}, {0.5, 0.5}), 0.0);
  EXPECT_THROW(wulff_potential(constant_field(g, -1.0), {0.5, 3.0, 0.2}, {0.5, 0.5}), Error);
  EXPECT_THROW(wulff_potential(constant_field(g, 1.0), {0.5, 1.0, 0.2}, {0.5, 0.5}), Error);
  EXPECT_THROW(wulff_potential(constant_field(g, 1.0), {0.5, 3.0, 0.4}, {0.2, 0.5}), Error);
}

TEST(RieszPotential, UnitDiscAtOrigin) {
  // Cell centres at −1 + i h, so the origin is a centre.
  const int cells = 257;
  const double h = 1.0 / 128;
  GridGeometry g({cells, cells}, {cells * h, cells * h}, {-1.0 - 0.5 * h, -1.0 - 0.5 * h});
  auto chi = GridField::scalar(g, [](const Point& x) { return std::hypot(x[0], x[1]) <= 1.0 ? 1.0 : 0.0; });
  for (double alpha : {0.5, 1.0, 1.5}) {
    const double exact = 2.0 * std::numbers::pi / alpha;
    EXPECT_NEAR(riesz_potential(chi, alpha, {0.0, 0.0}), exact, 0.02 * exact) << alpha;
  }
}

TEST(RieszPotential, ZeroAndAlphaRange) {
  auto g = GridGeometry::square(16);
  EXPECT_EQ(riesz_potential(constant_field(g, 0.0), 1.0, {0.5, 0.5}), 0.0);
  try {
    riesz_potential(constant_field(g, 1.0), 2.0, {0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AlphaOutOfRange);
  }
}

TEST(RieszPotential, TranslationEquivariance) {
  auto g = GridGeometry::square(40);
  const int shift = 3;
  auto bump = [](double cx, double cy) {
    return [=](const Point& x) { return std::exp(-40.0 * ((x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy))); };
  };
  const double h = g.spacing(0);
  // Same bump, both centres moved by a lattice vector; support well inside the box.
  auto f = GridField::scalar(g, [&](const Point& x) { return bump(0.4, 0.45)(x) * (std::hypot(x[0] - 0.4, x[1] - 0.45) < 0.3); });
  auto fs = GridField::scalar(g, [&](const Point& x) {
    return bump(0.4 + shift * h, 0.45)(x) * (std::hypot(x[0] - 0.4 - shift * h, x[1] - 0.45) < 0.3);
  });
  const Point x = g.center(g.locate({0.3, 0.6}));
  const Point xs{x[0] + shift * h, x[1]};
  const double a = riesz_potential(f, 0.8, x), b = riesz_potential(fs, 0.8, xs);
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(RieszField, MatchesPointEvaluation) {
  auto g = GridGeometry::square(24);
  Rng rng(5);
  auto f = magnitude_field(sample_scalar(g, random_bumps(rng, g)), 1.0);
  auto I = riesz_field(f, 0.7);
  for (std::size_t i : {0ul, 77ul, 300ul, g.cell_count() - 1})
    EXPECT_NEAR(I.values()[i], riesz_potential(f, 0.7, g.center(i)), 1e-11 * I.values()[i]);
}

TEST(HavinMazya, SEqualsTwoIsDoubleRieszBruteForce) {
  auto g = GridGeometry::square(8);
  Rng rng(3);
  auto f = magnitude_field(sample_scalar(g, random_bumps(rng, g)), 1.0);
  std::vector<double> fv(f.values().begin(), f.values().end());
  const double alpha = 0.6;
  const auto inner = brute_riesz(g, fv, alpha);
  const auto outer = brute_riesz(g, inner, alpha);
  HavinMazya V(f, alpha, 2.0);
  for (std::size_t i = 0; i < g.cell_count(); ++i) EXPECT_NEAR(V(g.center(i)), outer[i], 1e-12 * outer[i]);
}

TEST(HavinMazya, ZeroAndMonotone) {
  auto g = GridGeometry::square(16);
  EXPECT_EQ(havin_mazya_potential(constant_field(g, 0.0), 0.5, 3.0, {0.5, 0.5}), 0.0);
  Rng rng(11);
  auto f = magnitude_field(sample_scalar(g, random_bumps(rng, g)), 1.0);
  auto fg = GridField::scalar(g, [&](const Point& x) { return f.values()[g.locate(x)] + 0.1 * x[0]; });
  for (std::size_t i : {5ul, 100ul, 200ul})
    EXPECT_LE(havin_mazya_potential(f, 0.5, 3.0, g.center(i)), havin_mazya_potential(fg, 0.5, 3.0, g.center(i)));
}

TEST(OscillationPotential, ConstantIsZero) {
  auto g = GridGeometry::square(32);
  const std::vector<double> c{0.3, -1.2};
  auto F = GridField::constant(g, Shape::Matrix, 1, c);
  EXPECT_NEAR(oscillation_potential(F, 2.0, 0.25, g.center(g.locate({0.5, 0.5}))), 0.0, 1e-14);
}

TEST(OscillationPotential, OddFieldReducesToAverage) {
  // F odd about the cell centre x: every lattice ball mean vanishes, so the
  // integrand is (⨍|F|^{p'})^{1/p}, which is W^R_{p/(p+1),p+1}(|F|^{p'}) on the same panels.
  auto g = GridGeometry::square(48);
  const Point x = g.center(g.locate({0.5, 0.5}));
  for (double p : {1.5, 2.0, 3.0}) {
    auto F = GridField::sample(g, Shape::Matrix, 1, [&](const Point& y, std::span<double> out) {
      const double a = y[0] - x[0], b = y[1] - x[1];
      out[0] = a * (1.0 + b * b);
      out[1] = std::sin(3.0 * b);
    });
    const double osc = oscillation_potential(F, p, 0.3, x);
    const double w = wulff_potential(magnitude_field(F, p / (p - 1.0)), {p / (p + 1.0), p + 1.0, 0.3}, x);
    EXPECT_NEAR(osc, w, 1e-10 * w) << p;
  }
}

TEST(OscillationPotential, DominatedByWulffOnRandomFields) {
  auto g = GridGeometry::square(32);
  const Point x = g.center(g.locate({0.5, 0.5}));
  for (int k = 0; k < 50; ++k) {
    Rng rng = Rng::derive(21, k);
    const double p = 1.5 + 1.5 * rng.uniform();
    auto b1 = random_bumps(rng, g), b2 = random_bumps(rng, g);
    auto F = GridField::sample(g, Shape::Matrix, 1, [&](const Point& y, std::span<double> out) {
      out[0] = b1(y);
      out[1] = b2(y);
    });
    const double osc = oscillation_potential(F, p, 0.25, x);
    const double w = wulff_potential(magnitude_field(F, p / (p - 1.0)), {p / (p + 1.0), p + 1.0, 0.25}, x);
    EXPECT_LE(osc, std::pow(2.0, 1.0 / (p - 1.0)) * w * (1.0 + 1e-12)) << k;
  }
}
