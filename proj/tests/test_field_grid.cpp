#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "wulff_lab/field.hpp"
#include "wulff_lab/field_io.hpp"
#include "wulff_lab/parallel.hpp"

using namespace wlab;

namespace {

GridField x1_field(const GridGeometry& g) {
  return GridField::scalar(g, [](const Point& x) { return x[0]; });
}

GridField half_indicator(const GridGeometry& g) {
  return GridField::scalar(g, [](const Point& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
}

std::filesystem::path temp_path(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / "wulff_lab_tests";
  std::filesystem::create_directories(d);
  return d / name;
}

}  // namespace

TEST(GridGeometry, CellCentresAndLayout) {
  GridGeometry g({4, 3}, {1.0, 0.6}, {-1.0, 0.0});
  EXPECT_EQ(g.cell_count(), 12u);
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.25);
  EXPECT_DOUBLE_EQ(g.spacing(1), 0.2);
  // Axis 0 varies fastest.
  const Point c = g.center(5);
  EXPECT_DOUBLE_EQ(c[0], -1.0 + 1.5 * 0.25);
  EXPECT_DOUBLE_EQ(c[1], 0.3);
  EXPECT_EQ(g.locate(c), 5u);
}

TEST(GridGeometry, RejectsDegenerateInput) {
  EXPECT_THROW(GridGeometry({4}, {1.0}, {0.0}), Error);
  EXPECT_THROW(GridGeometry({4, 0}, {1.0, 1.0}, {0.0, 0.0}), Error);
  EXPECT_THROW(GridGeometry({4, 4}, {1.0, -1.0}, {0.0, 0.0}), Error);
}

TEST(Ball, OutsideAndBelowResolution) {
  auto g = GridGeometry::square(32);
  auto f = GridField::zeros(g, Shape::Scalar, 1);
  try {
    ball_average(f, Ball{{0.1, 0.5}, 0.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BallOutsideDomain);
  }
  try {
    ball_average(f, Ball{{0.5, 0.5}, 0.01});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BallBelowResolution);
  }
}

TEST(BallAverage, ConstantIsExact) {
  for (int cells : {16, 37, 64}) {
    auto g = GridGeometry::square(cells);
    const double three = 3.0;
    auto f = GridField::constant(g, Shape::Scalar, 1, std::span<const double>(&three, 1));
    for (double r : {0.1, 0.2, 0.33}) EXPECT_EQ(ball_average(f, Ball{{0.5, 0.45}, r})[0], 3.0);
  }
}

TEST(BallAverage, LinearBySymmetry) {
  auto g = GridGeometry::square(64);
  EXPECT_NEAR(ball_average(x1_field(g), Ball{{0.5, 0.5}, 0.2})[0], 0.5, 1e-12);
}

TEST(BallAverage, HalfIndicatorAreaRatio) {
  // Oracle: the chord x₁ = 0.5 halves B_{0.25}((0.5, 0.5)) exactly.
  for (int cells : {64, 128}) {
    auto g = GridGeometry::square(cells);
    EXPECT_NEAR(ball_average(half_indicator(g), Ball{{0.5, 0.5}, 0.25})[0], 0.5, 2.0 / cells);
  }
  // Off-centre chord: segment area ratio of a disc cut at distance d from the centre.
  auto g = GridGeometry::square(256);
  const double d = 0.1, r = 0.25;
  const double seg = r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
  const double ratio = 1.0 - seg / (std::numbers::pi * r * r);
  EXPECT_NEAR(ball_average(half_indicator(g), Ball{{0.4, 0.5}, r})[0], ratio, 2.0 / 256);
}

TEST(BallOscillation, ConstantIsZero) {
  auto g = GridGeometry::square(32);
  const double c = -2.5;
  auto f = GridField::constant(g, Shape::Scalar, 1, std::span<const double>(&c, 1));
  EXPECT_EQ(ball_oscillation(f, Ball{{0.5, 0.5}, 0.3}, 1.0), 0.0);
}

TEST(BallOscillation, TwoValueField) {
  // Values 1 and 0 in equal proportion: mean 1/2, every deviation 1/2.
  auto g = GridGeometry::square(128);
  EXPECT_NEAR(ball_oscillation(half_indicator(g), Ball{{0.5, 0.5}, 0.25}, 1.0), 0.5, 1.0 / 128);
  EXPECT_NEAR(ball_oscillation(half_indicator(g), Ball{{0.5, 0.5}, 0.25}, 2.0), 0.5, 1.0 / 128);
}

TEST(BallOscillation, MeanValueTriangleInequality) {
  auto g = GridGeometry::square(48);
  auto f = GridField::scalar(g, [](const Point& x) { return std::sin(7 * x[0]) + x[1] * x[1]; });
  const Ball b{{0.45, 0.55}, 0.3};
  auto cells = cells_in_ball(g, b);
  const double osc = ball_oscillation(f, b, 1.0);
  for (double c : {-1.0, 0.0, 0.3, 0.7, 2.0}) {
    const double dev = deviation_over(f, cells, std::vector<double>{c}, 1.0);
    EXPECT_LE(osc, 2.0 * dev + 1e-14);
  }
}

TEST(Gradient, ConstantIsZero) {
  auto g = GridGeometry::square(16);
  const double c = 4.0;
  auto du = gradient(GridField::constant(g, Shape::Scalar, 1, std::span<const double>(&c, 1)));
  for (double v : du.values()) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, LinearVectorFieldExact) {
  auto g = GridGeometry::square(16);
  auto u = GridField::sample(g, Shape::Vector, 2, [](const Point& x, std::span<double> out) {
    out[0] = x[0];
    out[1] = 0.0;
  });
  auto du = gradient(u);
  ASSERT_EQ(du.shape(), Shape::Matrix);
  ASSERT_EQ(du.components(), 4);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const auto m = du.at(i);  // row-major N x n
    EXPECT_NEAR(m[0], 1.0, 1e-12);
    EXPECT_NEAR(m[1], 0.0, 1e-12);
    EXPECT_NEAR(m[2], 0.0, 1e-12);
    EXPECT_NEAR(m[3], 0.0, 1e-12);
  }
}

TEST(Gradient, SecondOrderOnSmoothField) {
  const double pi = std::numbers::pi;
  double err[2];
  int k = 0;
  for (int cells : {32, 64}) {
    auto g = GridGeometry::square(cells);
    auto u = GridField::scalar(g, [&](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); });
    auto du = gradient(u);
    double e = 0.0;
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
      const Point x = g.center(i);
      e = std::max(e, std::abs(du(i, 0) - pi * std::cos(pi * x[0]) * std::sin(pi * x[1])));
      e = std::max(e, std::abs(du(i, 1) - pi * std::sin(pi * x[0]) * std::cos(pi * x[1])));
    }
    err[k++] = e;
  }
  EXPECT_LT(err[0], 0.05);
  EXPECT_GT(err[0] / err[1], 3.5);  // O(h²) including the one-sided boundary closure
}

TEST(FieldIo, RoundTripIsBitExact) {
  GridGeometry g({5, 3}, {1.0, 0.75}, {-0.5, 0.125});
  auto f = GridField::sample(g, Shape::Matrix, 2, [](const Point& x, std::span<double> out) {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = std::exp(x[0] * (c + 1)) - 1e-300 * c + x[1] / 3.0;
  });
  const auto path = temp_path("roundtrip.wlf");
  write_field(path, f);
  const auto back = read_field(path);
  EXPECT_EQ(back.geometry(), f.geometry());
  EXPECT_EQ(back.shape(), f.shape());
  EXPECT_EQ(back.rows(), f.rows());
  ASSERT_EQ(back.values().size(), f.values().size());
  for (std::size_t i = 0; i < f.values().size(); ++i) EXPECT_EQ(back.values()[i], f.values()[i]);
}

TEST(FieldIo, MissingBlockIsMalformed) {
  auto g = GridGeometry::square(4);
  // A 2 x 2 matrix field declares 4 component blocks; drop the last one.
  std::string bytes = encode_field(GridField::zeros(g, Shape::Matrix, 2));
  bytes.resize(bytes.size() - 8 * g.cell_count());
  try {
    decode_field(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedHeader);
  }
}

TEST(FieldIo, NanSampleRejected) {
  auto g = GridGeometry::square(4);
  std::string bytes = encode_field(GridField::zeros(g, Shape::Scalar, 1));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::uint64_t bits = detail::to_le(std::bit_cast<std::uint64_t>(nan));
  std::memcpy(bytes.data() + bytes.size() - 8, &bits, 8);
  try {
    decode_field(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonFiniteValue);
  }
}

TEST(FieldIo, MissingFileIsIoError) {
  try {
    read_field(temp_path("does-not-exist.wlf"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
}

TEST(Parallel, EveryIndexOnceAndErrorsPropagate) {
  set_thread_count(3);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw Error(Errc::InvalidArgument, "boom");
               }),
               Error);
  set_thread_count(0);
}
