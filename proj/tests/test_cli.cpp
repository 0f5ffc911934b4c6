#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "wulff_lab/wulff_lab.hpp"

using namespace wlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / "wulff_lab_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Cmd {
  int code;
  std::string out;
};

Cmd run_cli(const std::string& args, const fs::path& dir) {
  const auto log = dir / "cli.log";
  const std::string cmd = std::string(WULFF_LAB_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(log)};
}

std::vector<Rgb> rect_colours(const std::string& svg) {
  std::vector<Rgb> out;
  std::regex re("<rect x=\"\\d+\" y=\"\\d+\" width=\"\\d+\" height=\"\\d+\" fill=\"#([0-9a-f]{2})([0-9a-f]{2})([0-9a-f]{2})\"/>");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back({std::stoi((*it)[1], nullptr, 16), std::stoi((*it)[2], nullptr, 16), std::stoi((*it)[3], nullptr, 16)});
  return out;
}

const char* kTelescopeConfig = R"(# seeded telescoping check
[grid]
cells = 64

[verify]
theorems = telescope
seed = 7
telescope.count = 8

[output]
dir = out
formats = json, csv
)";

}  // namespace

TEST(RunConfig, ParsesSectionsAndTypes) {
  const auto c = RunConfig::parse("[grid]\ncells = 32 ; comment\n[verify]\ntheorems = hardy, telescope\nseed=5\n");
  EXPECT_EQ(c.get_int("grid", "cells", 0), 32);
  EXPECT_EQ(c.get_u64("verify", "seed", 0), 5u);
  EXPECT_EQ(c.get_list("verify", "theorems"), (std::vector<std::string>{"hardy", "telescope"}));
  EXPECT_EQ(c.get_double("grid", "side", 2.5), 2.5);
}

TEST(RunConfig, ErrorsCarryLineAndColumn) {
  auto expect_msg = [](const std::string& text, const std::string& where) {
    try {
      const auto c = RunConfig::parse(text, "x.cfg");
      c.get_double("grid", "cells", 0.0);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ConfigParse);
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  };
  expect_msg("[grid]\ncells = abc\n", "x.cfg:2:9:");
  expect_msg("[nope]\n", "x.cfg:1:2:");
  expect_msg("cells = 3\n", "x.cfg:1:1:");
  expect_msg("[grid]\ncells = 1\ncells = 2\n", "x.cfg:3:1:");
  expect_msg("[grid]\n[grid]\n", "x.cfg:2:1:");
  expect_msg("[grid\n", "x.cfg:1:1:");
}

TEST(Runner, ValidatesBeforeComputing) {
  auto bad = [](const std::string& verify, const std::string& needle) {
    const auto c = RunConfig::parse("[grid]\ncells = 32\n[verify]\n" + verify, "v.cfg");
    try {
      Runner r(c, {});
      FAIL() << verify;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ConfigParse);
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  bad("theorems = nosuch\n", "unknown theorem id 'nosuch'");
  bad("theorems = hardy\nhardy.q = -1\n", "v.cfg:5:");
  bad("theorems = hardy\nhardy.case = iv\n", "v.cfg:5:");
  bad("theorems = hardy\ntelescope.count = 3\n", "no requested theorem uses it");
  bad("theorems = hardy\nhardy.bogus = 3\n", "unknown key 'hardy.bogus'");
  bad("theorems = domination\ndomination.alpha = 1.5\n", "alpha*s");
  bad("theorems = lipschitz\nlipschitz.omega = const:1\n", "Dini");
  bad("theorems = potential-norms\nnorms.part = lorentz\nnorms.sigma = 9\n", "v.cfg:");
  bad("theorems = lorentz-regularity\nlorentz.gammas = 0.2, 0.6\n", "gamma");
  bad("theorems = pointwise\npointwise.R = 0.6\n", "v.cfg:5:");
}

TEST(Runner, TheoremTableIsComplete) {
  const auto t = theorem_listing();
  for (const char* id : {"pointwise", "pointwise-osc", "oscillation", "energy", "hardy", "telescope", "domination",
                         "potential-norms", "balance", "holder", "campanato", "bmo", "lipschitz", "lorentz-regularity"})
    EXPECT_NE(t.find(id), std::string::npos) << id;
}

TEST(Cli, ListTheorems) {
  const auto d = scratch("list");
  const auto r = run_cli("--list-theorems", d);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("telescope"), std::string::npos);
  EXPECT_NE(r.out.find("hardy"), std::string::npos);
}

TEST(Cli, TelescopeRunWritesReportsAndIsDeterministic) {
  const auto d = scratch("tele");
  put(d / "run.cfg", kTelescopeConfig);
  auto r = run_cli("run " + (d / "run.cfg").string(), d);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto json = slurp(d / "out" / "telescope.json");
  const auto csv = slurp(d / "out" / "telescope.csv");
  const auto j = ojson::parse(json);
  EXPECT_EQ(j["theorem"], "telescope");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["seed"], 7);
  r = run_cli("run " + (d / "run.cfg").string() + " --out " + (d / "again").string(), d);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(d / "again" / "telescope.json"), json);
  EXPECT_EQ(slurp(d / "again" / "telescope.csv"), csv);
  // A different seed changes the sampled fields.
  r = run_cli("run " + (d / "run.cfg").string() + " --seed 8 --out " + (d / "other").string(), d);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(slurp(d / "other" / "telescope.json"), json);
}

TEST(Cli, MissingFieldFileIsAnError) {
  const auto d = scratch("missing");
  put(d / "run.cfg", "[data]\nu = nowhere_u.wlf\nF = nowhere_F.wlf\n[verify]\ntheorems = pointwise\n");
  const auto r = run_cli("run " + (d / "run.cfg").string(), d);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ConfigParse"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("nowhere_u.wlf"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("run.cfg:2:5"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(d / "wulff-lab-out"));
}

TEST(Cli, FailedVerificationExitsTwo) {
  const auto d = scratch("fail");
  put(d / "run.cfg",
      "[verify]\ntheorems = balance\nbalance.instance = zygmund\nbalance.p = 1.5\nbalance.q = 3.5\n"
      "balance.beta = 0.5\nbalance.expect = unsatisfiable\n[output]\ndir = out\n");
  const auto r = run_cli("run " + (d / "run.cfg").string(), d);
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_FALSE(ojson::parse(slurp(d / "out" / "balance.json"))["pass"].get<bool>());
}

TEST(Cli, FileBackedPairAndHeatmaps) {
  const auto d = scratch("files");
  lab::PairSpec s;
  s.kind = "manufactured-sin";
  const auto pr = lab::build_pair(s, 32);
  write_field(d / "u.wlf", pr.u);
  write_field(d / "F.wlf", pr.F);
  put(d / "run.cfg",
      "[data]\nu = u.wlf\nF = F.wlf\n[verify]\ntheorems = pointwise, energy\n[output]\ndir = out\nformats = json, svg\n");
  const auto r = run_cli("run " + (d / "run.cfg").string(), d);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(d / "out" / "pointwise.json"));
  EXPECT_FALSE(fs::exists(d / "out" / "pointwise.csv"));
  EXPECT_EQ(rect_colours(slurp(d / "out" / "u.svg")).size(), 32u * 32u + 32u);
}

TEST(Cli, NormAndPotentialCommands) {
  const auto d = scratch("norm");
  auto g = GridGeometry::square(32);
  const auto f = GridField::scalar(g, [](const Point& x) { return 1.0 + x[0] * x[1]; });
  write_field(d / "f.wlf", f);
  auto r = run_cli("norm " + (d / "f.wlf").string() + " --space lebesgue:2", d);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(std::stod(r.out), lebesgue_norm(f, 2.0), 1e-15);
  r = run_cli("norm " + (d / "f.wlf").string() + " --space orlicz:power:2", d);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(std::stod(r.out), lebesgue_norm(f, 2.0), 1e-9);
  r = run_cli("norm " + (d / "f.wlf").string() + " --space sobolev:1", d);
  EXPECT_EQ(r.code, 1);
  r = run_cli("potential " + (d / "f.wlf").string() + " --alpha 0.5 --s 3 --radius 0.25 --at 0.5,0.5", d);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(std::stod(r.out), wulff_potential(f, {0.5, 3.0, 0.25}, {0.5, 0.5}), 1e-14);
  r = run_cli("potential " + (d / "f.wlf").string() + " --alpha 0.5 --s 3 --radius 0.25 --kind riesz --out " +
                  (d / "pot").string(),
              d);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(d / "pot" / "riesz.svg"));
  EXPECT_EQ(read_field(d / "pot" / "riesz.wlf").values()[40], riesz_field(f, 0.5).values()[40]);
}

TEST(Cli, SolveWritesField) {
  const auto d = scratch("solve");
  put(d / "solve.cfg", "[grid]\ncells = 16\n[system]\np = 2\n[data]\nfamily = manufactured-sin\n[output]\ndir = out\n");
  const auto r = run_cli("solve " + (d / "solve.cfg").string(), d);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto u = read_field(d / "out" / "u.wlf");
  EXPECT_EQ(u.geometry().cells(0), 16);
  EXPECT_TRUE(ojson::parse(slurp(d / "out" / "solve.json")).contains("residual"));
}

TEST(Heatmap, ConstantFieldSingleColour) {
  auto g = GridGeometry::square(8);
  const double c = 2.0;
  const auto svg = render_svg(GridField::constant(g, Shape::Scalar, 1, std::span<const double>(&c, 1)));
  const auto cols = rect_colours(svg);
  ASSERT_EQ(cols.size(), 64u + 32u);
  for (std::size_t i = 1; i < 64; ++i) EXPECT_EQ(cols[i], cols[0]);
  EXPECT_NE(svg.find("min 2<"), std::string::npos);
  EXPECT_NE(svg.find("max 2<"), std::string::npos);
}

TEST(Heatmap, LinearRampIsMonotone) {
  auto g = GridGeometry::square(16);
  const auto cols = rect_colours(render_svg(GridField::scalar(g, [](const Point& x) { return x[0]; })));
  // Along one row the ramp position grows; the colour stops are ordered in green and in blue-to-yellow sum.
  for (int i = 1; i < 16; ++i) {
    const Rgb a = cols[i - 1], b = cols[i];
    EXPECT_GE(b.g, a.g) << i;
    EXPECT_FALSE(a == b) << i;
  }
  EXPECT_EQ(cols[0], colour_at(0.0));
  EXPECT_EQ(cols[15], colour_at(1.0));
}

TEST(Heatmap, RieszMapOfBumpDecreasesRadially) {
  auto g = GridGeometry::square(32);
  const Point c = g.center(g.locate({0.5, 0.5}));
  const auto bump = GridField::scalar(g, [&](const Point& x) {
    const double r2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
    return std::exp(-r2 / 0.002);
  });
  const auto map = riesz_field(bump, 1.0);
  const auto cols = rect_colours(render_svg(map));
  // Walk the row of the bump from its centre to the right edge: green channel never increases.
  const std::size_t j = g.locate(c) / 32, i0 = g.locate(c) % 32;
  for (std::size_t i = i0 + 1; i < 32; ++i) EXPECT_LE(cols[j * 32 + i].g, cols[j * 32 + i - 1].g) << i;
  for (std::size_t i = i0 + 1; i < 32; ++i) EXPECT_LT(map.values()[j * 32 + i], map.values()[j * 32 + i - 1]);
}

TEST(Heatmap, RejectsNonScalar) {
  auto g = GridGeometry::square(4);
  EXPECT_THROW(render_svg(GridField::zeros(g, Shape::Matrix, 1)), Error);
}
