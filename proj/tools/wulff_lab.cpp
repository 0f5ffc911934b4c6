// wulff-lab: batch front-end for the verification lab.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wulff_lab/wulff_lab.hpp"

namespace {

int cmd_run(const std::string& config, const wlab::RunOptions& opt) {
  const auto cfg = wlab::RunConfig::load(config);
  wlab::Runner runner(cfg, opt);
  const auto res = runner.run();
  std::size_t passed = 0;
  for (const auto& r : res.results) passed += r.second;
  std::cerr << passed << "/" << res.results.size() << " verifications passed; reports in "
            << runner.out_dir().string() << '\n';
  return res.exit_code;
}

int cmd_solve(const std::string& config, const wlab::RunOptions& opt) {
  const auto cfg = wlab::RunConfig::load(config);
  const auto res = wlab::run_solve(cfg, opt);
  std::cout << "iterations " << res.report.iterations << "\nresidual " << wlab::detail::fmt_g17(res.report.residual)
            << "\nfield " << res.field_path.string() << '\n';
  return wlab::kExitPass;
}

int cmd_norm(const std::string& field, const std::string& space) {
  const auto f = wlab::read_field(field);
  std::cout << wlab::detail::fmt_g17(wlab::evaluate_norm(f, space)) << '\n';
  return wlab::kExitPass;
}

struct PotentialArgs {
  std::string field;
  std::string kind = "wulff";
  double alpha = 0.5;
  double s = 2.0;
  double radius = 0.25;
  std::vector<double> at;
};

int cmd_potential(const PotentialArgs& a, const wlab::RunOptions& opt) {
  const auto raw = wlab::read_field(a.field);
  const auto f = wlab::magnitude_field(raw, 1.0);
  const auto& g = f.geometry();
  if (!a.at.empty()) {
    if (static_cast<int>(a.at.size()) != g.dim())
      throw wlab::Error(wlab::Errc::DimensionMismatch, "--at needs one coordinate per grid axis");
    wlab::Point x(a.at.begin(), a.at.end());
    double v = 0.0;
    if (a.kind == "wulff")
      v = wlab::wulff_potential(f, {a.alpha, a.s, a.radius}, x);
    else if (a.kind == "riesz")
      v = wlab::riesz_potential(f, a.alpha, x);
    else
      v = wlab::havin_mazya_potential(f, a.alpha, a.s, x);
    std::cout << wlab::detail::fmt_g17(v) << '\n';
    return wlab::kExitPass;
  }
  wlab::GridField map;
  if (a.kind == "wulff") {
    wlab::detail::check_wulff_params({a.alpha, a.s, a.radius});
    map = wlab::Runner::wulff_map(f, {a.alpha, a.s, a.radius});
  } else if (a.kind == "riesz") {
    map = wlab::riesz_field(f, a.alpha);
  } else {
    map = wlab::HavinMazya(f, a.alpha, a.s).field();
  }
  const std::filesystem::path out = opt.out ? *opt.out : std::filesystem::path(".");
  std::filesystem::create_directories(out);
  wlab::write_field(out / (a.kind + ".wlf"), map);
  if (g.dim() == 2) wlab::render_heatmap(map, out / (a.kind + ".svg"), a.kind + " potential");
  std::cout << (out / (a.kind + ".wlf")).string() << '\n';
  return wlab::kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wulff-lab: numerical lab for potential estimates of p-Laplace systems"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  bool list = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int threads = 0;
  app.add_flag("--list-theorems", list, "Print the theorem-id table and exit");
  app.add_option("--seed", seed, "Override the seed in [verify]");
  app.add_option("--out", out, "Output directory");
  app.add_option("--threads", threads, "Worker threads (fallback: WULFF_LAB_THREADS)")->check(CLI::PositiveNumber);

  std::string config;
  auto* run = app.add_subcommand("run", "Run the verifications declared in a config");
  run->add_option("config", config, "Config file")->required();
  auto* solve = app.add_subcommand("solve", "Solve the Dirichlet problem declared in a config");
  solve->add_option("config", config, "Config file")->required();

  std::string field, space;
  auto* norm = app.add_subcommand("norm", "Evaluate a function-space norm of a field file");
  norm->add_option("field", field, "Field file")->required();
  norm->add_option("--space", space, "lebesgue:q | lorentz:q,rho[,beta] | orlicz:<young> | bmo | campanato:<weight>[,q]")
      ->required();

  PotentialArgs pa;
  auto* pot = app.add_subcommand("potential", "Evaluate a potential of |f| for a field file");
  pot->add_option("field", pa.field, "Field file")->required();
  pot->add_option("--alpha", pa.alpha, "Order alpha")->required();
  pot->add_option("--s", pa.s, "Exponent s")->required();
  pot->add_option("--radius", pa.radius, "Truncation radius R (wulff)")->required();
  pot->add_option("--kind", pa.kind, "wulff | riesz | havin-mazya")
      ->check(CLI::IsMember({"wulff", "riesz", "havin-mazya"}));
  pot->add_option("--at", pa.at, "Evaluation point; omit to write the whole map")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) wlab::set_thread_count(threads);
  wlab::RunOptions opt;
  opt.seed = seed;
  if (out) opt.out = *out;

  if (list) {
    std::cout << wlab::theorem_listing();
    return wlab::kExitPass;
  }
  try {
    if (*run) return cmd_run(config, opt);
    if (*solve) return cmd_solve(config, opt);
    if (*norm) return cmd_norm(field, space);
    if (*pot) return cmd_potential(pa, opt);
  } catch (const std::exception& e) {
    std::cerr << "wulff-lab: error: " << e.what() << '\n';
    return wlab::kExitError;
  }
  std::cerr << app.help();
  return wlab::kExitError;
}
