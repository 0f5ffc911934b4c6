#pragma once

// Batch front-end: turns a RunConfig into validated jobs, runs them and writes
// reports and heatmaps. Exit codes: 0 all pass, 2 some verification failed,
// 1 error.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wulff_lab/campanato.hpp"
#include "wulff_lab/config.hpp"
#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/field_io.hpp"
#include "wulff_lab/heatmap.hpp"
#include "wulff_lab/lab/lemmas.hpp"
#include "wulff_lab/lab/main_estimates.hpp"
#include "wulff_lab/lab/orlicz.hpp"
#include "wulff_lab/lab/pairs.hpp"
#include "wulff_lab/lab/potentials.hpp"
#include "wulff_lab/lab/regularity.hpp"
#include "wulff_lab/plaplace.hpp"
#include "wulff_lab/potential.hpp"
#include "wulff_lab/rearrangement.hpp"
#include "wulff_lab/report.hpp"
#include "wulff_lab/weights.hpp"
#include "wulff_lab/young.hpp"

namespace wlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;

struct TheoremInfo {
  std::string id;
  std::string summary;
  std::set<std::string> keys;  ///< accepted "<prefix>.<key>" parameters in [verify]
  std::string prefix;
};

inline const std::vector<TheoremInfo>& theorem_table() {
  static const std::vector<TheoremInfo> t = {
      {"pointwise", "|u(x)| <= C [W^R_{p/(p+1),p+1}(|F|^{p'})(x) + avg_{B_R(x)} |u|]", {"R", "per_axis"}, "pointwise"},
      {"pointwise-osc", "pointwise bound with the oscillation potential of F", {"R", "per_axis"}, "pointwise"},
      {"oscillation", "mean oscillation of u on B_r against the F-oscillation integral over (r, R)",
       {"R", "per_axis", "radii"}, "oscillation"},
      {"energy", "reverse Hoelder, Caccioppoli and interpolation bounds on B_{R/2}, B_R", {"R", "per_axis"}, "energy"},
      {"hardy", "one-dimensional Hardy inequalities, cases i, ii-far, ii-near",
       {"case", "q", "alpha", "k", "a", "family", "count"}, "hardy"},
      {"telescope", "ball-mean telescoping bounds with constants 2^{2n+2}, 2^{2n+3}", {"count", "R", "ratios"},
       "telescope"},
      {"domination", "W_{alpha,s} f <= C V_{alpha,s} f on nonnegative fields", {"alpha", "s", "count", "band"},
       "domination"},
      {"potential-norms", "Lorentz and Orlicz bounds for V_{alpha,s}",
       {"part", "alpha", "s", "sigma", "rho", "A", "B", "count"}, "norms"},
      {"balance", "balance condition F(E(t)/gamma) <= gamma A(t)/t for Young functions A, B",
       {"A", "B", "n", "p", "alpha", "s", "expect", "instance", "q", "beta", "extra_log", "t0", "t_max"}, "balance"},
      {"holder", "oscillation decay exponent 1 - n/(q(p-1)) for p = 2", {"q", "R", "tol"}, "holder"},
      {"campanato", "Morrey data gives the Campanato space with weight mu", {"pair", "p", "omega", "band"},
       "campanato"},
      {"bmo", "borderline Morrey order gives u in BMO", {"band"}, "bmo"},
      {"lipschitz", "Dini data gives linear oscillation decay", {"omega", "p", "R", "tol"}, "lipschitz"},
      {"lorentz-regularity", "Lorentz index map L^{qp',.} -> L^{qnp/(n-qp),.}", {"gammas", "p", "R", "tol", "band"},
       "lorentz"},
  };
  return t;
}

inline const TheoremInfo* find_theorem(const std::string& id) {
  for (const auto& t : theorem_table())
    if (t.id == id) return &t;
  return nullptr;
}

inline std::string theorem_listing() {
  std::ostringstream os;
  std::size_t w = 0;
  for (const auto& t : theorem_table()) w = std::max(w, t.id.size());
  for (const auto& t : theorem_table()) {
    os << t.id << std::string(w + 2 - t.id.size(), ' ') << t.summary << '\n';
  }
  return os.str();
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::ostream* log = &std::cerr;
};

struct Job {
  std::string id;
  std::function<VerificationReport()> run;
};

struct RunOutcome {
  int exit_code = kExitPass;
  std::vector<std::pair<std::string, bool>> results;
};

namespace runner_detail {

/// Typed access to "<prefix>.<key>" entries of [verify].
class VerifyParams {
 public:
  VerifyParams(const RunConfig& c, std::string prefix) : c_(c), pre_(std::move(prefix)) {}
  std::string key(const std::string& k) const { return pre_ + "." + k; }
  bool has(const std::string& k) const { return c_.find("verify", key(k)) != nullptr; }
  double num(const std::string& k, double def) const { return c_.get_double("verify", key(k), def); }
  long long integer(const std::string& k, long long def) const { return c_.get_int("verify", key(k), def); }
  std::string str(const std::string& k, const std::string& def) const { return c_.get_string("verify", key(k), def); }
  std::vector<double> nums(const std::string& k) const {
    std::vector<double> out;
    for (const auto& s : c_.get_list("verify", key(k))) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(s, &pos));
        if (pos != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        fail(k, "'" + key(k) + "' must be a list of numbers");
      }
    }
    return out;
  }
  [[noreturn]] void fail(const std::string& k, const std::string& msg) const { c_.fail_at("verify", key(k), msg); }

 private:
  const RunConfig& c_;
  std::string pre_;
};

/// Runs `check` and converts any module error into a ConfigParse error pinned to `k`.
template <class Fn>
void validate(const VerifyParams& vp, const std::string& k, Fn&& check) {
  try {
    check();
  } catch (const Error& e) {
    vp.fail(k, e.what());
  }
}

}  // namespace runner_detail

/// Parsed and validated run: nothing heavy happens until run().
class Runner {
 public:
  Runner(const RunConfig& cfg, const RunOptions& opt) : cfg_(cfg), opt_(opt) { configure(); }

  const std::vector<Job>& jobs() const { return jobs_; }
  const std::filesystem::path& out_dir() const { return out_; }

  RunOutcome run() {
    RunOutcome res;
    std::filesystem::create_directories(out_);
    for (const auto& job : jobs_) {
      VerificationReport rep;
      try {
        rep = job.run();
      } catch (const Error& e) {
        throw Error(e.code(), "theorem " + job.id + ": " + e.what());
      }
      rep.seed = rep.seed ? rep.seed : seed_;
      write_report(job.id, rep);
      res.results.emplace_back(job.id, rep.pass);
      if (opt_.log) *opt_.log << (rep.pass ? "PASS " : "FAIL ") << job.id << "  C*=" << detail::csv_num(rep.c_star) << '\n';
      if (!rep.pass) res.exit_code = kExitFail;
    }
    if (formats_.count("svg")) write_heatmaps();
    return res;
  }

 private:
  void configure() {
    cfg_.require_keys("grid", {"cells", "side"});
    cfg_.require_keys("system", {"p", "N"});
    cfg_.require_keys("data", {"family", "u", "F", "g", "q", "gamma"});
    cfg_.require_keys("solver", {"tol", "max_iters", "eps"});
    cfg_.require_keys("output", {"dir", "formats", "heatmaps"});

    cells_ = static_cast<int>(cfg_.get_int("grid", "cells", 64));
    if (cells_ < 8 || cells_ > 4096) cfg_.fail_at("grid", "cells", "cells must lie in [8, 4096]");
    side_ = cfg_.get_double("grid", "side", 1.0);
    if (!(side_ > 0.0)) cfg_.fail_at("grid", "side", "side must be positive");
    p_ = cfg_.get_double("system", "p", 2.0);
    if (!(p_ > 1.0)) cfg_.fail_at("system", "p", "p must exceed 1");
    if (cfg_.get_int("system", "N", 1) != 1) cfg_.fail_at("system", "N", "only scalar systems (N = 1) are built in");
    tol_ = cfg_.get_double("solver", "tol", 1e-8);
    if (!(tol_ > 0.0 && tol_ < 1.0)) cfg_.fail_at("solver", "tol", "tol must lie in (0, 1)");

    family_ = cfg_.get_string("data", "family", "manufactured-sin");
    u_path_ = cfg_.get_existing_path("data", "u");
    F_path_ = cfg_.get_existing_path("data", "F");
    g_path_ = cfg_.get_existing_path("data", "g");
    if (u_path_.empty() != F_path_.empty()) cfg_.fail_at("data", u_path_.empty() ? "F" : "u", "u and F files go together");
    if (u_path_.empty()) {
      const auto& kinds = lab::pair_kinds();
      if (std::find(kinds.begin(), kinds.end(), family_) == kinds.end())
        cfg_.fail_at("data", "family", "unknown data family '" + family_ + "'");
    }

    out_ = opt_.out ? *opt_.out : std::filesystem::path(cfg_.get_string("output", "dir", "wulff-lab-out"));
    if (out_.is_relative() && !opt_.out && !cfg_.origin().empty()) out_ = cfg_.origin().parent_path() / out_;
    auto fm = cfg_.get_list("output", "formats");
    if (fm.empty()) fm = {"json", "csv"};
    for (const auto& f : fm) {
      if (f != "json" && f != "csv" && f != "svg") cfg_.fail_at("output", "formats", "unknown format '" + f + "'");
      formats_.insert(f);
    }
    heatmaps_ = cfg_.get_list("output", "heatmaps");
    if (heatmaps_.empty()) heatmaps_ = {"u", "F"};
    for (const auto& h : heatmaps_)
      if (h != "u" && h != "F" && h != "W") cfg_.fail_at("output", "heatmaps", "unknown heatmap '" + h + "'");

    if (!cfg_.has_section("verify")) cfg_.fail(1, 1, "missing [verify] section");
    seed_ = opt_.seed ? *opt_.seed : cfg_.get_u64("verify", "seed", 1);
    band_ = cfg_.get_double("verify", "band", 0.25);
    const auto ids = cfg_.get_list("verify", "theorems");
    if (ids.empty()) cfg_.fail_at("verify", "theorems", "[verify] needs a non-empty 'theorems' list");
    std::set<std::string> prefixes;
    for (const auto& id : ids) {
      const TheoremInfo* t = find_theorem(id);
      if (!t) cfg_.fail_at("verify", "theorems", "unknown theorem id '" + id + "' (see --list-theorems)");
      prefixes.insert(t->prefix);
    }
    // Every dotted key must belong to a requested theorem and be known to it.
    for (const auto& [k, v] : cfg_.section("verify")->values()) {
      if (k == "theorems" || k == "seed" || k == "band") continue;
      const auto dot = k.find('.');
      if (dot == std::string::npos) cfg_.fail(v.line, 1, "unknown key '" + k + "' in [verify]");
      const std::string pre = k.substr(0, dot), sub = k.substr(dot + 1);
      bool known = false;
      for (const auto& t : theorem_table())
        if (t.prefix == pre && t.keys.count(sub)) known = true;
      if (!known) cfg_.fail(v.line, 1, "unknown key '" + k + "' in [verify]");
      if (!prefixes.count(pre)) cfg_.fail(v.line, 1, "'" + k + "' set but no requested theorem uses it");
    }
    for (const auto& id : ids) add_job(id);
  }

  void check_pair_range(const runner_detail::VerifyParams& vp, double R, int per_axis) {
    runner_detail::validate(vp, "R", [&] {
      if (!(R > 0.0 && 2.0 * R < side_)) throw Error(Errc::BallOutsideDomain, "R must lie in (0, side/2)");
      if (R < 2.0 * side_ / cells_) throw Error(Errc::BallBelowResolution, "R must be at least 2h");
    });
    if (per_axis < 1 || per_axis > 16) vp.fail("per_axis", "per_axis must lie in [1, 16]");
  }

  lab::PairSpec pair_spec() const {
    lab::PairSpec s;
    s.kind = family_;
    s.p = p_;
    s.side = side_;
    s.q = cfg_.get_double("data", "q", 4.0);
    s.gamma = cfg_.get_double("data", "gamma", 0.5);
    s.tol = tol_;
    return s;
  }

  /// Pair-based verifier: refinement trace over generated pairs, or a single
  /// level when u and F come from files.
  template <class Verify>
  std::function<VerificationReport()> pair_job(Verify verify) {
    if (!u_path_.empty()) {
      auto up = u_path_, fp = F_path_;
      const double p = p_;
      return [=] {
        lab::Pair pr{read_field(up), read_field(fp), p, 0.0, "file"};
        auto r = verify(pr);
        r.note("u and F read from files; no refinement trace");
        return r;
      };
    }
    const auto spec = pair_spec();
    if ((spec.kind == "poisson" || spec.kind == "holder") && spec.p != 2.0)
      cfg_.fail_at("system", "p", "data family '" + spec.kind + "' needs p = 2");
    const int cells = cells_;
    const double band = band_;
    return [=] { return lab::refine_pair(spec, cells, band, verify); };
  }

  void add_job(const std::string& id) {
    using runner_detail::VerifyParams;
    using runner_detail::validate;
    const TheoremInfo& t = *find_theorem(id);
    VerifyParams vp(cfg_, t.prefix);
    const std::uint64_t seed = seed_;

    if (id == "pointwise" || id == "pointwise-osc" || id == "oscillation" || id == "energy") {
      lab::EstimateOptions o;
      o.R = vp.num("R", 0.25);
      o.tol = std::max(1e-6, 10.0 * tol_);
      const int per_axis = static_cast<int>(vp.integer("per_axis", 3));
      if (id == "oscillation") o.radii = static_cast<int>(vp.integer("radii", 4));
      if (o.radii < 1) vp.fail("radii", "radii must be positive");
      check_pair_range(vp, o.R, per_axis);
      auto samples = [o, per_axis](const lab::Pair& pr) { return lab::interior_samples(pr.u.geometry(), per_axis, o.R); };
      std::function<VerificationReport()> fn;
      if (id == "pointwise")
        fn = pair_job([=](const lab::Pair& pr) { return lab::verify_pointwise(pr.u, pr.F, pr.p, samples(pr), o); });
      else if (id == "pointwise-osc")
        fn = pair_job([=](const lab::Pair& pr) { return lab::verify_pointwise_osc(pr.u, pr.F, pr.p, samples(pr), o); });
      else if (id == "oscillation")
        fn = pair_job([=](const lab::Pair& pr) { return lab::verify_oscillation(pr.u, pr.F, pr.p, samples(pr), o); });
      else
        fn = pair_job(
            [=](const lab::Pair& pr) { return lab::verify_energy_inequalities(pr.u, pr.F, pr.p, samples(pr), o); });
      jobs_.push_back({id, fn});
      return;
    }
    if (id == "hardy") {
      lab::HardyParams h;
      validate(vp, "case", [&] { h.hardy_case = lab::parse_hardy_case(vp.str("case", "i")); });
      h.q = vp.num("q", 1.0);
      h.alpha = vp.num("alpha", 0.0);
      h.k = vp.num("k", 2.0);
      h.a = vp.num("a", 1.0);
      h.family = vp.str("family", "");
      h.count = static_cast<int>(vp.integer("count", 100));
      h.seed = seed;
      if (h.count < 1) vp.fail("count", "count must be positive");
      if (!h.family.empty() && h.family != "bump" && h.family != "ramp" && h.family != "const")
        vp.fail("family", "family must be bump, ramp or const");
      validate(vp, "q", [&] { lab::check_hardy_params(h); });
      jobs_.push_back({id, [h] { return lab::verify_hardy(h); }});
      return;
    }
    if (id == "telescope") {
      lab::TelescopeFamilyParams tp;
      tp.cells = cells_;
      tp.count = static_cast<int>(vp.integer("count", 100));
      tp.R = vp.num("R", 0.25);
      tp.ratios = static_cast<int>(vp.integer("ratios", 4));
      tp.seed = seed;
      if (tp.count < 1) vp.fail("count", "count must be positive");
      if (!(tp.R > 4.0 / cells_ && tp.R < 0.5)) vp.fail("R", "R must lie in (4h, 1/2)");
      jobs_.push_back({id, [tp] { return lab::verify_telescope_family(tp); }});
      return;
    }
    if (id == "domination") {
      lab::DominationParams d;
      d.alpha = vp.num("alpha", 0.5);
      d.s = vp.num("s", 3.0);
      d.count = static_cast<int>(vp.integer("count", 100));
      d.band = vp.num("band", 0.10);
      d.cells = cells_;
      d.seed = seed;
      if (!(d.s > 1.0 && d.alpha > 0.0 && d.alpha * d.s < 2.0)) vp.fail("alpha", "need s > 1 and 0 < alpha*s < 2");
      jobs_.push_back({id, [d] { return lab::verify_domination(d); }});
      return;
    }
    if (id == "potential-norms") {
      lab::NormMapParams n;
      validate(vp, "part", [&] { n.part = lab::parse_norm_part(vp.str("part", "lorentz")); });
      n.alpha = vp.num("alpha", 0.5);
      n.s = vp.num("s", 3.0);
      n.sigma = vp.num("sigma", 1.2);
      n.rho = vp.num("rho", 2.0);
      n.A = vp.str("A", "power:1.2");
      n.B = vp.str("B", "power:12");
      n.count = static_cast<int>(vp.integer("count", 30));
      n.cells = cells_;
      n.seed = seed;
      if (n.part == lab::NormPart::Orlicz) {
        validate(vp, "A", [&] { YoungFunction::parse(n.A); });
        validate(vp, "B", [&] { YoungFunction::parse(n.B); });
      } else {
        validate(vp, "part", [&] { lab::lorentz_map(n, 2); });
      }
      if (!(n.s > 1.0 && n.alpha > 0.0 && n.alpha * n.s < 2.0)) vp.fail("alpha", "need s > 1 and 0 < alpha*s < 2");
      jobs_.push_back({id, [n] { return lab::verify_potential_norms(n); }});
      return;
    }
    if (id == "balance") {
      lab::BalanceParams b;
      const std::string inst = vp.str("instance", "");
      if (inst == "zygmund") {
        validate(vp, "q", [&] {
          b = lab::zygmund_instance(static_cast<int>(vp.integer("n", 2)), vp.num("p", 1.5), vp.num("q", 3.5),
                                    vp.num("beta", 0.5), vp.num("extra_log", 0.0));
        });
      } else if (!inst.empty()) {
        vp.fail("instance", "instance must be 'zygmund' or absent");
      } else {
        b.A = vp.str("A", b.A);
        b.B = vp.str("B", b.B);
        b.n = static_cast<int>(vp.integer("n", 2));
        b.p = vp.num("p", 0.0);
        b.alpha = vp.num("alpha", b.alpha);
        b.s = vp.num("s", b.s);
      }
      b.t0 = vp.num("t0", 1.0);
      b.t_max = vp.num("t_max", 1e4);
      validate(vp, "expect", [&] { b.expect = lab::parse_expectation(vp.str("expect", "any")); });
      validate(vp, "A", [&] { YoungFunction::parse(b.A); });
      validate(vp, "B", [&] { YoungFunction::parse(b.B); });
      if (!(b.t_max > b.t0 && b.t0 > 0.0)) vp.fail("t_max", "need 0 < t0 < t_max");
      jobs_.push_back({id, [b] { return lab::verify_balance(b); }});
      return;
    }
    if (id == "holder") {
      lab::HolderParams h;
      h.q = vp.num("q", 4.0);
      h.R = vp.num("R", 0.25);
      h.tol = vp.num("tol", 0.075);
      h.cells = cells_;
      if (!(h.q > 2.0)) vp.fail("q", "q must exceed max(p', n/(p-1)) = 2");
      jobs_.push_back({id, [h] { return lab::verify_holder(h); }});
      return;
    }
    if (id == "campanato" || id == "bmo") {
      lab::CampanatoParams c;
      c.cells = cells_;
      c.band = vp.num("band", band_);
      if (id == "campanato") {
        c.pair = vp.str("pair", "bmo");
        c.p = vp.num("p", 1.5);
        c.omega = vp.str("omega", "");
        if (!c.omega.empty()) validate(vp, "omega", [&] { WeightFunction::parse(c.omega); });
        jobs_.push_back({id, [c] { return lab::verify_campanato(c); }});
      } else {
        const int cells = cells_;
        const double band = c.band;
        jobs_.push_back({id, [cells, band] { return lab::verify_bmo(cells, band); }});
      }
      return;
    }
    if (id == "lipschitz") {
      lab::LipschitzParams l;
      l.omega = vp.str("omega", l.omega);
      l.p = vp.num("p", 2.0);
      l.R = vp.num("R", 0.25);
      l.tol = vp.num("tol", 0.05);
      l.cells = cells_;
      validate(vp, "omega", [&] {
        auto w = WeightFunction::parse(l.omega);
        if (!w.dini()) throw Error(Errc::InadmissibleParams, "omega must satisfy the Dini condition");
      });
      jobs_.push_back({id, [l] { return lab::verify_lipschitz(l); }});
      return;
    }
    if (id == "lorentz-regularity") {
      lab::LorentzRegularityParams l;
      if (vp.has("gammas")) l.gammas = vp.nums("gammas");
      l.p = vp.num("p", 1.5);
      l.R = vp.num("R", 0.25);
      l.tol = vp.num("tol", 0.1);
      l.band = vp.num("band", 0.25);
      l.cells = cells_;
      for (double g : l.gammas)
        if (!(g > l.p - 1.0 && g < 2.0 * (l.p - 1.0) / l.p)) vp.fail("gammas", "each gamma must lie in (p-1, n/p')");
      jobs_.push_back({id, [l] { return lab::verify_lorentz_regularity(l); }});
      return;
    }
    cfg_.fail_at("verify", "theorems", "theorem '" + id + "' has no runner");
  }

  void write_report(const std::string& id, const VerificationReport& rep) const {
    if (formats_.count("json")) detail::atomic_write(out_ / (id + ".json"), to_json_text(rep));
    if (formats_.count("csv")) detail::atomic_write(out_ / (id + ".csv"), to_csv(rep));
  }

  void write_heatmaps() const {
    if (!u_path_.empty()) {
      const GridField u = read_field(u_path_), F = read_field(F_path_);
      heatmaps_for(u, F, p_);
      return;
    }
    const lab::Pair pr = lab::build_pair(pair_spec(), cells_);
    heatmaps_for(pr.u, pr.F, pr.p);
  }

  void heatmaps_for(const GridField& u, const GridField& F, double p) const {
    for (const auto& h : heatmaps_) {
      if (h == "u") render_heatmap(magnitude_field(u, 1.0), out_ / "u.svg", "|u|");
      if (h == "F") render_heatmap(magnitude_field(F, 1.0), out_ / "F.svg", "|F|");
      if (h == "W") render_heatmap(wulff_map(magnitude_field(F, p / (p - 1.0)), {p / (p + 1.0), p + 1.0, 0.25}),
                                   out_ / "W.svg", "Wulff potential");
    }
  }

 public:
  /// W^R at every cell whose ball B_R fits in the box; 0 elsewhere.
  static GridField wulff_map(const GridField& f, const PotentialParams& prm) {
    const GridGeometry& g = f.geometry();
    std::vector<double> out(g.cell_count(), 0.0);
    parallel_for(g.cell_count(), [&](std::size_t i) {
      const Point x = g.center(i);
      if (g.contains_ball(x, prm.R)) out[i] = wulff_potential(f, prm, x);
    });
    return GridField(g, Shape::Scalar, 1, std::move(out));
  }

 private:
  const RunConfig& cfg_;
  RunOptions opt_;
  std::vector<Job> jobs_;
  std::filesystem::path out_;
  std::set<std::string> formats_;
  std::vector<std::string> heatmaps_;
  std::filesystem::path u_path_, F_path_, g_path_;
  std::string family_;
  int cells_ = 64;
  double side_ = 1.0, p_ = 2.0, tol_ = 1e-8, band_ = 0.25;
  std::uint64_t seed_ = 1;
};

// ------------------------------------------------------------------ solve

struct SolveOutcome {
  SolveReport report;
  std::filesystem::path field_path;
};

/// [grid], [system], [data] (F file or family), optional g file, [solver].
inline SolveOutcome run_solve(const RunConfig& cfg, const RunOptions& opt) {
  cfg.require_keys("grid", {"cells", "side"});
  cfg.require_keys("system", {"p", "N"});
  cfg.require_keys("data", {"family", "u", "F", "g", "q", "gamma"});
  cfg.require_keys("solver", {"tol", "max_iters", "eps"});
  cfg.require_keys("output", {"dir", "formats", "heatmaps"});
  const int cells = static_cast<int>(cfg.get_int("grid", "cells", 64));
  if (cells < 8 || cells > 4096) cfg.fail_at("grid", "cells", "cells must lie in [8, 4096]");
  const double side = cfg.get_double("grid", "side", 1.0);
  DirichletProblem prob{GridGeometry::square(cells, side), GridField(), GridField(), {}};
  prob.params.p = cfg.get_double("system", "p", 2.0);
  if (!(prob.params.p > 1.0)) cfg.fail_at("system", "p", "p must exceed 1");
  prob.params.tol = cfg.get_double("solver", "tol", prob.params.tol);
  prob.params.max_iters = static_cast<int>(cfg.get_int("solver", "max_iters", prob.params.max_iters));
  prob.params.eps = cfg.get_double("solver", "eps", prob.params.eps);
  const auto Fp = cfg.get_existing_path("data", "F");
  const auto gp = cfg.get_existing_path("data", "g");
  if (!Fp.empty()) {
    prob.F = read_field(Fp);
    prob.geometry = prob.F.geometry();
  } else {
    lab::PairSpec s;
    s.kind = cfg.get_string("data", "family", "manufactured-sin");
    s.p = prob.params.p;
    s.side = side;
    s.q = cfg.get_double("data", "q", 4.0);
    s.gamma = cfg.get_double("data", "gamma", 0.5);
    const auto& kinds = lab::pair_kinds();
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
      cfg.fail_at("data", "family", "unknown data family '" + s.kind + "'");
    const lab::Pair pr = lab::build_pair(s, cells);
    prob.F = pr.F;
    if (gp.empty()) prob.g = pr.u;
  }
  if (!gp.empty()) prob.g = read_field(gp);
  if (prob.g.cell_count() == 0) prob.g = GridField::zeros(prob.geometry, Shape::Scalar, 1);
  std::filesystem::path out =
      opt.out ? *opt.out : std::filesystem::path(cfg.get_string("output", "dir", "wulff-lab-out"));
  if (out.is_relative() && !opt.out && !cfg.origin().empty()) out = cfg.origin().parent_path() / out;
  std::filesystem::create_directories(out);
  SolveOutcome res{solve_detailed(prob), out / "u.wlf"};
  write_field(res.field_path, res.report.u);
  ojson j = ojson::object();
  j["p"] = prob.params.p;
  j["cells"] = prob.geometry.cells();
  j["iterations"] = res.report.iterations;
  j["residual"] = detail::num(res.report.residual);
  j["scale"] = detail::num(res.report.scale);
  if (!res.report.energy.empty()) j["energy"] = detail::num(res.report.energy.back());
  detail::atomic_write(out / "solve.json", j.dump(2) + "\n");
  auto formats = cfg.get_list("output", "formats");
  if (std::find(formats.begin(), formats.end(), "svg") != formats.end())
    render_heatmap(magnitude_field(res.report.u, 1.0), out / "u.svg", "|u|");
  return res;
}

// ------------------------------------------------------------------- norm

/// "lebesgue:q", "lorentz:q,rho[,beta]", "orlicz:<young spec>", "bmo", "campanato:<weight>[,q]".
inline double evaluate_norm(const GridField& f, const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto nums = [&](const std::string& s) {
    std::vector<double> v;
    for (const auto& t : detail::split(s, ',')) v.push_back(detail::parse_double(t, "norm parameter"));
    return v;
  };
  if (kind == "lebesgue") {
    auto v = nums(rest);
    if (v.size() != 1) throw Error(Errc::InvalidArgument, "lebesgue:q takes one exponent");
    return lebesgue_norm(f, v[0]);
  }
  if (kind == "lorentz") {
    auto v = nums(rest);
    if (v.size() < 2 || v.size() > 3) throw Error(Errc::InvalidArgument, "lorentz:q,rho[,beta]");
    return lorentz_zygmund_norm(f, {v[0], v[1], v.size() == 3 ? v[2] : 0.0});
  }
  if (kind == "orlicz") return luxemburg_norm(f, YoungFunction::parse(rest));
  if (kind == "bmo") return bmo_seminorm(f).value;
  if (kind == "campanato") {
    // Weight spec, optionally followed by ",q" for power weights.
    std::string w = rest;
    double q = 1.0;
    const auto comma = rest.rfind(',');
    if (comma != std::string::npos && rest.rfind("table:", 0) != 0) {
      w = rest.substr(0, comma);
      q = detail::parse_double(rest.substr(comma + 1), "Campanato exponent");
    }
    return campanato_seminorm(f, WeightFunction::parse(w), q).value;
  }
  throw Error(Errc::InvalidArgument, "unknown space '" + kind + "' (lebesgue, lorentz, orlicz, bmo, campanato)");
}

}  // namespace wlab
