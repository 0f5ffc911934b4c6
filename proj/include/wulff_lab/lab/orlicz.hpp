#pragma once

// Balance condition between the Young functions A and B.

#include <string>
#include <utility>

#include "wulff_lab/error.hpp"
#include "wulff_lab/lab/common.hpp"
#include "wulff_lab/report.hpp"
#include "wulff_lab/young.hpp"

namespace wlab::lab {

enum class Expectation { Any, Satisfiable, Unsatisfiable };

inline Expectation parse_expectation(const std::string& s) {
  if (s == "any" || s.empty()) return Expectation::Any;
  if (s == "satisfiable") return Expectation::Satisfiable;
  if (s == "unsatisfiable") return Expectation::Unsatisfiable;
  throw Error(Errc::InvalidArgument, "expect must be any, satisfiable or unsatisfiable");
}

struct BalanceParams {
  std::string A = "power:1.2";
  std::string B = "power:12";
  int n = 2;
  double p = 0.0;  ///< > 0 selects α = p/(p+1), s = p+1
  double alpha = 0.5;
  double s = 3.0;
  double t0 = 1.0;
  double t_max = 1e4;
  Expectation expect = Expectation::Any;
};

/// Zygmund data for the gradient problem: |F|^{p'} ∈ L^{q/p'}(log L)^β, and the
/// target B(t) ~ t^{nQ/(n−αsQ)} (log t)^{nβ/(n−αsQ)} with Q = q/p', raised by
/// `extra_log` log powers.
inline BalanceParams zygmund_instance(int n, double p, double q, double beta, double extra_log = 0.0) {
  const double pp = p / (p - 1.0);
  if (!(q > pp && q < n / (p - 1.0)))
    throw Error(Errc::InadmissibleParams, "the Zygmund instance needs p' < q < n/(p-1)");
  const double Q = q / pp;
  const double as = p;  // α s = p/(p+1) · (p+1)
  const double d = n - as * Q;
  BalanceParams b;
  b.n = n;
  b.p = p;
  auto spec = [](double e, double l) {
    std::string out = "zygmund:" + wlab::detail::csv_num(e) + "," + wlab::detail::csv_num(l);
    return out;
  };
  b.A = spec(Q, beta);
  b.B = spec(n * Q / d, n * beta / d + extra_log);
  return b;
}

inline VerificationReport verify_balance(const BalanceParams& p) {
  const YoungFunction A = YoungFunction::parse(p.A);
  const YoungFunction B = YoungFunction::parse(p.B);
  const YoungTransforms T = p.p > 0.0 ? YoungTransforms::classical(A, B, p.p, p.n)
                                      : YoungTransforms(A, B, p.alpha, p.s, p.n);
  const auto bal = balance_report(T, p.t0, p.t_max);
  VerificationReport r("balance");
  r.params["A"] = A.name();
  r.params["B"] = B.name();
  r.params["n"] = p.n;
  if (p.p > 0.0) r.params["p"] = p.p;
  r.params["alpha"] = T.alpha();
  r.params["s"] = T.s();
  r.params["t0"] = p.t0;
  r.params["t_max"] = p.t_max;
  r.params["satisfiable"] = bal.satisfiable;
  r.params["gamma"] = wlab::detail::num(bal.gamma);
  if (bal.asymptotics_known) {
    r.params["ratio_power"] = bal.ratio_power;
    r.params["ratio_log"] = bal.ratio_log;
  }
  r.params["expect"] = p.expect == Expectation::Any ? "any"
                       : p.expect == Expectation::Satisfiable ? "satisfiable"
                                                              : "unsatisfiable";
  // Samples: F(E(t)/γ*) against γ* A(t)/t at the fitted γ*.
  const double g = bal.satisfiable ? bal.gamma : 1.0;
  for (const auto& s : bal.samples) {
    const double t = s.t;
    r.add("balance", {}, t, T.F(T.E(t) / g), g * A(t) / t);
  }
  r.c_star = bal.gamma;
  r.note(bal.reason);
  switch (p.expect) {
    case Expectation::Any: r.pass = true; break;
    case Expectation::Satisfiable: r.pass = bal.satisfiable; break;
    case Expectation::Unsatisfiable: r.pass = !bal.satisfiable; break;
  }
  return r;
}

}  // namespace wlab::lab
