#pragma once

// Young functions, Luxemburg norms, the E/F transforms of a pair (A, B) and the
// balance condition F(E(t)/γ) <= γ A(t)/t.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/field.hpp"
#include "wulff_lab/quad1d.hpp"
#include "wulff_lab/rearrangement.hpp"

namespace wlab {

class YoungFunction {
 public:
  enum class Family { Power, Zygmund, Exp, DoubleExp, Linf, Table };

  /// t^q, q >= 1.
  static YoungFunction power(double q) {
    if (!(q >= 1.0)) throw Error(Errc::InadmissibleParams, "power Young function needs q >= 1");
    YoungFunction A(Family::Power, {q});
    A.asym_ = {true, q, 0.0};
    A.zero_exp_ = q;
    A.validate();
    return A;
  }

  /// t^q (1 + log(1 + t))^β.
  static YoungFunction zygmund(double q, double beta) {
    if (!(q >= 1.0)) throw Error(Errc::InadmissibleParams, "Zygmund Young function needs q >= 1");
    YoungFunction A(Family::Zygmund, {q, beta});
    A.asym_ = {true, q, beta};
    A.zero_exp_ = q;
    A.validate();
    return A;
  }

  /// e^{t^β} − 1, β >= 1.
  static YoungFunction exponential(double beta) {
    if (!(beta >= 1.0)) throw Error(Errc::InadmissibleParams, "exp Young function needs beta >= 1");
    YoungFunction A(Family::Exp, {beta});
    A.zero_exp_ = beta;
    A.validate();
    return A;
  }

  /// e^{e^{t^β} − 1} − 1, β >= 1.
  static YoungFunction double_exponential(double beta) {
    if (!(beta >= 1.0)) throw Error(Errc::InadmissibleParams, "dexp Young function needs beta >= 1");
    YoungFunction A(Family::DoubleExp, {beta});
    A.zero_exp_ = beta;
    A.validate();
    return A;
  }

  /// 0 on [0, 1], +∞ beyond; generates L^∞.
  static YoungFunction linf() {
    YoungFunction A(Family::Linf, {});
    A.zero_exp_ = kInf;
    return A;
  }

  /// Piecewise-linear interpolation of (t_i, A_i) with A(0) = 0 prepended when
  /// absent and linear extrapolation past the last node.
  static YoungFunction table(std::vector<double> t, std::vector<double> a) {
    if (t.size() != a.size() || t.size() < 2) throw Error(Errc::InadmissibleParams, "table needs >= 2 nodes");
    if (t.front() != 0.0) {
      t.insert(t.begin(), 0.0);
      a.insert(a.begin(), 0.0);
    }
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1])) throw Error(Errc::InadmissibleParams, "table abscissae must increase");
    if (a.front() != 0.0) throw Error(Errc::InadmissibleParams, "Young function must vanish at 0");
    YoungFunction A(Family::Table, {});
    A.tab_t_ = std::move(t);
    A.tab_a_ = std::move(a);
    // Slopes must be nondecreasing for convexity.
    double prev = -kInf;
    for (std::size_t i = 1; i < A.tab_t_.size(); ++i) {
      double s = (A.tab_a_[i] - A.tab_a_[i - 1]) / (A.tab_t_[i] - A.tab_t_[i - 1]);
      if (s < prev * (1.0 - 1e-12) - 1e-300 || s < 0.0)
        throw Error(Errc::InadmissibleParams, "tabulated Young function is not convex");
      prev = s;
    }
    if (!(A.tab_a_.back() > 0.0)) throw Error(Errc::InadmissibleParams, "tabulated Young function is trivial");
    A.asym_ = {true, 1.0, 0.0};
    double s1 = A.tab_a_[1] / A.tab_t_[1];
    A.zero_exp_ = s1 > 0.0 ? 1.0 : kInf;
    return A;
  }

  /// "power:q", "zygmund:q,beta", "exp:beta", "dexp:beta", "linf", "table:<path>".
  static YoungFunction parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string fam = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto nums = [&](std::size_t count) {
      std::vector<double> v;
      std::stringstream ss(rest);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          std::size_t pos = 0;
          v.push_back(std::stod(tok, &pos));
          if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw Error(Errc::InvalidArgument, "bad number '" + tok + "' in Young function '" + spec + "'");
        }
      }
      if (v.size() != count)
        throw Error(Errc::InvalidArgument, "Young function '" + spec + "' needs " + std::to_string(count) + " parameter(s)");
      return v;
    };
    if (fam == "power") return power(nums(1)[0]);
    if (fam == "zygmund") {
      auto v = nums(2);
      return zygmund(v[0], v[1]);
    }
    if (fam == "exp") return exponential(nums(1)[0]);
    if (fam == "dexp") return double_exponential(nums(1)[0]);
    if (fam == "linf") return linf();
    if (fam == "table") return load_table(rest);
    throw Error(Errc::InvalidArgument, "unknown Young function family '" + fam + "'");
  }

  /// Two whitespace-separated columns t A(t) per line; '#' starts a comment.
  static YoungFunction load_table(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(Errc::IoError, "cannot open Young table " + path);
    std::vector<double> t, a;
    std::string line;
    while (std::getline(is, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      double x, y;
      if (ls >> x >> y) {
        t.push_back(x);
        a.push_back(y);
      }
    }
    return table(std::move(t), std::move(a));
  }

  double operator()(double t) const {
    if (t <= 0.0) return 0.0;
    switch (family_) {
      case Family::Power: return std::pow(t, prm_[0]);
      case Family::Zygmund: return std::pow(t, prm_[0]) * std::pow(1.0 + std::log1p(t), prm_[1]);
      case Family::Exp: {
        double e = std::pow(t, prm_[0]);
        return e > 709.0 ? kInf : std::expm1(e);
      }
      case Family::DoubleExp: {
        double e = std::pow(t, prm_[0]);
        if (e > 709.0) return kInf;
        double ee = std::expm1(e);
        return ee > 709.0 ? kInf : std::expm1(ee);
      }
      case Family::Linf: return t <= 1.0 ? 0.0 : kInf;
      case Family::Table: {
        auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
        std::size_t i = it == tab_t_.end() ? tab_t_.size() - 1 : static_cast<std::size_t>(it - tab_t_.begin());
        const double t0 = tab_t_[i - 1], t1 = tab_t_[i];
        return tab_a_[i - 1] + (tab_a_[i] - tab_a_[i - 1]) * (t - t0) / (t1 - t0);
      }
    }
    return 0.0;
  }

  /// Generalized inverse sup{t : A(t) <= y}.
  double inverse(double y) const {
    if (y <= 0.0 && family_ != Family::Linf) return 0.0;
    double lo = 0.0, hi = 1.0;
    int k = 0;
    while ((*this)(hi) <= y && k++ < 2000) {
      lo = hi;
      hi *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      double mid = 0.5 * (lo + hi);
      ((*this)(mid) <= y ? lo : hi) = mid;
    }
    return lo;
  }

  Family family() const { return family_; }
  const std::vector<double>& params() const { return prm_; }

  /// A(t) ~ t^power (log t)^log as t → ∞, when known in closed form.
  struct Asymptotics {
    bool known = false;
    double power = 0.0;
    double log = 0.0;
  };
  const Asymptotics& asymptotics() const { return asym_; }

  /// A(t) ~ c t^e as t → 0 (+∞ if A vanishes near 0).
  double zero_exponent() const { return zero_exp_; }

  bool is_pure_power() const { return family_ == Family::Power; }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
      case Family::Power: os << "power:" << prm_[0]; break;
      case Family::Zygmund: os << "zygmund:" << prm_[0] << "," << prm_[1]; break;
      case Family::Exp: os << "exp:" << prm_[0]; break;
      case Family::DoubleExp: os << "dexp:" << prm_[0]; break;
      case Family::Linf: os << "linf"; break;
      case Family::Table: os << "table:" << tab_t_.size() << "nodes"; break;
    }
    return os.str();
  }

 private:
  YoungFunction(Family f, std::vector<double> prm) : family_(f), prm_(std::move(prm)) {}

  /// Discrete convexity on a log grid; rejects parameter choices outside the Young class.
  void validate() const {
    const int m = 481;
    std::vector<double> t(m), a(m);
    for (int i = 0; i < m; ++i) {
      t[i] = std::pow(10.0, -6.0 + 12.0 * i / (m - 1));
      a[i] = (*this)(t[i]);
    }
    double prev = 0.0;
    for (int i = 0; i < m; ++i) {
      if (!std::isfinite(a[i])) break;
      double s = i == 0 ? a[0] / t[0] : (a[i] - a[i - 1]) / (t[i] - t[i - 1]);
      if (s < 0.0 || s < prev * (1.0 - 1e-9)) throw Error(Errc::InadmissibleParams, "'" + name() + "' is not convex");
      prev = s;
    }
  }

  Family family_;
  std::vector<double> prm_;
  std::vector<double> tab_t_, tab_a_;
  Asymptotics asym_;
  double zero_exp_ = 1.0;
};

/// Result of a Luxemburg norm evaluation.
struct LuxemburgResult {
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  ///< final bracket
};

/// inf{λ > 0 : ∫_Ω A(|f|/λ) <= 1} by bisection on λ to relative width rel_tol.
/// Returns +∞ when no λ in the search range is admissible.
inline LuxemburgResult luxemburg(const Rearrangement& r, const YoungFunction& A, double rel_tol = 1e-10) {
  auto modular = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.steps(); ++i) {
      if (r.values[i] == 0.0) continue;
      const double a = A(r.values[i] / lambda);
      if (std::isinf(a)) return kInf;
      s += a * (r.edges[i + 1] - r.edges[i]);
    }
    return s;
  };
  double fmax = r.values.empty() ? 0.0 : r.values.front();
  if (fmax == 0.0) return {0.0, 0.0, 0.0};
  double hi = fmax;
  int k = 0;
  while (!(modular(hi) <= 1.0)) {
    if (++k > 400) return {kInf, hi, kInf};
    hi *= 2.0;
  }
  double lo = hi;
  k = 0;
  do {
    lo *= 0.5;
    if (++k > 400)
      throw Error(Errc::SearchRangeExhausted, "no inadmissible lambda found down to " + std::to_string(lo) +
                                                  " (bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "])");
  } while (modular(lo) <= 1.0);
  while (hi - lo > rel_tol * hi) {
    double mid = 0.5 * (lo + hi);
    (modular(mid) <= 1.0 ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi), lo, hi};
}

inline double luxemburg_norm(const GridField& f, const YoungFunction& A, double rel_tol = 1e-10) {
  return luxemburg(rearrange(f), A, rel_tol).value;
}

inline double luxemburg_norm(const Rearrangement& r, const YoungFunction& A, double rel_tol = 1e-10) {
  return luxemburg(r, A, rel_tol).value;
}

namespace detail {

/// C(t) = ∫₀^t g(τ) dτ for an integrand with a power-law endpoint at 0. Values
/// at the dyadic nodes 2^k are cached; [0, 2^kmin] is integrated with tanh-sinh
/// and each dyadic panel with Gauss-Kronrod.
class Cumulative {
 public:
  /// g(t) ~ c t^m near 0 with m > −1; below 2^kMin the power law is integrated exactly.
  Cumulative(std::function<double(double)> g, double m) : g_(std::move(g)), m_(m) {}

  double operator()(double t) const {
    if (t <= 0.0) return 0.0;
    const int k = static_cast<int>(std::floor(std::log2(t)));
    if (k < kMin) return head(t);
    const double node = std::ldexp(1.0, k);
    return at_node(k) + quad::gauss_kronrod(g_, node, t);
  }

 private:
  static constexpr int kMin = -40;

  double at_node(int k) const {
    std::lock_guard lock(mu_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    int best = kMin;
    double val;
    auto lb = cache_.upper_bound(k);
    if (lb != cache_.begin()) {
      --lb;
      best = lb->first;
      val = lb->second;
    } else {
      val = head(std::ldexp(1.0, kMin));
      cache_[kMin] = val;
    }
    for (int j = best; j < k; ++j) {
      val += quad::gauss_kronrod(g_, std::ldexp(1.0, j), std::ldexp(1.0, j + 1));
      cache_[j + 1] = val;
    }
    return val;
  }

  double head(double t) const { return g_(t) * t / (m_ + 1.0); }

  std::function<double(double)> g_;
  double m_;
  mutable std::map<int, double> cache_;
  mutable std::mutex mu_;
};

}  // namespace detail

/// E_{α,s} and F_{α,s} for Young functions A, B in dimension n. The classical
/// pair E_p, F_p is the case α = p/(p+1), s = p+1.
class YoungTransforms {
 public:
  YoungTransforms(YoungFunction A, YoungFunction B, double alpha, double s, int n, bool closed_forms = true)
      : A_(std::move(A)), B_(std::move(B)), alpha_(alpha), s_(s), n_(n), closed_(closed_forms) {
    if (!(s > 1.0) || !(alpha > 0.0)) throw Error(Errc::InadmissibleParams, "need alpha > 0 and s > 1");
    const double sc = s / (s - 1.0);
    if (!(alpha < n / s && alpha < n / sc))
      throw Error(Errc::InadmissibleParams, "need 0 < alpha < min(n/s, n/s')");
    as_ = alpha * sc;  // α s'
    kE_ = n / (n - as_);
    ouE_ = s - 1.0 - alpha * s / n;
    kF_ = n / (n - alpha * s);
    ouF_ = (n - alpha * s) / n;
    // Integrand exponent of E near 0 when A ~ t^z there.
    const double zA = A_.zero_exponent();
    if (std::isinf(zA)) throw Error(Errc::FinitenessFailure, "E is infinite: A vanishes near 0");
    mE0_ = (1.0 / (s - 1.0) - 1.0 + as_ / n - zA * as_ / n) * kE_;
    if (!(mE0_ > -1.0))
      throw Error(Errc::FinitenessFailure, "E diverges at 0 (integrand exponent " + std::to_string(mE0_) + ")");
    const double zB = B_.zero_exponent();
    mF0_ = (std::isinf(zB) ? 1e300 : zB) - 1.0 - kF_;
    if (!(mF0_ > -1.0))
      throw Error(Errc::FinitenessFailure, "F diverges at 0 (integrand exponent " + std::to_string(mF0_) + ")");
    const double a_exp = (1.0 / (s - 1.0) - 1.0 + as_ / n) * kE_;
    const double b_exp = as_ / n * kE_;
    YoungFunction Acopy = A_;
    gE_ = std::make_shared<detail::Cumulative>([Acopy, a_exp, b_exp](double t) {
      const double a = Acopy(t);
      if (a == 0.0) return kInf;
      if (std::isinf(a)) return 0.0;
      return std::pow(t, a_exp) / std::pow(a, b_exp);
    }, mE0_);
    YoungFunction Bcopy = B_;
    const double kF = kF_;
    gF_ = std::make_shared<detail::Cumulative>([Bcopy, kF](double t) {
      const double b = Bcopy(t);
      return std::isinf(b) ? kInf : b / std::pow(t, 1.0 + kF);
    }, std::min(mF0_, 1e6));
  }

  /// The pair (6)/(7) in its classical parametrization, 1 < p < n.
  static YoungTransforms classical(YoungFunction A, YoungFunction B, double p, int n, bool closed_forms = true) {
    if (!(p > 1.0 && p < n)) throw Error(Errc::PRangeError, "transforms need 1 < p < n");
    return YoungTransforms(std::move(A), std::move(B), p / (p + 1.0), p + 1.0, n, closed_forms);
  }

  double E(double t) const {
    if (t <= 0.0) return 0.0;
    if (closed_ && A_.is_pure_power()) return std::pow(std::pow(t, mE0_ + 1.0) / (mE0_ + 1.0), ouE_);
    return std::pow((*gE_)(t), ouE_);
  }

  double F(double t) const {
    if (t <= 0.0) return 0.0;
    if (closed_ && B_.is_pure_power()) return std::pow(std::pow(t, mF0_ + 1.0) / (mF0_ + 1.0), ouF_);
    return std::pow((*gF_)(t), ouF_);
  }

  /// Growth exponents of E and F ∘ E at infinity from the asymptotic tags.
  struct Growth {
    bool known = false;
    double power = 0.0;
    double log = 0.0;
  };

  Growth E_growth() const {
    const auto& a = A_.asymptotics();
    if (!a.known) return {};
    const double m = (1.0 / (s_ - 1.0) - 1.0 + as_ / n_ - a.power * as_ / n_) * kE_;
    const double l = -a.log * as_ / n_ * kE_;
    return scale(integrated(m, l), ouE_);
  }

  Growth F_growth() const {
    const auto& b = B_.asymptotics();
    if (!b.known) return {};
    return scale(integrated(b.power - 1.0 - kF_, b.log), ouF_);
  }

  const YoungFunction& A() const { return A_; }
  const YoungFunction& B() const { return B_; }
  double alpha() const { return alpha_; }
  double s() const { return s_; }
  int n() const { return n_; }

 private:
  /// ∫^t τ^m (log τ)^l dτ ~ t^{m+1}(log t)^l; bounded when m < −1.
  static Growth integrated(double m, double l) {
    const double eps = 1e-12;
    if (m > -1.0 + eps) return {true, m + 1.0, l};
    if (m < -1.0 - eps) return {true, 0.0, 0.0};
    if (l > -1.0 + eps) return {true, 0.0, l + 1.0};
    if (l < -1.0 - eps) return {true, 0.0, 0.0};
    return {};  // log log growth
  }
  static Growth scale(Growth g, double e) {
    if (!g.known) return g;
    return {true, g.power * e, g.log * e};
  }

  YoungFunction A_, B_;
  double alpha_, s_;
  int n_;
  bool closed_;
  double as_, kE_, ouE_, kF_, ouF_, mE0_, mF0_;
  std::shared_ptr<detail::Cumulative> gE_, gF_;
};

struct BalanceSample {
  double t = 0.0;
  double gamma = 0.0;  ///< smallest admissible γ at t (+∞ if none)
};

struct BalanceReport {
  bool satisfiable = false;
  double gamma = kInf;
  double t0 = 1.0, t_max = 1e4;
  std::vector<BalanceSample> samples;
  bool asymptotics_known = false;
  double ratio_power = 0.0;  ///< F(E(t))/(A(t)/t) ~ t^power (log t)^log
  double ratio_log = 0.0;
  std::string reason;
};

/// Smallest γ with F(E(t)/γ) <= γ A(t)/t at each t on a log grid of [t0, t_max],
/// plus the asymptotic verdict from the tags when both are known.
inline BalanceReport balance_report(const YoungTransforms& T, double t0 = 1.0, double t_max = 1e4, int points = 41) {
  BalanceReport rep;
  rep.t0 = t0;
  rep.t_max = t_max;
  const double g_lo = 1e-12, g_hi = 1e12;
  bool all_finite = true;
  double gmax = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = t0 * std::pow(t_max / t0, static_cast<double>(i) / (points - 1));
    const double Et = T.E(t);
    const double rhs1 = T.A()(t) / t;
    auto ok = [&](double g) { return T.F(Et / g) <= g * rhs1; };
    double gamma;
    if (ok(g_lo)) {
      gamma = g_lo;
    } else if (!ok(g_hi)) {
      gamma = kInf;
    } else {
      double lo = std::log(g_lo), hi = std::log(g_hi);
      while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (ok(std::exp(mid)) ? hi : lo) = mid;
      }
      gamma = std::exp(hi);
    }
    rep.samples.push_back({t, gamma});
    if (std::isinf(gamma)) all_finite = false;
    gmax = std::max(gmax, gamma);
  }

  auto eg = T.E_growth();
  auto fg = T.F_growth();
  const auto& a = T.A().asymptotics();
  if (eg.known && fg.known && a.known) {
    rep.asymptotics_known = true;
    // F(E) ~ E^{fp} (log E)^{fl}, log E ~ ep log t when ep > 0.
    double pw = eg.power * fg.power;
    double lg = eg.log * fg.power + (eg.power > 0.0 ? fg.log : 0.0);
    rep.ratio_power = pw - (a.power - 1.0);
    rep.ratio_log = lg - a.log;
  }
  const double tol = 1e-9;
  const bool asym_bad = rep.asymptotics_known &&
                        (rep.ratio_power > tol || (std::abs(rep.ratio_power) <= tol && rep.ratio_log > tol));
  if (!all_finite) {
    rep.reason = "no admissible gamma at some sampled t";
  } else if (asym_bad) {
    rep.reason = "F(E(t))/(A(t)/t) grows like t^" + std::to_string(rep.ratio_power) + " (log t)^" +
                 std::to_string(rep.ratio_log) + "; no fixed gamma works for all large t";
  } else {
    rep.satisfiable = true;
    rep.gamma = gmax;
    rep.reason = rep.asymptotics_known ? "sampled gamma finite; asymptotic ratio bounded" : "sampled gamma finite";
  }
  return rep;
}

}  // namespace wlab
