#pragma once

// Weight functions ω for Campanato and Morrey scales, and the transforms ϖ, μ
// derived from them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wulff_lab/error.hpp"
#include "wulff_lab/quad1d.hpp"

namespace wlab {

class WeightFunction {
 public:
  enum class Family { Power, Const, Table };

  /// ω(r) = r^β.
  static WeightFunction power(double beta) {
    WeightFunction w(Family::Power);
    w.beta_ = beta;
    return w;
  }

  /// ω ≡ c > 0.
  static WeightFunction constant(double c = 1.0) {
    if (!(c > 0.0)) throw Error(Errc::InadmissibleParams, "constant weight must be positive");
    WeightFunction w(Family::Const);
    w.c_ = c;
    return w;
  }

  /// Log-log interpolation of (r_i, ω_i), extended by the end slopes.
  static WeightFunction table(std::vector<double> r, std::vector<double> w) {
    if (r.size() != w.size() || r.size() < 2) throw Error(Errc::InadmissibleParams, "weight table needs >= 2 nodes");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] > 0.0) || !(w[i] > 0.0)) throw Error(Errc::InadmissibleParams, "weight table must be positive");
      if (i > 0 && !(r[i] > r[i - 1])) throw Error(Errc::InadmissibleParams, "weight radii must increase");
    }
    WeightFunction f(Family::Table);
    for (std::size_t i = 0; i < r.size(); ++i) {
      f.lr_.push_back(std::log(r[i]));
      f.lw_.push_back(std::log(w[i]));
    }
    return f;
  }

  /// "power:beta", "const[:c]", "table:<path>" (two columns r ω).
  static WeightFunction parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string fam = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto num = [&]() {
      try {
        std::size_t pos = 0;
        double v = std::stod(rest, &pos);
        if (pos != rest.size()) throw std::invalid_argument(rest);
        return v;
      } catch (const std::exception&) {
        throw Error(Errc::InvalidArgument, "bad weight parameter in '" + spec + "'");
      }
    };
    if (fam == "power") return power(num());
    if (fam == "const") return constant(rest.empty() ? 1.0 : num());
    if (fam == "table") {
      std::ifstream is(rest);
      if (!is) throw Error(Errc::IoError, "cannot open weight table " + rest);
      std::vector<double> r, w;
      std::string line;
      while (std::getline(is, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        double a, b;
        if (ls >> a >> b) {
          r.push_back(a);
          w.push_back(b);
        }
      }
      return table(std::move(r), std::move(w));
    }
    throw Error(Errc::InvalidArgument, "unknown weight family '" + fam + "'");
  }

  double operator()(double r) const {
    switch (family_) {
      case Family::Power: return std::pow(r, beta_);
      case Family::Const: return c_;
      case Family::Table: {
        const double x = std::log(r);
        std::size_t i = static_cast<std::size_t>(std::upper_bound(lr_.begin(), lr_.end(), x) - lr_.begin());
        i = std::clamp<std::size_t>(i, 1, lr_.size() - 1);
        const double t = (x - lr_[i - 1]) / (lr_[i] - lr_[i - 1]);
        return std::exp(lw_[i - 1] + t * (lw_[i] - lw_[i - 1]));
      }
    }
    return 0.0;
  }

  Family family() const { return family_; }

  /// Exponent k with ω(r) ~ c r^k as r → 0.
  double zero_slope() const {
    switch (family_) {
      case Family::Power: return beta_;
      case Family::Const: return 0.0;
      case Family::Table: return (lw_[1] - lw_[0]) / (lr_[1] - lr_[0]);
    }
    return 0.0;
  }

  bool nondecreasing() const {
    switch (family_) {
      case Family::Power: return beta_ >= 0.0;
      case Family::Const: return true;
      case Family::Table:
        for (std::size_t i = 1; i < lw_.size(); ++i)
          if (lw_[i] < lw_[i - 1]) return false;
        return true;
    }
    return false;
  }

  /// ∫₀ ω(r)/r dr < ∞, decided from the behaviour at 0.
  bool dini() const { return zero_slope() > 0.0; }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
      case Family::Power: os << "power:" << beta_; break;
      case Family::Const: os << "const:" << c_; break;
      case Family::Table: os << "table:" << lr_.size() << "nodes"; break;
    }
    return os.str();
  }

  double beta() const { return beta_; }

 private:
  explicit WeightFunction(Family f) : family_(f) {}

  Family family_;
  double beta_ = 0.0;
  double c_ = 1.0;
  std::vector<double> lr_, lw_;
};

/// ϖ(r) = ∫₀^r ω(ρ)/ρ dρ, μ(r) = r(∫_r^1 ω(ϱ)ϱ^{−n/p'−1} dϱ)^{1/(p−1)}.
class WeightTransforms {
 public:
  WeightTransforms(WeightFunction w, int n, double p) : w_(std::move(w)), n_(n), p_(p) {
    if (!(p > 1.0)) throw Error(Errc::InadmissibleParams, "weight transforms need p > 1");
    if (n < 1) throw Error(Errc::InadmissibleParams, "dimension must be positive");
  }

  bool dini() const { return w_.dini(); }

  double varpi(double r) const {
    if (r <= 0.0) return 0.0;
    if (!w_.dini()) return kInfValue;
    if (w_.family() == WeightFunction::Family::Power) return std::pow(r, w_.beta()) / w_.beta();
    // Power tail below r0 = min(r, 1e-6), then quadrature in log ρ.
    const double r0 = std::min(r, 1e-6);
    const double k = w_.zero_slope();
    double v = w_(r0) / k;
    if (r > r0) v += quad::gauss_kronrod([&](double t) { return w_(std::exp(t)); }, std::log(r0), std::log(r));
    return v;
  }

  double mu(double r) const {
    if (!(r > 0.0 && r <= 1.0)) throw Error(Errc::InvalidArgument, "mu is defined for r in (0, 1]");
    const double np = n_ * (p_ - 1.0) / p_;  // n/p'
    double I;
    if (w_.family() == WeightFunction::Family::Power || w_.family() == WeightFunction::Family::Const) {
      const double b = w_.family() == WeightFunction::Family::Power ? w_.beta() : 0.0;
      const double c = w_(1.0);
      const double g = b - np;
      I = std::abs(g) < 1e-14 ? -std::log(r) : (1.0 - std::pow(r, g)) / g;
      I *= c;
    } else {
      I = quad::gauss_kronrod([&](double t) { return w_(std::exp(t)) * std::exp(-np * t); }, std::log(r), 0.0);
    }
    return r * std::pow(I, 1.0 / (p_ - 1.0));
  }

  /// Exponent of μ(r) ~ r^e as r → 0 (meaningful when ω(r)r^{−n/p'} is not integrable at 0).
  double mu_exponent() const {
    const double np = n_ * (p_ - 1.0) / p_;
    const double g = w_.zero_slope() - np;
    return g < 0.0 ? 1.0 + g / (p_ - 1.0) : 1.0;
  }

  const WeightFunction& omega() const { return w_; }

 private:
  static constexpr double kInfValue = std::numeric_limits<double>::infinity();
  WeightFunction w_;
  int n_;
  double p_;
};

}  // namespace wlab
