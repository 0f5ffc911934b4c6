#pragma once

// One-dimensional quadrature on top of Boost.Math: adaptive Gauss-Kronrod for
// smooth panels, tanh-sinh for endpoint singularities, exp-sinh for [a, ∞).

#include <algorithm>
#include <cmath>
#include <exception>
#include <deque>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wulff_lab/error.hpp"

namespace wlab::quad {

inline constexpr double kRelTol = 1e-13;

namespace detail {

// Boost grows its abscissa tables lazily inside integrate(), so a nested call
// on the same rule object would invalidate the outer iteration. Each nesting
// depth gets its own rule.
template <class Rule, int Levels>
class RulePool {
 public:
  struct Lease {
    RulePool* pool;
    Rule& rule;
    ~Lease() { --pool->depth_; }
  };
  Lease acquire() {
    while (rules_.size() <= depth_) rules_.emplace_back(Levels);
    return {this, rules_[depth_++]};
  }

 private:
  std::deque<Rule> rules_;
  std::size_t depth_ = 0;
};

}  // namespace detail

template <class F>
double gauss_kronrod(F&& f, double a, double b, double* err = nullptr) {
  if (a == b) return 0.0;
  double e = 0.0;
  double v;
  // The rule runs on [0, 1]: on very short intervals Boost's termination test
  // otherwise never fires and the recursion runs to full depth.
  const double w = b - a;
  auto g = [&](double t) { return f(a + w * t); };
  try {
    v = w * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, kRelTol, &e);
    e *= std::abs(w);
  } catch (const std::exception& ex) {
    throw Error(Errc::QuadratureFailure, std::string("Gauss-Kronrod: ") + ex.what());
  }
  if (!std::isfinite(v)) throw Error(Errc::QuadratureFailure, "Gauss-Kronrod returned a non-finite value");
  if (err) *err = e;
  return v;
}

/// Non-adaptive 20-point Gauss-Legendre, for smooth integrands on short panels.
template <class F>
double gauss_fixed(F&& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 20>::integrate([&](double t) { return f(t); }, a, b);
}

template <class F>
double tanh_sinh(F&& f, double a, double b) {
  if (a == b) return 0.0;
  // Boost asserts when the interval is short relative to its endpoint magnitude.
  if (std::abs(b - a) < 1e-3 * std::max(std::abs(a), std::abs(b))) return gauss_kronrod(f, a, b);
  thread_local detail::RulePool<boost::math::quadrature::tanh_sinh<double>, 15> pool;
  auto lease = pool.acquire();
  try {
    double v = lease.rule.integrate([&](double t) { return f(t); }, a, b, kRelTol);
    if (!std::isfinite(v)) throw Error(Errc::QuadratureFailure, "tanh-sinh returned a non-finite value");
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(Errc::QuadratureFailure, std::string("tanh-sinh: ") + ex.what());
  }
}

template <class F>
double exp_sinh(F&& f, double a) {
  thread_local detail::RulePool<boost::math::quadrature::exp_sinh<double>, 9> pool;
  auto lease = pool.acquire();
  try {
    double v = lease.rule.integrate([&](double t) { return f(t); }, a, std::numeric_limits<double>::infinity(), kRelTol);
    if (!std::isfinite(v)) throw Error(Errc::QuadratureFailure, "exp-sinh returned a non-finite value");
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(Errc::QuadratureFailure, std::string("exp-sinh: ") + ex.what());
  }
}

}  // namespace wlab::quad
