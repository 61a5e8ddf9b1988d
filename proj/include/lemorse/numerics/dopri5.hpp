#pragma once

// Dormand-Prince 5(4) with the Hairer-Wanner quartic continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "lemorse/error.hpp"

namespace lemorse::numerics {

template <std::size_t K>
using State = std::array<double, K>;

/// One accepted step with its dense-output coefficients.
template <std::size_t K>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<K>, 5> coef{};

  double t1() const { return t0 + h; }

  State<K> eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<K> y;
    for (std::size_t i = 0; i < K; ++i)
      y[i] = coef[0][i] +
             th * (coef[1][i] + th1 * (coef[2][i] + th * (coef[3][i] + th1 * coef[4][i])));
    return y;
  }

  /// Time derivative of the interpolant.
  State<K> derivative(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<K> d;
    for (std::size_t i = 0; i < K; ++i) {
      const double s = coef[3][i] + th1 * coef[4][i];
      const double q = coef[2][i] + th * s;
      const double dq = s - th * coef[4][i];
      const double pp = coef[1][i] + th1 * q;
      const double dp = -q + th1 * dq;
      d[i] = (pp + th * dp) / h;
    }
    return d;
  }
};

/// Piecewise dense output over the accepted steps of one integration.
template <std::size_t K>
class DenseTrajectory {
 public:
  const std::vector<DenseStep<K>>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  double t_begin() const { return steps_.front().t0; }
  double t_end() const { return steps_.back().t1(); }

  const DenseStep<K>& step_at(double t) const {
    if (t <= steps_.front().t1()) return steps_.front();
    if (t >= steps_.back().t0) return steps_.back();
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double x, const DenseStep<K>& s) { return x < s.t0; });
    return *(it - 1);
  }

  State<K> eval(double t) const { return step_at(t).eval(t); }
  State<K> derivative(double t) const { return step_at(t).derivative(t); }

  void push(const DenseStep<K>& s) { steps_.push_back(s); }

  /// Drop all steps starting after t.
  void truncate_after(double t) {
    while (steps_.size() > 1 && steps_.back().t0 > t) steps_.pop_back();
  }

 private:
  std::vector<DenseStep<K>> steps_;
};

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-300;
  double h_init = 1e-3;
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
  /// Abort when the infinity norm of the state exceeds this value.
  double ceiling = 1e100;
};

enum class StopReason { reached_end, observer };

template <std::size_t K>
struct Dopri5Result {
  DenseTrajectory<K> trajectory;
  StopReason reason = StopReason::reached_end;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {
template <std::size_t K>
double inf_norm(const State<K>& y) {
  double n = 0.0;
  for (double v : y) n = std::max(n, std::abs(v));
  return n;
}
}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t_end. After each accepted step
/// `observer(step)` is called; returning true stops the integration.
/// The error norm uses one scale for all components,
/// atol + rtol * max(|y_old|_inf, |y_new|_inf).
template <std::size_t K, class Rhs, class Observer>
Dopri5Result<K> dopri5(Rhs&& rhs, double t0, const State<K>& y0, double t_end,
                       const Dopri5Options& opt, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  if (!(t_end > t0)) throw Error(ErrorKind::invalid_argument, "dopri5: t_end <= t0");
  if (!(opt.rtol > 0.0)) throw Error(ErrorKind::invalid_argument, "dopri5: rtol <= 0");

  Dopri5Result<K> out;
  double t = t0;
  State<K> y = y0;
  State<K> k1 = rhs(t, y), k2, k3, k4, k5, k6, k7, yt, ynew;
  double h = std::min({opt.h_init, opt.h_max, t_end - t0});
  bool reject_prev = false;

  auto axpy = [](const State<K>& base, double hh, std::initializer_list<std::pair<double, const State<K>*>> terms) {
    State<K> r = base;
    for (auto [c, k] : terms)
      if (c != 0.0)
        for (std::size_t i = 0; i < K; ++i) r[i] += hh * c * (*k)[i];
    return r;
  };

  while (t < t_end) {
    if (out.accepted + out.rejected >= opt.max_steps)
      throw Error(ErrorKind::step_control, "dopri5: step budget exhausted");
    bool last = false;
    if (t + 1.01 * h >= t_end) {
      h = t_end - t;
      last = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw Error(ErrorKind::step_control, "dopri5: step size underflow at t=" + std::to_string(t));

    yt = axpy(y, h, {{a21, &k1}});
    k2 = rhs(t + c2 * h, yt);
    yt = axpy(y, h, {{a31, &k1}, {a32, &k2}});
    k3 = rhs(t + c3 * h, yt);
    yt = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    k4 = rhs(t + c4 * h, yt);
    yt = axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    k5 = rhs(t + c5 * h, yt);
    yt = axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    k6 = rhs(t + h, yt);
    ynew = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    k7 = rhs(t + h, ynew);

    const double sc = opt.atol + opt.rtol * std::max(detail::inf_norm(y), detail::inf_norm(ynew));
    double err = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(err)) err = 1e10;

    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    if (err <= 1.0) {
      DenseStep<K> step;
      step.t0 = t;
      step.h = h;
      for (std::size_t i = 0; i < K; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = h * k1[i] - dy;
        step.coef[0][i] = y[i];
        step.coef[1][i] = dy;
        step.coef[2][i] = bspl;
        step.coef[3][i] = dy - h * k7[i] - bspl;
        step.coef[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      out.trajectory.push(step);
      ++out.accepted;
      t = last ? t_end : t + h;
      y = ynew;
      k1 = k7;
      if (detail::inf_norm(y) > opt.ceiling)
        throw Error(ErrorKind::blow_up,
                    "solution exceeded ceiling " + std::to_string(opt.ceiling) + " at t=" +
                        std::to_string(t));
      if (observer(out.trajectory.steps().back())) {
        out.reason = StopReason::observer;
        return out;
      }
      fac = std::clamp(fac, 0.2, reject_prev ? 1.0 : 5.0);
      reject_prev = false;
    } else {
      fac = std::clamp(fac, 0.2, 1.0);
      reject_prev = true;
      ++out.rejected;
    }
    h = std::min(h * fac, opt.h_max);
  }
  out.reason = StopReason::reached_end;
  return out;
}

}  // namespace lemorse::numerics
