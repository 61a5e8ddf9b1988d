#pragma once

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lemorse/numerics/dopri5.hpp"

namespace lemorse::numerics {

/// Integral of f(t, y(t)) over [a, b] along a dense trajectory, one
/// 10-point Gauss-Legendre rule per accepted step (split at step ends).
template <std::size_t K, class F>
double integrate_along(const DenseTrajectory<K>& traj, F&& f, double a, double b) {
  using boost::math::quadrature::gauss;
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (const auto& st : traj.steps()) {
    const double lo = std::max(a, st.t0);
    const double hi = std::min(b, st.t1());
    if (hi <= lo) continue;
    sum += gauss<double, 10>::integrate(
        [&](double t) { return f(t, st.eval(t)); }, lo, hi);
  }
  return sum;
}

/// Result of an integral over (0, inf) carried out in t = ln r.
struct LogIntegral {
  double value = 0.0;
  /// Quadrature error estimate plus both tail magnitudes.
  double error = 0.0;
  double tail = 0.0;
};

/// Integral over t in R of h(t), evaluated on [t_lo, t_hi] with adaptive
/// Gauss-Kronrod and closed by power-law tails: h ~ h(t_lo) e^{k_lo (t - t_lo)}
/// below and h ~ h(t_hi) e^{-k_hi (t - t_hi)} above, k_lo, k_hi > 0.
template <class H>
LogIntegral log_domain_integral(H&& h, double t_lo, double t_hi, double k_lo, double k_hi,
                                double tol = 1e-13) {
  using boost::math::quadrature::gauss_kronrod;
  LogIntegral out;
  double err = 0.0;
  out.value = gauss_kronrod<double, 31>::integrate(h, t_lo, t_hi, 20, tol, &err);
  const double lower = h(t_lo) / k_lo;
  const double upper = h(t_hi) / k_hi;
  out.tail = std::abs(lower) + std::abs(upper);
  out.value += lower + upper;
  // the power-law model of each tail is exact only to leading order
  out.error = std::abs(err) + 1e-2 * out.tail;
  return out;
}

}  // namespace lemorse::numerics
