#pragma once

#include <cmath>
#include <string>

#include "lemorse/error.hpp"

namespace lemorse::numerics {

/// Root of f on [a, b] with f(a), f(b) of opposite sign (or one of them zero).
/// Secant (regula falsi, Illinois weighting) steps are taken while they shrink
/// the bracket fast enough; otherwise the step falls back to bisection.
template <class F>
double bracketed_root(F&& f, double a, double b, double xtol, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw Error(ErrorKind::bracket_failure,
                "root not bracketed on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double width = b - a;
    if (std::abs(width) <= xtol) break;
    double x = (a * fb - b * fa) / (fb - fa);
    // keep secant candidates well inside the bracket
    const double lo = a + 0.05 * width, hi = b - 0.05 * width;
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi)) || it % 4 == 3) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (fb > 0)) {
      b = x;
      fb = fx;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = x;
      fa = fx;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

/// Root of a decreasing function g - target on [lo, hi] by plain bisection.
template <class F>
double bisect_decreasing(F&& g, double target, double lo, double hi, double xtol) {
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lemorse::numerics
