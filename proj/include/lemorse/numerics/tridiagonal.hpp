#pragma once

// Symmetric tridiagonal (generalized, diagonal mass) eigenvalues by
// Sturm-sequence bisection, eigenvectors by inverse iteration.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lemorse/error.hpp"

namespace lemorse::numerics {

/// Pencil T - lambda * diag(mass) with T symmetric tridiagonal. An empty mass
/// vector means the identity.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size() - 1
  std::vector<double> mass;

  std::size_t size() const { return diag.size(); }
  double m(std::size_t i) const { return mass.empty() ? 1.0 : mass[i]; }
};

/// Number of eigenvalues strictly below sigma: the count of negative pivots
/// in the LDL^T factorization of T - sigma * M (Sylvester inertia). Pivots are
/// carried in extended precision; with ||T|| ~ 1/h^2 the double recurrence
/// alone loses about eps * ||T|| in the located eigenvalue.
inline std::size_t count_below(const SymTridiagonal& t, double sigma) {
  using real = long double;
  const std::size_t n = t.size();
  std::size_t count = 0;
  real d = 1.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const real a = static_cast<real>(t.diag[i]) - static_cast<real>(sigma) * t.m(i);
    if (i == 0) {
      d = a;
    } else {
      const real o = t.off[i - 1];
      d = a - o * (o / d);
    }
    if (d == 0.0L) {
      d = -std::numeric_limits<real>::epsilon() *
              (std::abs(static_cast<real>(t.diag[i])) + std::abs(static_cast<real>(sigma) * t.m(i))) -
          std::numeric_limits<real>::min();
    }
    if (d < 0.0L) ++count;
  }
  return count;
}

/// Gershgorin interval of the symmetrized pencil M^{-1/2} T M^{-1/2}.
inline std::pair<double, double> gershgorin(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = t.diag[i] / t.m(i);
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]) / std::sqrt(t.m(i - 1) * t.m(i));
    if (i + 1 < n) r += std::abs(t.off[i]) / std::sqrt(t.m(i) * t.m(i + 1));
    lo = std::min(lo, c - r);
    hi = std::max(hi, c + r);
  }
  const double pad = 1e-12 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

/// The index-th eigenvalue (0-based, ascending) to absolute tolerance `tol`
/// (relative 4 eps for eigenvalues of large magnitude).
inline double bisect_eigenvalue(const SymTridiagonal& t, std::size_t index, double tol,
                                std::pair<double, double> bracket) {
  auto [lo, hi] = bracket;
  if (index >= t.size() || count_below(t, lo) > index || count_below(t, hi) <= index)
    throw Error(ErrorKind::bracket_failure,
                "bisection bracket does not contain eigenvalue index " + std::to_string(index));
  for (int it = 0; it < 2000; ++it) {
    const double width = hi - lo;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (width <= std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale)) break;
    const double mid = lo + 0.5 * width;
    if (mid == lo || mid == hi) break;
    if (count_below(t, mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return lo + 0.5 * (hi - lo);
}

/// The lowest `count` eigenvalues, ascending.
inline std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count,
                                              double tol) {
  if (count == 0) throw Error(ErrorKind::invalid_argument, "eigenvalue count must be >= 1");
  if (count > t.size())
    throw Error(ErrorKind::invalid_argument, "more eigenvalues requested than matrix size");
  const auto g = gershgorin(t);
  std::vector<double> out;
  out.reserve(count);
  double lo = g.first;
  for (std::size_t k = 0; k < count; ++k) {
    const double ev = bisect_eigenvalue(t, k, tol, {lo, g.second});
    out.push_back(ev);
    // eigenvalues are simple; the next one lies above the lower end of this bracket
    lo = std::max(g.first, ev - 2.0 * tol - 8.0 * std::numeric_limits<double>::epsilon() * std::abs(ev));
    if (count_below(t, lo) > k + 1) lo = g.first;
  }
  return out;
}

/// Solves (T - sigma M) x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_shifted(const SymTridiagonal& t, double sigma,
                                         std::span<const double> b) {
  const std::size_t n = t.size();
  // rows: lower l, diag d, upper u, second upper u2 (fill-in from pivoting)
  std::vector<double> l(n, 0.0), d(n), u(n, 0.0), u2(n, 0.0), x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - sigma * t.m(i);
    if (i + 1 < n) u[i] = t.off[i];
    if (i > 0) l[i] = t.off[i - 1];
  }
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(l[i + 1]) > std::abs(d[i])) {
      // swap rows i and i+1
      std::swap(d[i], l[i + 1]);
      std::swap(u[i], d[i + 1]);
      std::swap(u2[i], u[i + 1]);
      std::swap(x[i], x[i + 1]);
    }
    if (d[i] == 0.0) d[i] = tiny;
    const double f = l[i + 1] / d[i];
    d[i + 1] -= f * u[i];
    u[i + 1] -= f * u2[i];
    x[i + 1] -= f * x[i];
    l[i + 1] = 0.0;
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  x[n - 1] /= d[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - u[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t k = n - 2; k-- > 0;)
    x[k] = (x[k] - u[k] * x[k + 1] - u2[k] * x[k + 2]) / d[k];
  return x;
}

/// Eigenvector for a (simple) computed eigenvalue, normalized to x^T M x = 1
/// with its first significant entry positive.
inline std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda,
                                             int iterations = 4) {
  const std::size_t n = t.size();
  const double shift =
      lambda + 1e-10 * std::max(1.0, std::abs(lambda)) * (lambda >= 0 ? 1.0 : -1.0);
  std::vector<double> x(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(1.0 + i);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = t.m(i) * x[i];
    x = solve_shifted(t, shift, rhs);
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += t.m(i) * x[i] * x[i];
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  double amax = 0.0;
  for (double v : x) amax = std::max(amax, std::abs(v));
  for (double v : x)
    if (std::abs(v) > 1e-8 * amax) {
      if (v < 0)
        for (double& w : x) w = -w;
      break;
    }
  return x;
}

/// Sign changes of a sampled function, ignoring entries below rel_floor * max.
inline int sign_changes(std::span<const double> v, double rel_floor = 1e-13) {
  double amax = 0.0;
  for (double x : v) amax = std::max(amax, std::abs(x));
  int changes = 0;
  int last = 0;
  for (double x : v) {
    if (std::abs(x) <= rel_floor * amax) continue;
    const int s = x > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace lemorse::numerics
