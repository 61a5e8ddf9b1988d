#pragma once

// Independent eigenvalue oracle: implicit QL on the symmetrized tridiagonal
// (Eigen, long double), used to cross-check the Sturm bisection.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lemorse/numerics/tridiagonal.hpp"

namespace lemorse {

/// All eigenvalues of M^{-1/2} T M^{-1/2}, ascending, computed in extended
/// precision from the double entries.
inline std::vector<double> dense_eigenvalues(const numerics::SymTridiagonal& t) {
  using real = long double;
  using Vec = Eigen::Matrix<real, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = static_cast<Eigen::Index>(t.size());
  Vec d(n), e(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) d[i] = static_cast<real>(t.diag[i]) / t.m(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    e[i] = t.off[i] / std::sqrt(static_cast<real>(t.m(i)) * t.m(i + 1));
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(es.eigenvalues()[i]);
  return out;
}

struct OracleCheck {
  std::size_t compared = 0;
  /// Largest |bisection - oracle| / max(1, |lambda|).
  double max_difference = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Compares the lowest `count` bisection eigenvalues with the oracle.
inline OracleCheck oracle_compare(const numerics::SymTridiagonal& t, std::size_t count,
                                  double tol = 1e-10, double eig_tol = 1e-12) {
  count = std::min(count, t.size());
  const auto bis = numerics::lowest_eigenvalues(t, count, eig_tol);
  const auto dense = dense_eigenvalues(t);
  OracleCheck c;
  c.tolerance = tol;
  c.compared = count;
  for (std::size_t i = 0; i < count; ++i) {
    const double diff = std::abs(bis[i] - dense[i]) / std::max(1.0, std::abs(dense[i]));
    c.max_difference = std::max(c.max_difference, diff);
    if (diff > tol) c.pass = false;
  }
  return c;
}

}  // namespace lemorse
