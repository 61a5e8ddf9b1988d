#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "lemorse/error.hpp"

namespace lemorse {

/// Critical Sobolev exponent (N+2)/(N-2).
inline double critical_exponent(int dim) {
  return static_cast<double>(dim + 2) / static_cast<double>(dim - 2);
}

/// Surface area of the unit sphere S^{N-1}.
inline double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

/// Volume of the unit ball in R^N.
inline double ball_volume(int dim) { return sphere_area(dim) / dim; }

/// Equation parameters without the nodal count. Used by the raw initial
/// value problem, which also accepts the boundary cases p = 1 and p = p_S.
struct IvpSpec {
  int dim = 3;
  double exponent = 2.0;

  static IvpSpec make(int dim, double exponent) {
    if (dim < 3) throw Error(ErrorKind::invalid_argument, "dimension must be >= 3");
    if (!(exponent >= 1.0))
      throw Error(ErrorKind::invalid_argument, "exponent must be >= 1");
    return IvpSpec{dim, exponent};
  }
};

/// One Lane-Emden instance: dimension N, exponent p in (1, p_S), nodal count m.
struct ProblemSpec {
  int dim = 3;
  double exponent = 2.0;
  int nodal_count = 1;

  static ProblemSpec make(int dim, double exponent, int nodal_count) {
    if (dim < 3) throw Error(ErrorKind::invalid_argument, "dimension must be >= 3");
    const double ps = critical_exponent(dim);
    if (!(exponent > 1.0 && exponent < ps))
      throw Error(ErrorKind::invalid_argument,
                  "exponent " + std::to_string(exponent) + " outside (1, " +
                      std::to_string(ps) + ")");
    if (nodal_count < 1)
      throw Error(ErrorKind::invalid_argument, "nodal count must be >= 1");
    return ProblemSpec{dim, exponent, nodal_count};
  }

  double critical() const { return critical_exponent(dim); }

  /// 2/(p-1): the exponent of the scaling u -> R^{2/(p-1)} u(R x).
  double scaling_power() const { return 2.0 / (exponent - 1.0); }

  /// m + N(m-1).
  int morse_formula() const { return nodal_count + dim * (nodal_count - 1); }

  IvpSpec ivp() const { return IvpSpec{dim, exponent}; }
};

}  // namespace lemorse
