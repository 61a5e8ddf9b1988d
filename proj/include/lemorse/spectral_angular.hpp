#pragma once

// Laplace-Beltrami spectrum of S^{N-1} and the Morse count of the full
// weighted operator, whose eigenvalues are beta~_i + lambda_k.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lemorse/error.hpp"
#include "lemorse/problem.hpp"
#include "lemorse/radial_solver.hpp"
#include "lemorse/spectral_radial.hpp"

namespace lemorse {

struct AngularLevel {
  int k = 0;
  long long lambda = 0;
  unsigned long long multiplicity = 0;
};

struct AngularSpectrum {
  int dim = 3;
  std::vector<AngularLevel> levels;
};

/// C(n, r) in 128-bit arithmetic; throws on overflow of 64 bits.
inline unsigned long long binomial_exact(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (int j = 1; j <= r; ++j) {
    // acc * (n - r + j) / j stays integral at every step
    acc = acc * static_cast<unsigned __int128>(n - r + j) / static_cast<unsigned __int128>(j);
    if (acc > std::numeric_limits<unsigned long long>::max())
      throw Error(ErrorKind::invalid_argument, "binomial coefficient overflows 64 bits");
  }
  return static_cast<unsigned long long>(acc);
}

/// N_h = C(N-1+h, N-1), zero for h < 0.
inline unsigned long long harmonic_dimension(int dim, int h) {
  if (h < 0) return 0;
  return binomial_exact(dim - 1 + h, dim - 1);
}

inline AngularSpectrum angular_eigenvalues(int dim, int k_max) {
  if (dim < 3) throw Error(ErrorKind::invalid_argument, "dimension must be >= 3");
  if (k_max < 1) throw Error(ErrorKind::invalid_argument, "k_max must be >= 1");
  AngularSpectrum a;
  a.dim = dim;
  for (int k = 0; k <= k_max; ++k) {
    const long long lam = static_cast<long long>(k) * (k + dim - 2);
    a.levels.push_back({k, lam, harmonic_dimension(dim, k) - harmonic_dimension(dim, k - 2)});
  }
  return a;
}

/// Smallest k_max >= 1 with lambda_{k_max} > -min(beta_min, 0).
inline int required_k_max(int dim, double beta_min) {
  const double need = std::max(-beta_min, 0.0);
  int k = 1;
  while (static_cast<double>(k) * (k + dim - 2) <= need) ++k;
  return k;
}

struct Contribution {
  int i = 0;  // 1-based radial index
  int k = 0;
  double value = 0.0;
  double error = 0.0;
  unsigned long long multiplicity = 0;
};

struct CombinedCount {
  long long count = 0;
  std::vector<Contribution> negatives;
  std::vector<Contribution> indeterminate;
  /// lambda_{k_max} > -min(beta~_1, 0), with margin.
  bool truncation_certified = false;
  /// Smallest |value| / error over all combinations examined.
  double min_margin_ratio = std::numeric_limits<double>::infinity();
};

/// beta~_i + lambda_k for one pair; k = 1 uses the gap to -(N-1) directly.
inline std::pair<double, double> combination(const RadialSpectrum& radial, std::size_t i,
                                             const AngularLevel& lev) {
  if (lev.k == 1) return radial.gap_to_limit(i);
  return {radial.weighted[i] + static_cast<double>(lev.lambda), radial.weighted_error[i]};
}

/// Counts negative beta~_i + lambda_k with multiplicity. Combinations within
/// max(margin, 5 * error) of zero are listed as indeterminate and not counted.
inline CombinedCount combine_spectra(const RadialSpectrum& radial, const AngularSpectrum& angular,
                                     double margin = 0.0) {
  const std::size_t m = static_cast<std::size_t>(radial.nodal_count);
  if (radial.weighted.size() < m + 1)
    throw Error(ErrorKind::invalid_argument, "radial spectrum needs at least m+1 eigenvalues");
  for (std::size_t i = 0; i < m; ++i)
    if (radial.weighted_indeterminate[i] || radial.weighted_near_limit[i])
      throw Error(ErrorKind::indeterminate_sign,
                  "radial eigenvalue " + std::to_string(i + 1) +
                      " is within its error of 0 or -(N-1); refine the grid or n");
  CombinedCount out;
  const double bmin = std::min(radial.weighted.front(), 0.0);
  const auto& top = angular.levels.back();
  out.truncation_certified =
      static_cast<double>(top.lambda) > -bmin + radial.weighted_error.front() + margin;
  if (!out.truncation_certified)
    throw Error(ErrorKind::invalid_argument, "angular truncation k_max too small");
  for (std::size_t i = 0; i < radial.weighted.size(); ++i) {
    for (const auto& lev : angular.levels) {
      const auto [v, e] = combination(radial, i, lev);
      // far above zero: no contribution, and higher k only increases it
      if (v > 0.0 && v > 10.0 * std::max(margin, 5.0 * e)) break;
      Contribution c{static_cast<int>(i + 1), lev.k, v, e, lev.multiplicity};
      out.min_margin_ratio = std::min(out.min_margin_ratio, std::abs(v) / e);
      if (std::abs(v) < std::max(margin, 5.0 * e)) {
        out.indeterminate.push_back(c);
      } else if (v < 0.0) {
        out.negatives.push_back(c);
        out.count += static_cast<long long>(lev.multiplicity);
      }
    }
  }
  std::sort(out.negatives.begin(), out.negatives.end(), [](const auto& a, const auto& b) {
    return a.value < b.value || (a.value == b.value && (a.i < b.i || (a.i == b.i && a.k < b.k)));
  });
  return out;
}

struct MorseReport {
  ProblemSpec spec;
  double log_n = 0.0;
  std::size_t grid_size = 0;
  long long morse_index = 0;
  int radial_morse_index = 0;
  int formula_value = 0;
  int lower_bound_value = 0;
  std::vector<Contribution> contributions;
  std::vector<Contribution> indeterminate;
  /// beta~_i + lambda_1 for i = 1..m-1 and whether each is negative.
  std::vector<double> beta_plus_lambda1;
  std::vector<bool> beta_plus_lambda1_negative;
  double min_margin_ratio = 0.0;
  bool match = false;
  bool radial_consistent = false;     // radial index == m
  bool lower_bound_consistent = false;  // index >= m_rad + N(m-1)
  bool counts_equal = false;          // plain == weighted radial counts
  bool oracle_consistent = false;     // bisection == oscillation count
  bool only_low_modes = false;        // only k in {0, 1} contribute
};

inline MorseReport morse_report(const RadialSolution& sol, const RadialSpectrum& radial,
                                const AngularSpectrum& angular, double margin = 0.0) {
  const auto cc = combine_spectra(radial, angular, margin);
  MorseReport r;
  r.spec = sol.spec;
  r.log_n = radial.log_n;
  r.grid_size = radial.grid_size;
  r.morse_index = cc.count;
  r.radial_morse_index = radial.negative_count_weighted;
  r.formula_value = sol.spec.morse_formula();
  r.lower_bound_value = r.radial_morse_index + sol.spec.dim * (sol.spec.nodal_count - 1);
  r.contributions = cc.negatives;
  r.indeterminate = cc.indeterminate;
  r.min_margin_ratio = cc.min_margin_ratio;
  for (int i = 0; i + 1 < sol.spec.nodal_count; ++i) {
    const double v = radial.gap_to_limit(static_cast<std::size_t>(i)).first;
    r.beta_plus_lambda1.push_back(v);
    r.beta_plus_lambda1_negative.push_back(v < 0.0);
  }
  r.match = cc.indeterminate.empty() && r.morse_index == r.formula_value;
  r.radial_consistent = r.radial_morse_index == sol.spec.nodal_count;
  r.lower_bound_consistent = r.morse_index >= r.lower_bound_value;
  r.counts_equal = radial.negative_count_plain == radial.negative_count_weighted &&
                   radial.sturm_count_plain == radial.sturm_count_weighted;
  r.oracle_consistent = radial.oscillation_count == radial.sturm_count_weighted;
  r.only_low_modes = std::all_of(r.contributions.begin(), r.contributions.end(),
                                 [](const Contribution& c) { return c.k <= 1; });
  return r;
}

/// Angular spectrum truncated just past what the radial spectrum can reach.
inline AngularSpectrum angular_for(const RadialSpectrum& radial) {
  const double bmin = radial.weighted.front() - radial.weighted_error.front();
  return angular_eigenvalues(radial.dim, required_k_max(radial.dim, bmin) + 1);
}

}  // namespace lemorse
