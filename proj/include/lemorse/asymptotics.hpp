#pragma once

// Rescalings z_i(x) = (-1)^i u(x / lambda_i) / M_i, lambda_i = M_i^{(p-1)/2},
// around each nodal region, and the scaling diagnostics tracked over a sweep
// in p toward p_S.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lemorse/error.hpp"
#include "lemorse/limit_problem.hpp"
#include "lemorse/numerics/quadrature.hpp"
#include "lemorse/radial_solver.hpp"

namespace lemorse {

struct RescaledProfile {
  int region_index = 0;
  int dim = 3;
  double lambda = 1.0;
  double extremum = 1.0;
  std::vector<double> x_grid;
  std::vector<double> z_values;
  std::vector<double> dz_values;
  /// Rescaled critical radius, inner nodal radius (0 for i = 0) and the
  /// rescaled ball radius; the tail set is (x_inner, x_outer).
  double x_critical = 0.0;
  double x_inner = 0.0;
  double x_outer = 0.0;
};

/// Samples z_i on a uniform grid over [x_inner, min(x_outer, x_max)].
inline RescaledProfile rescale_region(const RadialSolution& sol, int i, double x_max = 50.0,
                                      std::size_t points = 4001) {
  const int m = sol.spec.nodal_count;
  if (i < 0 || i >= m) throw Error(ErrorKind::invalid_argument, "region index out of range");
  const double p = sol.spec.exponent;
  const auto& nd = sol.nodal;
  RescaledProfile z;
  z.region_index = i;
  z.dim = sol.spec.dim;
  z.extremum = nd.extrema[i];
  z.lambda = std::pow(z.extremum, 0.5 * (p - 1.0));
  z.x_critical = z.lambda * nd.critical_radii[i];
  z.x_inner = i == 0 ? 0.0 : z.lambda * nd.nodal_radii[i - 1];
  z.x_outer = z.lambda;
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  const double hi = std::min(z.x_outer, std::max(x_max, z.x_inner));
  for (std::size_t j = 0; j < points; ++j) {
    const double x = z.x_inner + (hi - z.x_inner) * static_cast<double>(j) / (points - 1);
    const double r = x / z.lambda;
    z.x_grid.push_back(x);
    z.z_values.push_back(sign * sol.u(r) / z.extremum);
    z.dz_values.push_back(sign * sol.du(r) / (z.extremum * z.lambda));
  }
  return z;
}

struct ProfileDistance {
  double c0 = 0.0;
  double c1 = 0.0;
  std::size_t points = 0;
};

/// sup |z - U| and sup |z' - U'| over inner_cut <= x <= R within the samples.
inline ProfileDistance profile_distance(const RescaledProfile& z, double R, double inner_cut) {
  if (!(R > inner_cut && inner_cut >= 0.0))
    throw Error(ErrorKind::invalid_argument, "need R > inner_cut >= 0");
  if (z.region_index >= 1 && !(inner_cut > 0.0))
    throw Error(ErrorKind::invalid_argument, "regions i >= 1 need inner_cut > 0");
  const LimitProfile lp(z.dim);
  ProfileDistance d;
  for (std::size_t j = 0; j < z.x_grid.size(); ++j) {
    const double x = z.x_grid[j];
    if (x < inner_cut || x > R) continue;
    d.c0 = std::max(d.c0, std::abs(z.z_values[j] - lp.U(x)));
    d.c1 = std::max(d.c1, std::abs(z.dz_values[j] - lp.dU(x)));
    ++d.points;
  }
  if (d.points == 0)
    throw Error(ErrorKind::insufficient_domain, "rescaled domain misses the comparison window");
  return d;
}

/// Integral of |grad z_i|^2 over the rescaled i-th region, in x variables.
inline double rescaled_gradient_energy(const RadialSolution& sol, int i) {
  const int dim = sol.spec.dim;
  const double p = sol.spec.exponent;
  const double M = sol.nodal.extrema[i];
  const double lam = std::pow(M, 0.5 * (p - 1.0));
  const double a = i == 0 ? sol.ivp.t_begin() : sol.zero_t(i);
  const double b = sol.zero_t(i + 1);
  // x = lam r = lam e^{t - L}
  const double val = numerics::integrate_along(
      sol.ivp.traj,
      [&](double t, const auto& y) {
        const double x = lam * std::exp(t - sol.log_scale);
        const double dz = sol.amplitude() * y[1] / (x / lam) / (M * lam);
        return dz * dz * std::pow(x, dim);
      },
      a, b);
  return sphere_area(dim) * val;
}

/// lambda^{N-2} / M^2 = M^{((p-1)(N-2) - 4)/2}.
inline double rescaling_energy_factor(int dim, double p, double M) {
  return std::pow(M, 0.5 * ((p - 1.0) * (dim - 2.0) - 4.0));
}

struct SweepRow {
  double p = 0.0;
  std::vector<double> A, B, C, R;  // i = 1..m-1
  std::vector<double> M_ratio;     // M_i / M_{i+1}, i = 0..m-2
  double M0 = 0.0;
  std::vector<double> distance_c0, distance_c1;  // per region
  std::vector<double> energies;                  // gradient energy per region
  double sup_pf = 0.0;
};

struct TrendFlag {
  std::string column;
  bool ok = true;
};

struct SweepDiagnostics {
  int dim = 3;
  int nodal_count = 1;
  std::vector<SweepRow> rows;
  std::vector<TrendFlag> trends;

  bool all_trends_ok() const {
    return std::all_of(trends.begin(), trends.end(), [](const TrendFlag& t) { return t.ok; });
  }
};

struct SweepDiagnosticsOptions {
  double window = 5.0;
  double inner_cut = 0.1;
  double alpha = 0.25;
};

/// Strictly monotone over the last three values.
inline bool tail_monotone(const std::vector<double>& v, bool increasing) {
  if (v.size() < 3) return false;
  const std::size_t n = v.size();
  for (std::size_t j = n - 2; j < n; ++j) {
    if (increasing && !(v[j] > v[j - 1])) return false;
    if (!increasing && !(v[j] < v[j - 1])) return false;
  }
  return true;
}

inline SweepDiagnostics sweep_diagnostics(const std::vector<const RadialSolution*>& sols,
                                          const SweepDiagnosticsOptions& opt = {}) {
  if (sols.size() < 3) throw Error(ErrorKind::invalid_argument, "sweep needs >= 3 points");
  SweepDiagnostics d;
  d.dim = sols.front()->spec.dim;
  d.nodal_count = sols.front()->spec.nodal_count;
  const int m = d.nodal_count;
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const auto& s = *sols[k];
    if (s.spec.dim != d.dim || s.spec.nodal_count != m)
      throw Error(ErrorKind::invalid_argument, "sweep mixes instances");
    if (k > 0 && !(s.spec.exponent > sols[k - 1]->spec.exponent))
      throw Error(ErrorKind::invalid_argument, "sweep p values must increase");
    const double half = 0.5 * (s.spec.exponent - 1.0);
    const auto& nd = s.nodal;
    SweepRow row;
    row.p = s.spec.exponent;
    row.M0 = nd.extrema[0];
    for (int i = 1; i < m; ++i) {
      row.A.push_back(nd.nodal_radii[i - 1] * std::pow(nd.extrema[i - 1], half));
      row.B.push_back(nd.critical_radii[i] * std::pow(nd.extrema[i], half));
      row.C.push_back(nd.nodal_radii[i - 1] * std::pow(nd.extrema[i], half));
      row.R.push_back(nd.critical_radii[i] / nd.nodal_radii[i]);
    }
    for (int i = 0; i + 1 < m; ++i) row.M_ratio.push_back(nd.extrema[i] / nd.extrema[i + 1]);
    for (int i = 0; i < m; ++i) {
      const auto z = rescale_region(s, i, opt.window);
      double c0 = std::numeric_limits<double>::quiet_NaN(), c1 = c0;
      try {
        const auto pd = profile_distance(z, opt.window, i == 0 ? 0.0 : opt.inner_cut);
        c0 = pd.c0;
        c1 = pd.c1;
      } catch (const Error&) {
      }
      row.distance_c0.push_back(c0);
      row.distance_c1.push_back(c1);
    }
    for (const auto& e : energy_per_region(s)) row.energies.push_back(e.gradient);
    row.sup_pf = check_pointwise_bounds(s, opt.alpha).potential.sup_pf;
    d.rows.push_back(std::move(row));
  }
  auto column = [&](auto get) {
    std::vector<double> v;
    for (const auto& r : d.rows) v.push_back(get(r));
    return v;
  };
  d.trends.push_back({"M0", tail_monotone(column([](const SweepRow& r) { return r.M0; }), true)});
  for (int i = 1; i < m; ++i) {
    const std::size_t j = static_cast<std::size_t>(i - 1);
    const std::string s = std::to_string(i);
    d.trends.push_back({"A" + s, tail_monotone(column([j](const SweepRow& r) { return r.A[j]; }), true)});
    d.trends.push_back({"B" + s, tail_monotone(column([j](const SweepRow& r) { return r.B[j]; }), false)});
    d.trends.push_back({"C" + s, tail_monotone(column([j](const SweepRow& r) { return r.C[j]; }), false)});
    d.trends.push_back({"R" + s, tail_monotone(column([j](const SweepRow& r) { return r.R[j]; }), false)});
  }
  for (int i = 0; i + 1 < m; ++i) {
    const std::size_t j = static_cast<std::size_t>(i);
    d.trends.push_back({"M_ratio" + std::to_string(i),
                        tail_monotone(column([j](const SweepRow& r) { return r.M_ratio[j]; }), true)});
  }
  for (int i = 0; i < m; ++i) {
    const std::size_t j = static_cast<std::size_t>(i);
    d.trends.push_back({"distance" + std::to_string(i),
                        tail_monotone(column([j](const SweepRow& r) { return r.distance_c0[j]; }), false)});
  }
  return d;
}

}  // namespace lemorse
