#pragma once

// Radial Lane-Emden solutions on the unit ball by integrate-then-rescale.
//
// The initial value problem u(0) = 1 is integrated in t = ln(rho) with state
// (u, v) where v = rho u_rho:
//   u_t = v,   v_t = -(N-2) v - e^{2t} |u|^{p-1} u.
// The m-th zero R of u gives the unit-ball solution R^{2/(p-1)} u(R r).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lemorse/error.hpp"
#include "lemorse/numerics/dopri5.hpp"
#include "lemorse/numerics/quadrature.hpp"
#include "lemorse/numerics/roots.hpp"
#include "lemorse/problem.hpp"

namespace lemorse {

struct IvpOptions {
  /// Radius where the Taylor start hands over to the integrator.
  double rho0 = 1e-6;
  double ceiling = 1e100;
  std::size_t max_steps = 5'000'000;
  /// Tolerance in t = ln(rho) (relative in rho) for zeros and critical points.
  double root_tol = 1e-13;
};

/// Dense solution of the initial value problem with u(0) = 1, in the
/// original (unscaled) radius rho.
class IvpSolution {
 public:
  IvpSpec spec;
  double tol = 1e-10;
  double rho0 = 1e-6;
  numerics::DenseTrajectory<2> traj;
  /// Refined zeros, as t = ln(rho).
  std::vector<double> zeros_t;

  double t_begin() const { return std::log(rho0); }
  double t_end() const { return traj.t_end(); }
  double rho_end() const { return std::exp(t_end()); }

  double taylor_a() const { return -1.0 / (2.0 * spec.dim); }
  double taylor_b() const {
    return spec.exponent / (8.0 * spec.dim * (spec.dim + 2.0));
  }

  /// (u, rho u_rho) at t = ln(rho), from the series below rho0.
  numerics::State<2> state(double t) const {
    if (t < t_begin()) {
      const double r2 = std::exp(2.0 * t);
      return {1.0 + r2 * (taylor_a() + taylor_b() * r2),
              r2 * (2.0 * taylor_a() + 4.0 * taylor_b() * r2)};
    }
    return traj.eval(std::min(t, t_end()));
  }

  /// d/dt of the state, from the interpolant (series below rho0).
  numerics::State<2> state_derivative(double t) const {
    if (t < t_begin()) {
      const double r2 = std::exp(2.0 * t);
      return {r2 * (2.0 * taylor_a() + 4.0 * taylor_b() * r2),
              r2 * (4.0 * taylor_a() + 16.0 * taylor_b() * r2)};
    }
    return traj.derivative(std::min(t, t_end()));
  }

  double u(double rho) const {
    if (rho <= 0.0) return 1.0;
    return state(std::log(rho))[0];
  }

  double du(double rho) const {
    if (rho <= 0.0) return 0.0;
    return state(std::log(rho))[1] / rho;
  }

  /// |v_t + (N-2) v + e^{2t}|u|^{p-1}u| divided by the sum of the term
  /// magnitudes; the interpolant's derivative is used for v_t.
  double relative_residual(double t) const {
    const auto y = state(t);
    const auto dy = state_derivative(t);
    const double n2 = spec.dim - 2.0;
    const double src = std::exp(2.0 * t) * std::pow(std::abs(y[0]), spec.exponent - 1.0) * y[0];
    const double res = dy[1] + n2 * y[1] + src;
    const double scale = std::abs(dy[1]) + std::abs(n2 * y[1]) + std::abs(src);
    return scale > 0.0 ? std::abs(res) / scale : 0.0;
  }
};

namespace detail {

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

/// Refined roots of component `comp` of the trajectory on (t_lo, t_hi],
/// detected as sign changes between accepted-step endpoints.
inline std::vector<double> trajectory_roots(const numerics::DenseTrajectory<2>& traj, int comp,
                                            double t_lo, double t_hi, double xtol,
                                            std::size_t max_count) {
  std::vector<double> roots;
  for (const auto& st : traj.steps()) {
    if (st.t1() <= t_lo) continue;
    if (st.t0 >= t_hi) break;
    const double a = std::max(st.t0, t_lo), b = std::min(st.t1(), t_hi);
    const double fa = st.eval(a)[comp], fb = st.eval(b)[comp];
    if (fb == 0.0 && b < t_hi) continue;  // picked up by the next step
    if (fa == 0.0 && a > t_lo) {
      roots.push_back(a);
    } else if (sign_of(fa) * sign_of(fb) < 0) {
      roots.push_back(numerics::bracketed_root(
          [&](double t) { return st.eval(t)[comp]; }, a, b, xtol));
    } else {
      continue;
    }
    if (roots.size() >= max_count) break;
  }
  return roots;
}

}  // namespace detail

/// Integrates the u(0) = 1 initial value problem from the Taylor zone to
/// rho = r_max. With stop_after_zeros > 0 the integration ends at the step
/// containing that many sign changes.
inline IvpSolution integrate_ivp(const IvpSpec& spec, double r_max, double tol,
                                 std::size_t stop_after_zeros = 0,
                                 const IvpOptions& opt = {}) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "ivp tolerance must be > 0");
  if (!(r_max > opt.rho0))
    throw Error(ErrorKind::invalid_argument, "r_max must exceed the Taylor start radius");
  IvpSolution sol;
  sol.spec = spec;
  sol.tol = tol;
  sol.rho0 = opt.rho0;

  const double p = spec.exponent;
  const double n2 = spec.dim - 2.0;
  auto rhs = [p, n2](double t, const numerics::State<2>& y) -> numerics::State<2> {
    const double src = std::exp(2.0 * t) * std::pow(std::abs(y[0]), p - 1.0) * y[0];
    return {y[1], -n2 * y[1] - src};
  };

  const double t0 = sol.t_begin();
  numerics::Dopri5Options o;
  o.rtol = tol;
  o.atol = 1e-300;
  o.h_init = 1e-2;
  o.max_steps = opt.max_steps;
  o.ceiling = opt.ceiling;

  std::size_t changes = 0;
  int last_sign = 1;
  auto observer = [&](const numerics::DenseStep<2>& st) {
    const int s = detail::sign_of(st.coef[0][0] + st.coef[1][0]);
    if (s != 0 && s != last_sign) {
      ++changes;
      last_sign = s;
    }
    return stop_after_zeros > 0 && changes >= stop_after_zeros;
  };
  // the series value at t0 (state() uses the series strictly below t_begin)
  const double r2 = opt.rho0 * opt.rho0;
  const numerics::State<2> ys{1.0 + r2 * (sol.taylor_a() + sol.taylor_b() * r2),
                              r2 * (2.0 * sol.taylor_a() + 4.0 * sol.taylor_b() * r2)};
  auto res = numerics::dopri5<2>(rhs, t0, ys, std::log(r_max), o, observer);
  sol.traj = std::move(res.trajectory);
  sol.zeros_t = detail::trajectory_roots(sol.traj, 0, t0, sol.traj.t_end(), opt.root_tol,
                                         std::numeric_limits<std::size_t>::max());
  return sol;
}

/// Sampled unit-ball solution.
struct RadialProfile {
  ProblemSpec spec;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivatives;
  double ivp_tolerance = 0.0;
};

struct NodalData {
  /// r_1 < ... < r_m = 1.
  std::vector<double> nodal_radii;
  /// s_0 = 0 < s_1 < ... < s_{m-1}.
  std::vector<double> critical_radii;
  /// M_i = |u(s_i)|.
  std::vector<double> extrema;
  /// False when M_0 > M_1 > ... fails (expected only at loose p).
  bool extrema_decreasing = true;
};

struct SolveOptions {
  double ivp_tol = 1e-10;
  /// Log-uniform samples on [r_1/100, 1].
  std::size_t grid_points = 2048;
  /// Uniform samples on [0, r_1/100).
  std::size_t taylor_points = 16;
  /// First integration bound in rho; ln(r_max) is doubled on failure.
  double r_max = 1e6;
  int max_extensions = 4;
  IvpOptions ivp;
};

/// m-nodal solution of the unit-ball problem, rescaled from the IVP.
struct RadialSolution {
  ProblemSpec spec;
  IvpSolution ivp;
  /// ln R with R the m-th zero of the unscaled solution.
  double log_scale = 0.0;
  RadialProfile profile;
  NodalData nodal;

  double alpha() const { return spec.scaling_power(); }
  double amplitude() const { return std::exp(alpha() * log_scale); }

  /// Unscaled log-radius of the rescaled radius r.
  double t_of(double r) const { return std::log(r) + log_scale; }

  double u(double r) const {
    if (r <= 0.0) return amplitude();
    return amplitude() * ivp.state(t_of(r))[0];
  }

  double du(double r) const {
    if (r <= 0.0) return 0.0;
    return amplitude() * ivp.state(t_of(r))[1] / r;
  }

  /// r^2 |u(r)|^{p-1} evaluated at s = ln r (scale invariant).
  double f_log(double s) const {
    const double t = s + log_scale;
    return std::exp(2.0 * t) * std::pow(std::abs(ivp.state(t)[0]), spec.exponent - 1.0);
  }

  double f(double r) const { return r <= 0.0 ? 0.0 : f_log(std::log(r)); }

  /// Unscaled t of the i-th nodal radius (i = 1..m).
  double zero_t(int i) const { return ivp.zeros_t.at(static_cast<std::size_t>(i - 1)); }
};

/// Resamples the rescaled solution on the stored-profile grid.
inline RadialProfile sample_profile(const RadialSolution& sol, std::size_t grid_points,
                                    std::size_t taylor_points) {
  RadialProfile prof;
  prof.spec = sol.spec;
  prof.ivp_tolerance = sol.ivp.tol;
  const double r1 = sol.nodal.nodal_radii.front();
  const double r_lo = r1 / 100.0;
  for (std::size_t j = 0; j < taylor_points; ++j)
    prof.grid.push_back(r_lo * static_cast<double>(j) / static_cast<double>(taylor_points));
  const double l0 = std::log(r_lo);
  const std::size_t g = std::max<std::size_t>(grid_points, 2);
  for (std::size_t j = 0; j < g; ++j) {
    const double r = (j + 1 == g) ? 1.0 : std::exp(l0 * (1.0 - static_cast<double>(j) / (g - 1)));
    prof.grid.push_back(r);
  }
  prof.values.reserve(prof.grid.size());
  prof.derivatives.reserve(prof.grid.size());
  for (double r : prof.grid) {
    prof.values.push_back(sol.u(r));
    prof.derivatives.push_back(sol.du(r));
  }
  return prof;
}

/// Zeros, critical radii and extrema of an unscaled IVP solution, for the
/// first m nodal regions, as rescaled unit-ball quantities.
inline NodalData locate_nodes(const IvpSolution& ivp, int m, double log_scale,
                              double root_tol = 1e-13) {
  if (m < 1) throw Error(ErrorKind::invalid_argument, "nodal count must be >= 1");
  if (ivp.zeros_t.size() < static_cast<std::size_t>(m))
    throw Error(ErrorKind::insufficient_domain,
                "found " + std::to_string(ivp.zeros_t.size()) + " sign changes, need " +
                    std::to_string(m) + "; enlarge r_max");
  const double alpha = 2.0 / (ivp.spec.exponent - 1.0);
  const double amp = std::exp(alpha * log_scale);
  NodalData nd;
  nd.critical_radii.push_back(0.0);
  nd.extrema.push_back(amp);
  // the first region has no interior critical point: v < 0 on (0, r_1)
  const auto v_roots0 =
      detail::trajectory_roots(ivp.traj, 1, ivp.t_begin(), ivp.zeros_t[0], root_tol, 2);
  if (!v_roots0.empty())
    throw Error(ErrorKind::not_converged, "spurious critical point in the first nodal region");
  for (int i = 0; i < m; ++i) {
    nd.nodal_radii.push_back(std::exp(ivp.zeros_t[i] - log_scale));
    if (i + 1 < m) {
      const auto cr = detail::trajectory_roots(ivp.traj, 1, ivp.zeros_t[i],
                                               ivp.zeros_t[i + 1], root_tol, 3);
      if (cr.size() != 1)
        throw Error(ErrorKind::not_converged,
                    "expected one critical point in nodal region " + std::to_string(i + 1) +
                        ", found " + std::to_string(cr.size()));
      nd.critical_radii.push_back(std::exp(cr[0] - log_scale));
      nd.extrema.push_back(amp * std::abs(ivp.state(cr[0])[0]));
    }
  }
  nd.nodal_radii.back() = 1.0;
  for (std::size_t i = 1; i < nd.extrema.size(); ++i)
    if (!(nd.extrema[i] < nd.extrema[i - 1])) nd.extrema_decreasing = false;
  for (std::size_t i = 1; i < nd.critical_radii.size(); ++i)
    if (!(nd.nodal_radii[i - 1] < nd.critical_radii[i] && nd.critical_radii[i] < nd.nodal_radii[i]))
      throw Error(ErrorKind::not_converged, "zeros and critical radii do not interlace");
  return nd;
}

/// The m-nodal unit-ball solution with u(0) > 0.
inline RadialSolution solve_m_nodal(const ProblemSpec& spec, const SolveOptions& opt = {}) {
  RadialSolution sol;
  sol.spec = spec;
  double log_rmax = std::log(opt.r_max);
  for (int attempt = 0;; ++attempt) {
    sol.ivp = integrate_ivp(spec.ivp(), std::exp(log_rmax), opt.ivp_tol,
                            static_cast<std::size_t>(spec.nodal_count), opt.ivp);
    if (sol.ivp.zeros_t.size() >= static_cast<std::size_t>(spec.nodal_count)) break;
    if (attempt >= opt.max_extensions)
      throw Error(ErrorKind::insufficient_domain,
                  "zero " + std::to_string(spec.nodal_count) + " not found below rho = e^" +
                      std::to_string(log_rmax));
    log_rmax *= 2.0;
  }
  sol.ivp.zeros_t.resize(static_cast<std::size_t>(spec.nodal_count));
  sol.log_scale = sol.ivp.zeros_t.back();
  sol.nodal = locate_nodes(sol.ivp, spec.nodal_count, sol.log_scale, opt.ivp.root_tol);
  sol.profile = sample_profile(sol, opt.grid_points, opt.taylor_points);
  return sol;
}

/// Largest ODE residual over the stored grid (Taylor zone excluded), in units
/// of tol * (|y|_step / h + |y'|), with |y|_step the step controller's norm
/// and h the local step length in t: the continuous extension's derivative
/// carries the local error divided by h.
inline double max_profile_residual(const RadialSolution& sol) {
  const int dim = sol.spec.dim;
  const double p = sol.spec.exponent;
  double worst = 0.0;
  for (double r : sol.profile.grid) {
    if (r <= 0.0) continue;
    const double t = sol.t_of(r);
    if (t < sol.ivp.t_begin()) continue;
    const auto& st = sol.ivp.traj.step_at(t);
    const auto y = st.eval(t);
    const auto dy = st.derivative(t);
    const double res = dy[1] + (dim - 2.0) * y[1] +
                       std::exp(2.0 * t) * std::pow(std::abs(y[0]), p - 1.0) * y[0];
    const auto y1 = st.eval(st.t1());
    const double ymax = std::max({std::abs(st.coef[0][0]), std::abs(st.coef[0][1]),
                                  std::abs(y1[0]), std::abs(y1[1])});
    const double scale =
        sol.ivp.tol * (ymax / st.h + std::max(std::abs(dy[0]), std::abs(dy[1])));
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Scaling relations between the m-nodal and h-nodal solutions.

struct ScalingEntry {
  std::string identity;
  int j = 0;
  double residual = 0.0;
};

struct ScalingReport {
  std::vector<ScalingEntry> entries;
  double max_residual = 0.0;
  bool pass = true;
};

inline double relative_gap(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline ScalingReport check_scaling_relations(const RadialSolution& sol_m,
                                             const RadialSolution& sol_h, double tol = 1e-6) {
  if (sol_m.spec.dim != sol_h.spec.dim || sol_m.spec.exponent != sol_h.spec.exponent)
    throw Error(ErrorKind::invalid_argument, "scaling check needs matching (N, p)");
  const int m = sol_m.spec.nodal_count, h = sol_h.spec.nodal_count;
  if (h > m) throw Error(ErrorKind::invalid_argument, "scaling check needs h <= m");
  const double half = 0.5 * (sol_m.spec.exponent - 1.0);
  const auto& A = sol_m.nodal;
  const auto& B = sol_h.nodal;
  const double rmh = A.nodal_radii[h - 1];
  ScalingReport rep;
  auto add = [&](const char* name, int j, double lhs, double rhs) {
    const double g = relative_gap(lhs, rhs);
    rep.entries.push_back({name, j, g});
    rep.max_residual = std::max(rep.max_residual, g);
  };
  for (int j = 1; j <= h; ++j)
    add("nodal_radius", j, B.nodal_radii[j - 1], A.nodal_radii[j - 1] / rmh);
  for (int j = 1; j < h; ++j) {
    add("critical_radius", j, B.critical_radii[j], A.critical_radii[j] / rmh);
    add("critical_product", j, B.critical_radii[j] * std::pow(B.extrema[j], half),
        A.critical_radii[j] * std::pow(A.extrema[j], half));
  }
  for (int j = 0; j < h; ++j)
    add("extremum", j, std::pow(B.extrema[j], half), rmh * std::pow(A.extrema[j], half));
  rep.pass = rep.max_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Pointwise bounds.

/// Root in (0, 1) of g(s) = alpha with
/// g(s) = 1/(k-2) + s - (k-1)/(k-2) s^{(k-2)/(k-1)}, k = 2(N-1)/(N-2).
inline double gamma_of_alpha(int dim, double alpha, double tol = 1e-12) {
  const double k = 2.0 * (dim - 1.0) / (dim - 2.0);
  if (!(alpha > 0.0 && alpha < 0.5 * (dim - 2.0)))
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, (N-2)/2)");
  auto g = [k](double s) {
    return 1.0 / (k - 2.0) + s - (k - 1.0) / (k - 2.0) * std::pow(s, (k - 2.0) / (k - 1.0));
  };
  return numerics::bisect_decreasing(g, alpha, 0.0, 1.0, tol);
}

struct BoundCheck {
  bool pass = true;
  /// Smallest (bound - |u|) / bound over the checked points.
  double margin = std::numeric_limits<double>::infinity();
  std::size_t points = 0;
};

struct AnnularBound {
  int region = 0;
  double gamma = 0.0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  /// False when the set C_i is empty (pre-asymptotic p).
  bool regime_reached = true;
  BoundCheck check;
};

struct DerivativeBound {
  /// sup |u'(r)| r^{(p+1)/(p-1)}.
  double empirical_sup = 0.0;
  /// Hoelder constant built from the L^{N(p-1)/2} mass; meaningful for p >= N/(N-2).
  double holder_constant = 0.0;
  bool holder_applicable = false;
  bool pass = true;
};

struct PotentialBound {
  double sup_f = 0.0;
  double sup_pf = 0.0;
  double argmax_r = 0.0;
  /// N(N+2)/4.
  double limit_value = 0.0;
};

struct BoundReport {
  BoundCheck first_region;
  std::vector<AnnularBound> annular;
  DerivativeBound derivative;
  PotentialBound potential;
};

struct RegionEnergy {
  double gradient = 0.0;
  double lp1 = 0.0;
  /// Integral of |u|^{N(p-1)/2}.
  double critical_mass = 0.0;
  double relative_gap = 0.0;
};

/// Per nodal region: integrals of |grad u|^2, |u|^{p+1} and |u|^{N(p-1)/2}.
inline std::vector<RegionEnergy> energy_per_region(const RadialSolution& sol) {
  const int dim = sol.spec.dim;
  const double p = sol.spec.exponent;
  const double q = 0.5 * dim * (p - 1.0);
  const double alpha = sol.alpha();
  const double L = sol.log_scale;
  const double w = sphere_area(dim);
  const double grad_scale = std::exp((2.0 * alpha - dim + 2.0) * L);
  const double lp1_scale = std::exp((2.0 * alpha + 2.0 - dim) * L);
  std::vector<RegionEnergy> out;
  const auto& traj = sol.ivp.traj;
  for (int i = 0; i < sol.spec.nodal_count; ++i) {
    const double a = i == 0 ? sol.ivp.t_begin() : sol.zero_t(i);
    const double b = sol.zero_t(i + 1);
    RegionEnergy e;
    e.gradient = numerics::integrate_along(
        traj, [&](double t, const auto& y) { return y[1] * y[1] * std::exp((dim - 2.0) * t); },
        a, b);
    e.lp1 = numerics::integrate_along(
        traj,
        [&](double t, const auto& y) { return std::pow(std::abs(y[0]), p + 1.0) * std::exp(dim * t); },
        a, b);
    e.critical_mass = numerics::integrate_along(
        traj, [&](double t, const auto& y) { return std::pow(std::abs(y[0]), q) * std::exp(dim * t); },
        a, b);
    if (i == 0) {
      // the Taylor zone, where u = 1 to leading order
      const double r0n = std::pow(sol.ivp.rho0, dim) / dim;
      e.lp1 += r0n;
      e.critical_mass += r0n;
    }
    e.gradient *= w * grad_scale;
    e.lp1 *= w * lp1_scale;
    e.critical_mass *= w;
    e.relative_gap = relative_gap(e.gradient, e.lp1);
    out.push_back(e);
  }
  return out;
}

/// Diagnostic pointwise bounds; nothing here throws on a violated bound.
inline BoundReport check_pointwise_bounds(const RadialSolution& sol, double alpha) {
  const int dim = sol.spec.dim;
  const double p = sol.spec.exponent;
  const auto& nd = sol.nodal;
  const auto& grid = sol.profile.grid;
  BoundReport rep;
  const double nn2 = dim * (dim - 2.0);
  const double ex = 0.5 * (dim - 2.0);

  auto check_against = [&](BoundCheck& bc, double M, double coef, double r) {
    const double bound = M / std::pow(1.0 + coef * std::pow(M, p - 1.0) * r * r, ex);
    const double val = std::abs(sol.u(r));
    // bound - |u| is O(r^4) at the origin; allow rounding there
    const double margin = (bound - val) / bound;
    bc.margin = std::min(bc.margin, margin);
    if (margin < -1e-9) bc.pass = false;
    ++bc.points;
  };

  // (a) first nodal region
  for (double r : grid) {
    if (r >= nd.nodal_radii[0]) break;
    check_against(rep.first_region, nd.extrema[0], 1.0 / nn2, r);
  }

  // (b) annular regions
  const double gam = gamma_of_alpha(dim, alpha);
  const double coef_b = 2.0 * alpha / (dim * (dim - 2.0) * (dim - 2.0));
  for (int i = 1; i < sol.spec.nodal_count; ++i) {
    AnnularBound ab;
    ab.region = i;
    ab.gamma = gam;
    ab.inner_radius = std::pow(gam, -1.0 / dim) * nd.critical_radii[i];
    ab.outer_radius = nd.nodal_radii[i];
    ab.regime_reached = ab.inner_radius < ab.outer_radius;
    if (ab.regime_reached) {
      for (double r : grid)
        if (r > ab.inner_radius && r < ab.outer_radius)
          check_against(ab.check, nd.extrema[i], coef_b, r);
      if (ab.check.points == 0) ab.regime_reached = false;
    }
    if (!ab.regime_reached) ab.check.pass = false;
    rep.annular.push_back(ab);
  }

  // (c) derivative bound
  {
    const double ex_c = (p + 1.0) / (p - 1.0);
    for (double r : grid)
      if (r > 0.0)
        rep.derivative.empirical_sup =
            std::max(rep.derivative.empirical_sup, std::abs(sol.du(r)) * std::pow(r, ex_c));
    const double q = 0.5 * dim * (p - 1.0);
    rep.derivative.holder_applicable = q >= p;
    if (rep.derivative.holder_applicable) {
      double mass = 0.0;
      for (const auto& e : energy_per_region(sol)) mass += e.critical_mass;
      rep.derivative.holder_constant = std::pow(ball_volume(dim), 1.0 - p / q) *
                                       std::pow(mass, p / q) / sphere_area(dim);
      rep.derivative.pass =
          rep.derivative.empirical_sup <= rep.derivative.holder_constant * (1.0 + 1e-6);
    }
  }

  // (d) sup of f = r^2 |u|^{p-1}, sampled densely on each accepted step
  {
    auto& pb = rep.potential;
    pb.limit_value = dim * (dim + 2.0) / 4.0;
    const double tmax = sol.log_scale;
    double best_t = sol.ivp.t_begin();
    for (const auto& st : sol.ivp.traj.steps()) {
      for (int k = 0; k <= 16; ++k) {
        const double t = std::min(st.t0 + st.h * k / 16.0, tmax);
        const double fv = std::exp(2.0 * t) * std::pow(std::abs(st.eval(t)[0]), p - 1.0);
        if (fv > pb.sup_f) {
          pb.sup_f = fv;
          best_t = t;
        }
      }
    }
    // golden-section polish around the best sample
    double lo = best_t - 0.05, hi = std::min(best_t + 0.05, tmax);
    auto fl = [&](double t) {
      return std::exp(2.0 * t) * std::pow(std::abs(sol.ivp.state(t)[0]), p - 1.0);
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = fl(x1), f2 = fl(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 > f2) {
        hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = fl(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = fl(x2);
      }
    }
    const double tb = 0.5 * (lo + hi);
    if (fl(tb) > pb.sup_f) {
      pb.sup_f = fl(tb);
      best_t = tb;
    }
    pb.sup_pf = p * pb.sup_f;
    pb.argmax_r = std::exp(best_t - sol.log_scale);
  }
  return rep;
}

}  // namespace lemorse
