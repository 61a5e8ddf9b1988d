#pragma once

// Radial eigenvalues of the linearized operator on annuli 1/n < r < 1.
//
// Both problems are posed in s = ln r on [-ln n, 0]:
//   weighted: -psi'' + q psi = beta~ psi, q = ((N-2)/2)^2 - p f(e^s),
//             with phi = e^{-(N-2)s/2} psi;
//   plain:    -(e^{(N-2)s} v')' - p f e^{(N-2)s} v = beta e^{Ns} v,
// where f(r) = r^2 |u(r)|^{p-1}. Inner radii as small as e^{-65} occur, so n
// is carried as ln n.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "lemorse/error.hpp"
#include "lemorse/numerics/tridiagonal.hpp"
#include "lemorse/problem.hpp"
#include "lemorse/radial_solver.hpp"

namespace lemorse {

enum class AnnulusMode { explicit_n, paper_rule, stabilized };

inline const char* to_string(AnnulusMode m) {
  switch (m) {
    case AnnulusMode::explicit_n: return "explicit";
    case AnnulusMode::paper_rule: return "paper_rule";
    case AnnulusMode::stabilized: return "stabilized";
  }
  return "unknown";
}

struct AnnulusSpec {
  /// ln n; the annulus is e^{-log_n} < r < 1.
  double log_n = std::log(2.0);
  AnnulusMode mode = AnnulusMode::explicit_n;

  static AnnulusSpec from_n(double n, AnnulusMode mode = AnnulusMode::explicit_n) {
    if (!(n >= 2.0)) throw Error(ErrorKind::invalid_argument, "annulus needs n >= 2");
    return {std::log(n), mode};
  }

  /// n itself; infinite when it exceeds the double range.
  double n() const { return std::exp(log_n); }
  double inner_radius() const { return std::exp(-log_n); }
};

/// -psi'' + q psi on a uniform grid of `intervals` cells over [-ln n, 0],
/// Dirichlet at both ends. q is stored at all grid nodes.
struct SchroedingerForm {
  int dim = 3;
  double log_n = 0.0;
  std::vector<double> s_grid;
  std::vector<double> potential_q;

  std::size_t intervals() const { return s_grid.size() - 1; }
  double h() const { return log_n / static_cast<double>(intervals()); }
  double constant_part() const { return 0.25 * (dim - 2.0) * (dim - 2.0); }

  /// q = ((N-2)/2)^2 - pf(s) on `intervals` cells.
  static SchroedingerForm from_potential(int dim, double log_n, std::size_t intervals,
                                         const std::function<double(double)>& pf) {
    if (intervals < 64) throw Error(ErrorKind::invalid_argument, "grid size must be >= 64");
    if (!(log_n > 0.0)) throw Error(ErrorKind::invalid_argument, "ln n must be > 0");
    SchroedingerForm f;
    f.dim = dim;
    f.log_n = log_n;
    f.s_grid.resize(intervals + 1);
    f.potential_q.resize(intervals + 1);
    const double h = log_n / static_cast<double>(intervals);
    for (std::size_t j = 0; j <= intervals; ++j) {
      const double s = (j == intervals) ? 0.0 : -log_n + h * static_cast<double>(j);
      f.s_grid[j] = s;
      f.potential_q[j] = f.constant_part() - pf(s);
    }
    return f;
  }

  /// Second-order central differences on the interior nodes.
  numerics::SymTridiagonal matrix() const {
    const std::size_t n = intervals() - 1;
    const double ih2 = 1.0 / (h() * h());
    numerics::SymTridiagonal t;
    t.diag.resize(n);
    t.off.assign(n - 1, -ih2);
    for (std::size_t j = 0; j < n; ++j) t.diag[j] = 2.0 * ih2 + potential_q[j + 1];
    return t;
  }
};

/// The weighted problem of a solved instance in Schroedinger form.
inline SchroedingerForm liouville_transform(const RadialSolution& sol, const AnnulusSpec& annulus,
                                            std::size_t grid_size) {
  const double p = sol.spec.exponent;
  return SchroedingerForm::from_potential(sol.spec.dim, annulus.log_n, grid_size,
                                          [&](double s) { return p * sol.f_log(s); });
}

/// Plain problem as a generalized tridiagonal pencil on the interior nodes
/// (flux differences with midpoint coefficients, lumped mass e^{Ns}).
inline numerics::SymTridiagonal plain_pencil(const RadialSolution& sol, const AnnulusSpec& annulus,
                                             std::size_t grid_size) {
  if (grid_size < 64) throw Error(ErrorKind::invalid_argument, "grid size must be >= 64");
  const int dim = sol.spec.dim;
  const double p = sol.spec.exponent;
  const double L = annulus.log_n;
  const double h = L / static_cast<double>(grid_size);
  const std::size_t n = grid_size - 1;
  numerics::SymTridiagonal t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  t.mass.resize(n);
  auto coef = [&](double s) { return std::exp((dim - 2.0) * s); };
  for (std::size_t j = 0; j < n; ++j) {
    const double s = -L + h * static_cast<double>(j + 1);
    const double cl = coef(s - 0.5 * h), cr = coef(s + 0.5 * h);
    t.diag[j] = (cl + cr) / (h * h) - p * sol.f_log(s) * coef(s);
    if (j + 1 < n) t.off[j] = -cr / (h * h);
    t.mass[j] = std::exp(dim * s);
  }
  return t;
}

struct EigenResult {
  std::vector<double> values;
  /// Eigenvectors on the interior nodes (empty unless requested).
  std::vector<std::vector<double>> vectors;
};

/// Lowest `count` eigenvalues of the form by Sturm bisection, with
/// eigenvectors by inverse iteration when requested.
inline EigenResult eigen_bisect(const SchroedingerForm& form, std::size_t count, double tol = 1e-12,
                                bool vectors = true) {
  const auto t = form.matrix();
  EigenResult r;
  r.values = numerics::lowest_eigenvalues(t, count, tol);
  if (vectors)
    for (double ev : r.values) r.vectors.push_back(numerics::inverse_iteration(t, ev));
  return r;
}

/// Number of negative Dirichlet eigenvalues of -psi'' + q psi, from the
/// Pruefer angle of the beta = 0 solution: theta' = cos^2 theta - q sin^2 theta.
/// q is interpolated linearly between grid nodes; RK4 substeps.
inline int negative_count_oscillation(const SchroedingerForm& form, int substeps = 4) {
  const auto& q = form.potential_q;
  const double h = form.h() / substeps;
  auto rhs = [](double th, double qq) {
    const double c = std::cos(th), s = std::sin(th);
    return c * c - qq * s * s;
  };
  double theta = 0.0;
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    for (int k = 0; k < substeps; ++k) {
      const double w0 = static_cast<double>(k) / substeps;
      const double w1 = static_cast<double>(k + 1) / substeps;
      const double q0 = q[j] + w0 * (q[j + 1] - q[j]);
      const double q1 = q[j] + w1 * (q[j + 1] - q[j]);
      const double qm = 0.5 * (q0 + q1);
      const double k1 = rhs(theta, q0);
      const double k2 = rhs(theta + 0.5 * h * k1, qm);
      const double k3 = rhs(theta + 0.5 * h * k2, qm);
      const double k4 = rhs(theta + h * k3, q1);
      theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  if (theta <= 0.0) return 0;
  return static_cast<int>(std::ceil(theta / std::numbers::pi)) - 1;
}

struct SpectrumOptions {
  /// Number of eigenvalues K; 0 means m + 3. Raised automatically until the
  /// last weighted eigenvalue is nonnegative.
  std::size_t count = 0;
  /// Grid intervals G; Richardson uses G and 2G.
  std::size_t grid_size = 4096;
  double eig_tol = 1e-12;
  /// Minimum sign margin; the effective margin also scales with the
  /// Richardson error estimate.
  double margin = 0.0;
  bool eigenfunctions = true;
};

struct RadialSpectrum {
  int dim = 3;
  int nodal_count = 1;
  double log_n = 0.0;
  std::size_t grid_size = 0;
  double eig_tol = 0.0;

  /// Richardson values (4 b_{2G} - b_G) / 3 and both raw sets.
  std::vector<double> weighted, weighted_coarse, weighted_fine, weighted_error;
  std::vector<double> plain, plain_coarse, plain_fine, plain_error;
  std::vector<bool> weighted_indeterminate, plain_indeterminate;
  /// Near -(N-1) (relevant for index m).
  std::vector<bool> weighted_near_limit;

  /// Radii of the 2G grid interior nodes and weighted eigenfunctions phi_i,
  /// normalized by the integral of phi^2 / |y|^2 over the annulus.
  std::vector<double> radii;
  std::vector<std::vector<double>> eigenfunctions;
  std::vector<int> eigenfunction_sign_changes;

  int negative_count_weighted = 0;
  int negative_count_plain = 0;
  /// Sturm counts at 0 on the 2G grid, and the Pruefer count on the same form.
  int sturm_count_weighted = 0;
  int sturm_count_plain = 0;
  int oscillation_count = 0;

  /// beta~_m + (N-1) from the Green identity with eta = u' (Richardson over
  /// G, 2G), its error estimate, and agreement with the eigenvalue itself.
  double limit_gap = 0.0;
  double limit_gap_error = 0.0;
  bool limit_gap_consistent = true;

  /// Value and error of beta~_i + (N-1) (0-based i): the Green-identity value
  /// for i = m - 1, the eigenvalue otherwise.
  std::pair<double, double> gap_to_limit(std::size_t i) const {
    if (i + 1 == static_cast<std::size_t>(nodal_count)) return {limit_gap, limit_gap_error};
    return {weighted[i] + (dim - 1.0), weighted_error[i]};
  }

  double n() const { return std::exp(log_n); }

  bool any_indeterminate(std::size_t upto) const {
    for (std::size_t i = 0; i < std::min(upto, weighted_indeterminate.size()); ++i)
      if (weighted_indeterminate[i] || plain_indeterminate[i]) return true;
    return false;
  }
};

namespace detail {
inline void richardson(const std::vector<double>& c, const std::vector<double>& f, double tol,
                       std::vector<double>& val, std::vector<double>& err) {
  val.resize(c.size());
  err.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    val[i] = (4.0 * f[i] - c[i]) / 3.0;
    err[i] = std::abs(f[i] - c[i]) / 3.0 + tol +
             8.0 * std::numeric_limits<double>::epsilon() * std::abs(val[i]);
  }
}
}  // namespace detail

/// beta~ + (N-1) for a Dirichlet eigenpair (beta~, psi) of the form, from
///   (beta~ + N-1) int r^{N-3} phi eta dr = -[r^{N-1} phi' eta]_{1/n}^{1},
/// which holds because eta = u' solves the weighted equation with eigenvalue
/// -(N-1) without satisfying the boundary conditions. For the eigenfunction
/// that shares the nodal pattern of eta the denominator is far from zero and
/// the gap is obtained to relative accuracy even when it is far below the
/// eigenvalue's own discretization error.
inline double eigenrelation_gap(const RadialSolution& sol, const SchroedingerForm& form,
                                double beta, const std::vector<double>& psi) {
  const double h = form.h();
  const double c = 0.5 * (form.dim - 2.0);
  const std::size_t J = form.intervals();
  // psi'' = (q - beta) psi vanishes at a Dirichlet end, which makes the
  // one-sided difference fourth-order accurate after this correction
  const double qa = form.potential_q.front(), qb = form.potential_q.back();
  const double dpa = psi.front() / (h * (1.0 + h * h * (qa - beta) / 6.0));
  const double dpb = -psi.back() / (h * (1.0 + h * h * (qb - beta) / 6.0));
  const double sa = form.s_grid.front();
  const double num =
      -(dpb * sol.du(1.0) - std::exp(c * sa) * dpa * sol.du(std::exp(sa)));
  double den = 0.0;
  for (std::size_t j = 1; j < J; ++j) {
    const double sj = form.s_grid[j];
    den += h * std::exp(c * sj) * psi[j - 1] * sol.du(std::exp(sj));
  }
  return num / den;
}

/// Weighted and plain radial spectra on the annulus.
inline RadialSpectrum radial_spectrum(const RadialSolution& sol, const AnnulusSpec& annulus,
                                      const SpectrumOptions& opt = {}) {
  const int m = sol.spec.nodal_count;
  const int dim = sol.spec.dim;
  std::size_t K = opt.count ? opt.count : static_cast<std::size_t>(m + 3);
  const std::size_t G = opt.grid_size;
  RadialSpectrum out;
  out.dim = dim;
  out.nodal_count = m;
  out.log_n = annulus.log_n;
  out.grid_size = G;
  out.eig_tol = opt.eig_tol;

  const auto fc = liouville_transform(sol, annulus, G);
  const auto ff = liouville_transform(sol, annulus, 2 * G);
  const auto tc = fc.matrix(), tf = ff.matrix();
  const auto pc = plain_pencil(sol, annulus, G), pf = plain_pencil(sol, annulus, 2 * G);

  for (;;) {
    K = std::min(K, tc.size());
    out.weighted_coarse = numerics::lowest_eigenvalues(tc, K, opt.eig_tol);
    out.weighted_fine = numerics::lowest_eigenvalues(tf, K, opt.eig_tol);
    if (out.weighted_fine.back() >= 0.0 || K == tc.size()) break;
    K *= 2;
  }
  out.plain_coarse = numerics::lowest_eigenvalues(pc, K, opt.eig_tol);
  out.plain_fine = numerics::lowest_eigenvalues(pf, K, opt.eig_tol);
  detail::richardson(out.weighted_coarse, out.weighted_fine, opt.eig_tol, out.weighted,
                     out.weighted_error);
  detail::richardson(out.plain_coarse, out.plain_fine, opt.eig_tol, out.plain, out.plain_error);

  for (std::size_t i = 0; i < K; ++i) {
    const double mw = std::max(opt.margin, 5.0 * out.weighted_error[i]);
    const double mp = std::max(opt.margin, 5.0 * out.plain_error[i]);
    out.weighted_indeterminate.push_back(std::abs(out.weighted[i]) < mw);
    out.plain_indeterminate.push_back(std::abs(out.plain[i]) < mp);
    out.weighted_near_limit.push_back(std::abs(out.weighted[i] + (dim - 1.0)) < mw);
    if (out.weighted[i] < 0.0) ++out.negative_count_weighted;
    if (out.plain[i] < 0.0) ++out.negative_count_plain;
  }
  out.sturm_count_weighted = static_cast<int>(numerics::count_below(tf, 0.0));
  out.sturm_count_plain = static_cast<int>(numerics::count_below(pf, 0.0));
  out.oscillation_count = negative_count_oscillation(ff);

  {
    const std::size_t im = static_cast<std::size_t>(m - 1);
    const double gc = eigenrelation_gap(sol, fc, out.weighted_coarse[im],
                                        numerics::inverse_iteration(tc, out.weighted_coarse[im]));
    const double gf = eigenrelation_gap(sol, ff, out.weighted_fine[im],
                                        numerics::inverse_iteration(tf, out.weighted_fine[im]));
    out.limit_gap = (4.0 * gf - gc) / 3.0;
    out.limit_gap_error = std::abs(gf - gc) / 3.0 + 1e-10 * std::abs(out.limit_gap) +
                          std::numeric_limits<double>::min();
    const double direct = out.weighted[im] + (dim - 1.0);
    out.limit_gap_consistent =
        std::abs(direct - out.limit_gap) <= 5.0 * out.weighted_error[im] + 5.0 * out.limit_gap_error;
    out.weighted_near_limit[im] =
        std::abs(out.limit_gap) < std::max(opt.margin, 5.0 * out.limit_gap_error);
  }

  if (opt.eigenfunctions) {
    const double h = ff.h();
    const double w = sphere_area(dim);
    const double c = 0.5 * (dim - 2.0);
    for (std::size_t j = 1; j + 1 < ff.s_grid.size(); ++j) out.radii.push_back(std::exp(ff.s_grid[j]));
    for (std::size_t i = 0; i < K; ++i) {
      auto psi = numerics::inverse_iteration(tf, out.weighted_fine[i]);
      out.eigenfunction_sign_changes.push_back(numerics::sign_changes(psi));
      // h * sum psi^2 = 1 / |S^{N-1}|
      const double scale = 1.0 / std::sqrt(h * w);
      for (std::size_t j = 0; j < psi.size(); ++j)
        psi[j] *= scale * std::exp(-c * ff.s_grid[j + 1]);
      out.eigenfunctions.push_back(std::move(psi));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ConvergenceRow {
  double log_n = 0.0;
  std::vector<double> plain, plain_error, weighted, weighted_error;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// plain_monotone[i]: beta_i nonincreasing in n within twice the combined
  /// discretization error, for each consecutive pair of rows.
  std::vector<bool> plain_monotone;
  std::vector<bool> weighted_monotone;
  /// Negative counts per row (plain, weighted).
  std::vector<std::pair<int, int>> counts;
};

inline ConvergenceTable convergence_in_n(const RadialSolution& sol, const std::vector<double>& n_list,
                                         std::size_t K, const SpectrumOptions& base = {}) {
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (!(n_list[i] > n_list[i - 1]))
      throw Error(ErrorKind::invalid_argument, "n list must be increasing");
  ConvergenceTable tab;
  SpectrumOptions o = base;
  o.count = K;
  o.eigenfunctions = false;
  for (double n : n_list) {
    const auto sp = radial_spectrum(sol, AnnulusSpec::from_n(n), o);
    ConvergenceRow row;
    row.log_n = sp.log_n;
    row.plain.assign(sp.plain.begin(), sp.plain.begin() + K);
    row.plain_error.assign(sp.plain_error.begin(), sp.plain_error.begin() + K);
    row.weighted.assign(sp.weighted.begin(), sp.weighted.begin() + K);
    row.weighted_error.assign(sp.weighted_error.begin(), sp.weighted_error.begin() + K);
    tab.counts.emplace_back(sp.negative_count_plain, sp.negative_count_weighted);
    tab.rows.push_back(std::move(row));
  }
  tab.plain_monotone.assign(K, true);
  tab.weighted_monotone.assign(K, true);
  for (std::size_t r = 1; r < tab.rows.size(); ++r)
    for (std::size_t i = 0; i < K; ++i) {
      const auto& a = tab.rows[r - 1];
      const auto& b = tab.rows[r];
      if (b.plain[i] > a.plain[i] + 2.0 * (a.plain_error[i] + b.plain_error[i]))
        tab.plain_monotone[i] = false;
      if (b.weighted[i] > a.weighted[i] + 2.0 * (a.weighted_error[i] + b.weighted_error[i]))
        tab.weighted_monotone[i] = false;
    }
  return tab;
}

/// Cell-wise residual of the identity
///   -(r^{N-1} eta')' - p|u|^{p-1} r^{N-1} eta + (N-1) r^{N-3} eta = 0,
/// eta = u', in flux form over `cells` uniform cells in ln r on the annulus.
/// Each cell residual is divided by the cell's integral of r^{N-3} and by
/// 1 + max|eta|; the sup over cells is returned.
inline double derivative_eigenrelation_residual(const RadialSolution& sol,
                                                const AnnulusSpec& annulus,
                                                std::size_t cells = 4096) {
  using boost::math::quadrature::gauss;
  const double r1 = sol.nodal.nodal_radii.front();
  if (!(annulus.inner_radius() < r1) && sol.spec.nodal_count > 1)
    throw Error(ErrorKind::invalid_argument, "inner radius 1/n must lie below r_1");
  const int dim = sol.spec.dim;
  const double p = sol.spec.exponent;
  const double L = annulus.log_n;
  const double h = L / static_cast<double>(cells);
  auto eta = [&](double r) { return sol.du(r); };
  auto deta = [&](double r) {
    const double u = sol.u(r);
    return -(dim - 1.0) / r * sol.du(r) - std::pow(std::abs(u), p - 1.0) * u;
  };
  auto flux = [&](double r) { return std::pow(r, dim - 1.0) * deta(r); };
  double eta_max = 0.0;
  for (std::size_t j = 0; j <= cells; ++j)
    eta_max = std::max(eta_max, std::abs(eta(std::exp(-L + h * static_cast<double>(j)))));
  double worst = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    const double a = -L + h * static_cast<double>(j);
    const double b = (j + 1 == cells) ? 0.0 : a + h;
    const double vol = gauss<double, 10>::integrate(
        [&](double s) { return std::exp((dim - 2.0) * s); }, a, b);
    const double body = gauss<double, 10>::integrate(
        [&](double s) {
          const double r = std::exp(s);
          const double u = sol.u(r);
          const double e = eta(r);
          return (-p * std::pow(std::abs(u), p - 1.0) * std::pow(r, dim) * e +
                  (dim - 1.0) * std::pow(r, dim - 2.0) * e);
        },
        a, b);
    const double res = -(flux(std::exp(b)) - flux(std::exp(a))) + body;
    worst = std::max(worst, std::abs(res) / (vol * (1.0 + eta_max)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

struct ChooseNOptions {
  SpectrumOptions spectrum;
  /// Maximum number of doublings in stabilized mode.
  int max_doublings = 12;
};

struct NChoice {
  AnnulusSpec annulus;
  /// (ln n, plain count, weighted count) for every n examined.
  std::vector<std::tuple<double, int, int>> trajectory;
};

/// ln of max(floor(1/r_1) + 1, floor(M_0^{p-1}) + 1).
inline double paper_rule_log_n(const RadialSolution& sol) {
  const double r1 = sol.nodal.nodal_radii.front();
  const double n2 = std::floor(1.0 / r1) + 1.0;
  const double lm = (sol.spec.exponent - 1.0) * std::log(sol.nodal.extrema.front());
  // beyond 2^52 the floor and the +1 are below double resolution
  const double n3 = lm < 36.0 ? std::log(std::floor(std::exp(lm)) + 1.0) : lm;
  return std::max(std::log(n2), n3);
}

inline NChoice choose_n(const RadialSolution& sol, AnnulusMode mode, const ChooseNOptions& opt = {}) {
  NChoice out;
  double ln = std::max(paper_rule_log_n(sol), std::log(2.0));
  if (mode != AnnulusMode::stabilized) {
    out.annulus = {ln, AnnulusMode::paper_rule};
    return out;
  }
  SpectrumOptions so = opt.spectrum;
  so.eigenfunctions = false;
  auto counts = [&](double l) {
    const auto sp = radial_spectrum(sol, AnnulusSpec{l, AnnulusMode::stabilized}, so);
    out.trajectory.emplace_back(l, sp.negative_count_plain, sp.negative_count_weighted);
    return std::pair{sp.negative_count_plain, sp.negative_count_weighted};
  };
  auto prev2 = counts(ln);
  auto prev1 = counts(ln + std::log(2.0));
  for (int d = 2; d <= opt.max_doublings; ++d) {
    const double l = ln + d * std::log(2.0);
    const auto cur = counts(l);
    if (cur == prev1 && prev1 == prev2) {
      out.annulus = {l - 2.0 * std::log(2.0), AnnulusMode::stabilized};
      return out;
    }
    prev2 = prev1;
    prev1 = cur;
  }
  std::string traj;
  for (auto& [l, a, b] : out.trajectory)
    traj += " (ln n=" + std::to_string(l) + ": " + std::to_string(a) + "," + std::to_string(b) + ")";
  throw Error(ErrorKind::not_converged, "negative counts did not stabilize:" + traj);
}

}  // namespace lemorse
