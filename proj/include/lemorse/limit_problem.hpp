#pragma once

// Critical-exponent limit objects: the bubble U, the potential
// V = p_S U^{p_S - 1} and the weighted eigenfunction eta*(r) = r (1 + r^2/a)^{-N/2},
// a = N(N-2), which satisfies -Delta eta - V eta = -(N-1) eta / |x|^2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "lemorse/error.hpp"
#include "lemorse/numerics/quadrature.hpp"
#include "lemorse/problem.hpp"

namespace lemorse {

class LimitProfile {
 public:
  explicit LimitProfile(int dim) : dim_(dim) {
    if (dim < 3) throw Error(ErrorKind::invalid_argument, "dimension must be >= 3");
    a_ = dim * (dim - 2.0);
    c_ = 0.5 * (dim - 2.0);
    d_ = 0.5 * dim;
  }

  int dim() const { return dim_; }
  double critical() const { return critical_exponent(dim_); }

  double U(double r) const { return std::pow(a_ / (a_ + r * r), c_); }
  double dU(double r) const {
    return -2.0 * c_ * r * std::pow(a_, c_) * std::pow(a_ + r * r, -c_ - 1.0);
  }
  double d2U(double r) const {
    const double w = a_ + r * r;
    return -2.0 * c_ * std::pow(a_, c_) *
           (std::pow(w, -c_ - 1.0) - 2.0 * (c_ + 1.0) * r * r * std::pow(w, -c_ - 2.0));
  }

  /// p_S U^{p_S-1} = p_S a^2 / (a + r^2)^2.
  double V(double r) const {
    const double w = a_ + r * r;
    return critical() * a_ * a_ / (w * w);
  }

  double eta(double r) const { return r * std::pow(1.0 + r * r / a_, -d_); }
  double deta(double r) const {
    const double w = a_ + r * r;
    return std::pow(a_, d_) * (std::pow(w, -d_) - 2.0 * d_ * r * r * std::pow(w, -d_ - 1.0));
  }
  double d2eta(double r) const {
    const double w = a_ + r * r;
    return std::pow(a_, d_) * (-6.0 * d_ * r * std::pow(w, -d_ - 1.0) +
                               4.0 * d_ * (d_ + 1.0) * r * r * r * std::pow(w, -d_ - 2.0));
  }

  /// max of r^2 V, N(N+2)/4, attained at r^2 = N(N-2).
  double potential_sup() const { return 0.25 * dim_ * (dim_ + 2.0); }
  double potential_argmax() const { return std::sqrt(a_); }

 private:
  int dim_;
  double a_, c_, d_;
};

/// Log-spaced radii covering [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t j = 0; j < count; ++j)
    g[j] = std::exp(a + (b - a) * static_cast<double>(j) / static_cast<double>(count - 1));
  return g;
}

/// sup |U'' + (N-1)/r U' + U^{p_S}| over the grid.
inline double bubble_residual(int dim, const std::vector<double>& r_grid) {
  const LimitProfile lp(dim);
  double worst = 0.0;
  for (double r : r_grid) {
    const double res = lp.d2U(r) + (dim - 1.0) / r * lp.dU(r) + std::pow(lp.U(r), lp.critical());
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

/// sup |c(eta'' + (N-1)/r eta' + V eta - (N-1) eta / r^2)| over the grid.
inline double eta_star_residual(int dim, const std::vector<double>& r_grid, double c = 1.0) {
  const LimitProfile lp(dim);
  double worst = 0.0;
  for (double r : r_grid) {
    const double res = c * lp.d2eta(r) + (dim - 1.0) / r * (c * lp.deta(r)) +
                       lp.V(r) * (c * lp.eta(r)) - (dim - 1.0) * (c * lp.eta(r)) / (r * r);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

/// A radial test function with its derivative. support = +inf for functions
/// on all of R^N; otherwise v vanishes beyond it.
struct RadialFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double support = std::numeric_limits<double>::infinity();
};

struct QuadratureOptions {
  /// Panels in t = ln r cover [ln r_lo, ln r_hi] (r_hi capped by the support).
  double r_lo = 1e-8;
  double r_hi = 1e8;
  double tol = 1e-13;
};

/// Integral over R^N of a radial integrand g(r), computed as
/// |S^{N-1}| * int g(e^t) e^{Nt} dt with power-law tails fitted at both ends.
inline numerics::LogIntegral radial_integral(int dim, const std::function<double(double)>& g,
                                             double support, const QuadratureOptions& q = {}) {
  const double t_lo = std::log(q.r_lo);
  const double t_hi = std::log(std::min(q.r_hi, support));
  auto h = [&](double t) { return g(std::exp(t)) * std::exp(dim * t); };
  // decay rates from the local logarithmic slope
  // an integrand that has underflowed at the end point decays faster than any power
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto slope = [&](double t, double dt, double vanished) {
    const double a = std::abs(h(t)), b = std::abs(h(t + dt));
    if (a == 0.0 && b == 0.0) return vanished;
    if (a == 0.0) return inf;
    if (b == 0.0) return -inf;
    return (std::log(b) - std::log(a)) / dt;
  };
  const double k_lo = slope(t_lo, 0.5, inf);
  const double k_hi = std::isfinite(support) ? inf : -slope(t_hi - 0.5, 0.5, -inf);
  if (!(k_lo > 0.0) || !(k_hi > 0.0))
    throw Error(ErrorKind::not_converged,
                "radial integral tail does not decay (slopes " + std::to_string(k_lo) + ", " +
                    std::to_string(k_hi) + ")");
  auto r = numerics::log_domain_integral(h, t_lo, t_hi, k_lo, std::isfinite(k_hi) ? k_hi : 1.0,
                                         q.tol);
  if (std::isfinite(support)) {
    // no upper tail for compactly supported integrands
    const double upper = h(t_hi);
    r.value -= upper;
    r.tail -= std::abs(upper);
  }
  const double w = sphere_area(dim);
  r.value *= w;
  r.error *= w;
  r.tail *= w;
  return r;
}

struct RayleighResult {
  double value = 0.0;
  double error = 0.0;
  double gradient = 0.0;
  double potential = 0.0;
  double weight = 0.0;
  double tail = 0.0;
};

/// (int |grad v|^2 - int V v^2) / int v^2 / |x|^2 over R^N.
inline RayleighResult rayleigh_quotient(int dim, const RadialFunction& v,
                                        const QuadratureOptions& q = {}) {
  const LimitProfile lp(dim);
  const auto g = radial_integral(
      dim, [&](double r) { const double d = v.derivative(r); return d * d; }, v.support, q);
  const auto p = radial_integral(
      dim, [&](double r) { const double x = v.value(r); return lp.V(r) * x * x; }, v.support, q);
  const auto w = radial_integral(
      dim, [&](double r) { const double x = v.value(r); return x * x / (r * r); }, v.support, q);
  RayleighResult out;
  out.gradient = g.value;
  out.potential = p.value;
  out.weight = w.value;
  out.value = (g.value - p.value) / w.value;
  out.tail = g.tail + p.tail + w.tail;
  out.error = (g.error + p.error) / std::abs(w.value) + std::abs(out.value) * w.error / std::abs(w.value);
  return out;
}

/// eta* as a RadialFunction.
inline RadialFunction eta_star_function(int dim) {
  auto lp = std::make_shared<LimitProfile>(dim);
  return {[lp](double r) { return lp->eta(r); }, [lp](double r) { return lp->deta(r); }};
}

/// U as a RadialFunction.
inline RadialFunction bubble_function(int dim) {
  auto lp = std::make_shared<LimitProfile>(dim);
  return {[lp](double r) { return lp->U(r); }, [lp](double r) { return lp->dU(r); }};
}

struct SobolevEnergy {
  double gradient = 0.0;
  double power = 0.0;
  double error = 0.0;
  double relative_gap = 0.0;
  /// S_N^{N/2} with S_N = N(N-2)/4 |S^N|^{2/N}.
  double closed_form = 0.0;
};

inline SobolevEnergy sobolev_energy(int dim, const QuadratureOptions& q = {}) {
  const LimitProfile lp(dim);
  const double two_star = 2.0 * dim / (dim - 2.0);
  const auto g = radial_integral(
      dim, [&](double r) { const double d = lp.dU(r); return d * d; },
      std::numeric_limits<double>::infinity(), q);
  const auto u = radial_integral(
      dim, [&](double r) { return std::pow(lp.U(r), two_star); },
      std::numeric_limits<double>::infinity(), q);
  SobolevEnergy e;
  e.gradient = g.value;
  e.power = u.value;
  e.error = g.error + u.error;
  e.relative_gap = std::abs(g.value - u.value) / std::max(g.value, u.value);
  const double sn_area = 2.0 * std::pow(std::numbers::pi, 0.5 * (dim + 1)) / std::tgamma(0.5 * (dim + 1));
  const double s = 0.25 * dim * (dim - 2.0) * std::pow(sn_area, 2.0 / dim);
  e.closed_form = std::pow(s, 0.5 * dim);
  return e;
}

struct HardyMargin {
  double margin = 0.0;
  double gradient_norm = 0.0;
  double weighted_norm = 0.0;
};

/// (2/(N-2)) ||grad v|| - ||v/|x|||, nonnegative by the Hardy inequality.
inline HardyMargin hardy_margin(int dim, const RadialFunction& v, const QuadratureOptions& q = {}) {
  const auto g = radial_integral(
      dim, [&](double r) { const double d = v.derivative(r); return d * d; }, v.support, q);
  const auto w = radial_integral(
      dim, [&](double r) { const double x = v.value(r); return x * x / (r * r); }, v.support, q);
  HardyMargin h;
  h.gradient_norm = std::sqrt(g.value);
  h.weighted_norm = std::sqrt(w.value);
  h.margin = 2.0 / (dim - 2.0) * h.gradient_norm - h.weighted_norm;
  return h;
}

/// r^{-(N-2)/2 + eps} (1 - r^2)^2 on r < 1, scaled to unit Dirichlet energy
/// (the margin is homogeneous of degree one).
inline RadialFunction hardy_family(int dim, double eps) {
  const double e = -0.5 * (dim - 2.0) + eps;
  RadialFunction f{[e](double r) { return r < 1.0 ? std::pow(r, e) * (1 - r * r) * (1 - r * r) : 0.0; },
                   [e](double r) {
                     if (r >= 1.0) return 0.0;
                     const double w = 1 - r * r;
                     return e * std::pow(r, e - 1.0) * w * w - 4.0 * std::pow(r, e + 1.0) * w;
                   },
                   1.0};
  QuadratureOptions q;
  q.r_lo = 1e-30;
  const auto g = radial_integral(
      dim, [&](double r) { const double d = f.derivative(r); return d * d; }, 1.0, q);
  const double s = 1.0 / std::sqrt(g.value);
  return {[f, s](double r) { return s * f.value(r); }, [f, s](double r) { return s * f.derivative(r); },
          1.0};
}

/// Maximizer and maximum of r^2 V(r) by golden-section search.
inline std::pair<double, double> potential_sup_numeric(int dim) {
  const LimitProfile lp(dim);
  auto f = [&](double t) { const double r = std::exp(t); return r * r * lp.V(r); };
  double lo = std::log(1e-2), hi = std::log(1e3);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 > f2) {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = f(x2);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {std::exp(t), f(t)};
}

struct LimitConstants {
  int dim = 3;
  double sobolev_energy = 0.0;
  double sobolev_closed_form = 0.0;
  double potential_sup = 0.0;
  double potential_argmax = 0.0;
  double potential_sup_numeric = 0.0;
  double potential_argmax_numeric = 0.0;
  double beta_star = 0.0;
  double rayleigh_eta_star = 0.0;
  double rayleigh_error = 0.0;
  double bubble_residual = 0.0;
  double eta_star_residual = 0.0;
};

inline LimitConstants limit_constants(int dim, const QuadratureOptions& q = {}) {
  LimitConstants c;
  c.dim = dim;
  const auto se = sobolev_energy(dim, q);
  c.sobolev_energy = se.gradient;
  c.sobolev_closed_form = se.closed_form;
  const LimitProfile lp(dim);
  c.potential_sup = lp.potential_sup();
  c.potential_argmax = lp.potential_argmax();
  const auto [rn, fn] = potential_sup_numeric(dim);
  c.potential_argmax_numeric = rn;
  c.potential_sup_numeric = fn;
  c.beta_star = -(dim - 1.0);
  const auto rq = rayleigh_quotient(dim, eta_star_function(dim), q);
  c.rayleigh_eta_star = rq.value;
  c.rayleigh_error = rq.error;
  const auto g = log_grid(1e-3, 1e3, 601);
  c.bubble_residual = bubble_residual(dim, g);
  c.eta_star_residual = eta_star_residual(dim, g);
  return c;
}

}  // namespace lemorse
