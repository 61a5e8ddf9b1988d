#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lemorse/numerics/dopri5.hpp"
#include "lemorse/numerics/quadrature.hpp"
#include "lemorse/numerics/roots.hpp"
#include "lemorse/numerics/tridiagonal.hpp"
#include "lemorse/oracle.hpp"

using namespace lemorse;
using namespace lemorse::numerics;

namespace {

auto no_observer = [](const DenseStep<2>&) { return false; };

SymTridiagonal laplacian(std::size_t n, double h) {
  SymTridiagonal t;
  t.diag.assign(n, 2.0 / (h * h));
  t.off.assign(n - 1, -1.0 / (h * h));
  return t;
}

}  // namespace

TEST(Dopri5, HarmonicOscillatorEndpointAndDenseOutput) {
  auto rhs = [](double, const State<2>& y) { return State<2>{y[1], -y[0]}; };
  Dopri5Options o;
  o.rtol = 1e-11;
  auto res = dopri5<2>(rhs, 0.0, State<2>{0.0, 1.0}, 10.0, o, no_observer);
  const auto& tr = res.trajectory;
  EXPECT_NEAR(tr.eval(10.0)[0], std::sin(10.0), 1e-9);
  for (double t : {0.3, 2.7, 5.55, 9.1}) {
    EXPECT_NEAR(tr.eval(t)[0], std::sin(t), 1e-9) << t;
    EXPECT_NEAR(tr.derivative(t)[0], std::cos(t), 1e-8) << t;
  }
}

TEST(Dopri5, ObserverStopsIntegration) {
  auto rhs = [](double, const State<2>& y) { return State<2>{y[1], -y[0]}; };
  Dopri5Options o;
  auto res = dopri5<2>(rhs, 0.0, State<2>{0.0, 1.0}, 100.0, o,
                       [](const DenseStep<2>& st) { return st.t1() > 4.0; });
  EXPECT_EQ(res.reason, StopReason::observer);
  EXPECT_LT(res.trajectory.t_end(), 100.0);
}

TEST(Dopri5, RejectsBadArguments) {
  auto rhs = [](double, const State<2>& y) { return y; };
  Dopri5Options o;
  EXPECT_THROW(dopri5<2>(rhs, 1.0, State<2>{1, 0}, 0.0, o, no_observer), Error);
  o.rtol = 0.0;
  EXPECT_THROW(dopri5<2>(rhs, 0.0, State<2>{1, 0}, 1.0, o, no_observer), Error);
}

TEST(Dopri5, ErrorScalesWithTolerance) {
  auto rhs = [](double, const State<2>& y) { return State<2>{y[1], -y[0]}; };
  double prev = 1.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    Dopri5Options o;
    o.rtol = tol;
    auto res = dopri5<2>(rhs, 0.0, State<2>{0.0, 1.0}, 20.0, o, no_observer);
    const double err = std::abs(res.trajectory.eval(20.0)[0] - std::sin(20.0));
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Roots, BracketedRootAndFailures) {
  auto f = [](double x) { return std::cos(x) - x; };
  EXPECT_NEAR(bracketed_root(f, 0.0, 1.0, 1e-14), 0.7390851332151607, 1e-13);
  EXPECT_THROW(bracketed_root(f, 1.0, 2.0, 1e-14), Error);
  auto g = [](double x) { return 1.0 - x * x; };
  EXPECT_NEAR(bisect_decreasing(g, 0.5, 0.0, 1.0, 1e-14), std::sqrt(0.5), 1e-12);
}

TEST(Quadrature, IntegrateAlongTrajectory) {
  auto rhs = [](double, const State<2>& y) { return State<2>{y[1], -y[0]}; };
  Dopri5Options o;
  o.rtol = 1e-12;
  auto res = dopri5<2>(rhs, 0.0, State<2>{0.0, 1.0}, 3.0, o, no_observer);
  const double v = integrate_along(res.trajectory, [](double, const auto& y) { return y[0]; }, 0.5, 2.5);
  EXPECT_NEAR(v, std::cos(0.5) - std::cos(2.5), 1e-10);
  EXPECT_EQ(integrate_along(res.trajectory, [](double, const auto& y) { return y[0]; }, 2.0, 1.0), 0.0);
}

TEST(Quadrature, LogDomainWithTails) {
  // int_0^inf r^3 / (1 + r^2)^3 dr = 1/4, in t = ln r
  auto h = [](double t) {
    const double r = std::exp(t);
    return std::pow(r, 4) / std::pow(1.0 + r * r, 3);
  };
  auto li = log_domain_integral(h, std::log(1e-6), std::log(1e6), 4.0, 2.0);
  EXPECT_NEAR(li.value, 0.25, 1e-12);
  EXPECT_LT(li.error, 1e-10);
}

TEST(Tridiagonal, DirichletLaplacianEigenvalues) {
  const std::size_t n = 199;
  const double h = 1.0 / (n + 1);
  const auto t = laplacian(n, h);
  const auto ev = lowest_eigenvalues(t, 5, 1e-12);
  for (std::size_t k = 0; k < 5; ++k) {
    const double exact = 4.0 / (h * h) * std::pow(std::sin((k + 1) * M_PI * h / 2.0), 2);
    EXPECT_NEAR(ev[k], exact, 1e-9 * exact);
  }
  EXPECT_EQ(count_below(t, 0.0), 0u);
  EXPECT_EQ(count_below(t, ev[2] + 1e-6), 3u);
}

TEST(Tridiagonal, InverseIterationGivesNodalEigenvectors) {
  const auto t = laplacian(300, 1.0 / 301);
  const auto ev = lowest_eigenvalues(t, 4, 1e-12);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto v = inverse_iteration(t, ev[k]);
    EXPECT_EQ(sign_changes(v), static_cast<int>(k));
    EXPECT_GT(v.front(), 0.0);
  }
}

TEST(Tridiagonal, BisectionRejectsBadRequests) {
  const auto t = laplacian(10, 0.1);
  EXPECT_THROW(lowest_eigenvalues(t, 0, 1e-12), Error);
  EXPECT_THROW(lowest_eigenvalues(t, 11, 1e-12), Error);
  EXPECT_THROW(bisect_eigenvalue(t, 0, 1e-12, {1e6, 2e6}), Error);
}

TEST(Tridiagonal, SignChangesIgnoresNoiseFloor) {
  std::vector<double> v{1.0, 0.5, 1e-15, -1e-15, 0.3, -0.2};
  EXPECT_EQ(sign_changes(v), 1);
}

// Random pencils, with and without a diagonal mass, against the dense
// extended-precision QL oracle.
TEST(Tridiagonal, RandomFormsMatchDenseOracle) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(20, 400);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    SymTridiagonal t;
    const int n = size(rng);
    const double scale = std::pow(10.0, 3.0 * (u(rng) + 1.0));
    for (int i = 0; i < n; ++i) t.diag.push_back(scale * (2.0 + u(rng)));
    for (int i = 0; i + 1 < n; ++i) t.off.push_back(scale * u(rng));
    if (trial % 2 == 1)
      for (int i = 0; i < n; ++i) t.mass.push_back(std::exp(2.0 * u(rng)));
    const auto c = oracle_compare(t, std::min<std::size_t>(10, t.size()), 1e-10, 1e-13);
    EXPECT_TRUE(c.pass) << "trial " << trial << " diff " << c.max_difference;
    const auto dense = dense_eigenvalues(t);
    const double mid = 0.5 * (dense[n / 2] + dense[n / 2 - 1]);
    EXPECT_EQ(count_below(t, mid), static_cast<std::size_t>(n / 2));
    ++checked;
  }
  EXPECT_GE(checked, 50);
}
