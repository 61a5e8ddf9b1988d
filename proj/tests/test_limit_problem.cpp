#include <cmath>

#include <gtest/gtest.h>

#include "lemorse/limit_problem.hpp"

using namespace lemorse;

TEST(LimitProfile, ClosedForms) {
  for (int N : {3, 4, 5, 6}) {
    const LimitProfile lp(N);
    EXPECT_DOUBLE_EQ(lp.U(0.0), 1.0);
    EXPECT_DOUBLE_EQ(lp.potential_sup(), 0.25 * N * (N + 2.0));
    EXPECT_DOUBLE_EQ(lp.potential_argmax(), std::sqrt(N * (N - 2.0)));
    // V = p_S U^{p_S - 1}
    const double ps = critical_exponent(N);
    for (double r : {0.1, 1.0, 7.0}) EXPECT_NEAR(lp.V(r), ps * std::pow(lp.U(r), ps - 1.0), 1e-12);
    // derivatives against central differences
    for (double r : {0.3, 2.0, 9.0}) {
      const double d = 1e-5 * r;
      EXPECT_NEAR(lp.dU(r), (lp.U(r + d) - lp.U(r - d)) / (2 * d), 1e-7);
      EXPECT_NEAR(lp.deta(r), (lp.eta(r + d) - lp.eta(r - d)) / (2 * d), 1e-7);
    }
  }
}

TEST(LimitProfile, Residuals) {
  const auto g = log_grid(1e-3, 1e3, 601);
  ASSERT_EQ(g.size(), 601u);
  EXPECT_NEAR(g.front(), 1e-3, 1e-15);
  EXPECT_NEAR(g.back(), 1e3, 1e-9);
  for (int N : {3, 4, 5, 6}) {
    EXPECT_LT(bubble_residual(N, g), 1e-10) << N;
    EXPECT_LT(eta_star_residual(N, g), 1e-10) << N;
    EXPECT_LT(eta_star_residual(N, g, 3.5), 1e-10) << N;
  }
}

TEST(Rayleigh, EtaStarAttainsMinusNMinusOne) {
  for (int N : {3, 4, 5, 6}) {
    const auto rq = rayleigh_quotient(N, eta_star_function(N));
    EXPECT_NEAR(rq.value, -(N - 1.0), 1e-6) << N;
    EXPECT_LT(rq.error, 1e-6);
  }
}

TEST(Rayleigh, TestBasketStaysAboveMinimum) {
  for (int N : {3, 4, 5}) {
    std::vector<RadialFunction> basket{
        bubble_function(N),
        {[](double r) { return std::exp(-r * r); }, [](double r) { return -2 * r * std::exp(-r * r); }},
        {[](double r) { return r * std::exp(-r * r); },
         [](double r) { return (1 - 2 * r * r) * std::exp(-r * r); }},
        {[](double r) { return r / (1 + r * r * r); },
         [](double r) { return (1 - 2 * r * r * r) / std::pow(1 + r * r * r, 2); }},
    };
    for (std::size_t k = 0; k < basket.size(); ++k)
      EXPECT_GT(rayleigh_quotient(N, basket[k]).value, -(N - 1.0) + 1e-3) << N << " " << k;
  }
  EXPECT_NEAR(rayleigh_quotient(3, bubble_function(3)).value, -1.5, 1e-6);
}

TEST(Sobolev, EnergyMatchesClosedForm) {
  const auto e3 = sobolev_energy(3);
  EXPECT_NEAR(e3.gradient, 12.820992204969, 1e-8);
  EXPECT_NEAR(e3.gradient, e3.closed_form, 1e-9 * e3.closed_form);
  EXPECT_LT(e3.relative_gap, 1e-10);
  for (int N : {4, 5}) {
    const auto e = sobolev_energy(N);
    EXPECT_NEAR(e.gradient / e.closed_form, 1.0, 1e-9) << N;
    EXPECT_NEAR(e.power / e.gradient, 1.0, 1e-9) << N;
  }
}

TEST(Hardy, MarginPositiveAndTightensAlongFamily) {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.5, 0.1, 0.02, 0.005}) {
    const auto h = hardy_margin(3, hardy_family(3, eps));
    EXPECT_GT(h.margin, 0.0) << eps;
    EXPECT_LT(h.margin, prev) << eps;
    EXPECT_NEAR(h.gradient_norm, 1.0, 1e-8);
    prev = h.margin;
  }
  EXPECT_LT(prev, 0.05);
  EXPECT_GT(hardy_margin(4, eta_star_function(4)).margin, 0.0);
}

TEST(Potential, NumericSupremum) {
  for (int N : {3, 4, 5, 6}) {
    const auto [r, v] = potential_sup_numeric(N);
    const LimitProfile lp(N);
    EXPECT_NEAR(v, lp.potential_sup(), 1e-12);
    EXPECT_NEAR(r, lp.potential_argmax(), 1e-6);
  }
}

TEST(LimitConstants, Table) {
  const auto c = limit_constants(4);
  EXPECT_EQ(c.dim, 4);
  EXPECT_DOUBLE_EQ(c.beta_star, -3.0);
  EXPECT_NEAR(c.rayleigh_eta_star, -3.0, 1e-6);
  EXPECT_NEAR(c.sobolev_energy, 105.27578, 1e-4);
  EXPECT_NEAR(c.potential_sup_numeric, 6.0, 1e-12);
  EXPECT_LT(c.eta_star_residual, 1e-10);
}

TEST(Quadrature, NonDecayingIntegrandReported) {
  RadialFunction flat{[](double) { return 1.0; }, [](double) { return 0.0; }};
  EXPECT_THROW(rayleigh_quotient(3, flat), Error);
}
