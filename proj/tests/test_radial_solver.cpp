#include <cmath>

#include <gtest/gtest.h>

#include "lemorse/limit_problem.hpp"
#include "lemorse/radial_solver.hpp"

using namespace lemorse;

namespace {

const RadialSolution& sol_3_2_49() {
  static const RadialSolution s = solve_m_nodal(ProblemSpec::make(3, 4.9, 2));
  return s;
}

}  // namespace

TEST(ProblemSpec, ConstantsAndValidation) {
  EXPECT_DOUBLE_EQ(critical_exponent(3), 5.0);
  EXPECT_DOUBLE_EQ(critical_exponent(4), 3.0);
  EXPECT_NEAR(sphere_area(3), 4.0 * M_PI, 1e-14);
  EXPECT_NEAR(ball_volume(3), 4.0 * M_PI / 3.0, 1e-14);
  EXPECT_EQ(ProblemSpec::make(3, 4.9, 3).morse_formula(), 9);
  EXPECT_EQ(ProblemSpec::make(4, 2.9, 2).morse_formula(), 6);
  EXPECT_THROW(ProblemSpec::make(2, 3.0, 1), Error);
  EXPECT_THROW(ProblemSpec::make(3, 5.0, 1), Error);
  EXPECT_THROW(ProblemSpec::make(3, 1.0, 1), Error);
  EXPECT_THROW(ProblemSpec::make(3, 3.0, 0), Error);
  EXPECT_THROW(IvpSpec::make(3, 0.5), Error);
}

TEST(Ivp, LinearCaseFirstZeroIsPi) {
  // p = 1: u = sin(r) / r
  const auto iv = integrate_ivp(IvpSpec::make(3, 1.0), 10.0, 1e-12, 1);
  ASSERT_EQ(iv.zeros_t.size(), 1u);
  EXPECT_NEAR(std::exp(iv.zeros_t[0]), M_PI, 1e-11);
  for (double r : {0.5, 1.7, 2.9}) EXPECT_NEAR(iv.u(r), std::sin(r) / r, 1e-10) << r;
}

TEST(Ivp, TaylorStartMatchesSeries) {
  const auto iv = integrate_ivp(IvpSpec::make(3, 3.0), 1.0, 1e-12, 0);
  // u = 1 + a r^2 + b r^4 + O(r^6)
  auto series = [&](double r) { return 1.0 + iv.taylor_a() * r * r + iv.taylor_b() * std::pow(r, 4); };
  EXPECT_EQ(iv.u(0.5 * iv.rho0), series(0.5 * iv.rho0));
  EXPECT_NEAR(iv.u(1e-3), series(1e-3), 1e-12);  // integrated, so within the ODE tolerance
  EXPECT_DOUBLE_EQ(iv.taylor_a(), -1.0 / 6.0);
  EXPECT_DOUBLE_EQ(iv.taylor_b(), 3.0 / 120.0);
}

TEST(Ivp, FrozenFirstZeroCubic) {
  // oracle run at tolerance 1e-12
  const auto iv = integrate_ivp(IvpSpec::make(3, 3.0), 100.0, 1e-10, 1);
  ASSERT_EQ(iv.zeros_t.size(), 1u);
  EXPECT_NEAR(std::exp(iv.zeros_t[0]), 6.896848619379, 6.9e-9);
}

TEST(Ivp, CriticalExponentFollowsBubble) {
  const auto iv = integrate_ivp(IvpSpec::make(3, 5.0), 1e4, 1e-11, 1);
  EXPECT_TRUE(iv.zeros_t.empty());
  const LimitProfile lp(3);
  for (double r : {1.0, 10.0, 100.0, 1e4}) EXPECT_NEAR(iv.u(r) / lp.U(r), 1.0, 1e-7) << r;
}

TEST(Solve, FrozenNodalDataTwoNodal) {
  const auto& s = sol_3_2_49();
  // oracle run at tolerance 1e-12
  EXPECT_NEAR(s.nodal.nodal_radii[0], 2.8228026857e-4, 1e-8 * 2.82e-4);
  EXPECT_NEAR(s.nodal.critical_radii[1], 5.963346210e-3, 1e-8 * 5.96e-3);
  EXPECT_NEAR(s.nodal.extrema[0], 924.38708339, 1e-8 * 924.0);
  EXPECT_NEAR(s.nodal.extrema[1], 8.6813858066, 1e-8 * 8.68);
}

TEST(Solve, NodalStructure) {
  for (int m : {1, 2, 3}) {
    const auto s = solve_m_nodal(ProblemSpec::make(3, 4.5, m));
    const auto& nd = s.nodal;
    ASSERT_EQ(nd.nodal_radii.size(), static_cast<std::size_t>(m));
    EXPECT_DOUBLE_EQ(nd.nodal_radii.back(), 1.0);
    EXPECT_EQ(nd.critical_radii[0], 0.0);
    EXPECT_TRUE(nd.extrema_decreasing);
    EXPECT_NEAR(s.u(0.0), nd.extrema[0], 1e-12 * nd.extrema[0]);
    for (int i = 0; i < m; ++i) {
      EXPECT_NEAR(s.u(nd.nodal_radii[i]), 0.0, 1e-9 * nd.extrema[0]);
      if (i > 0) {
        EXPECT_LT(nd.nodal_radii[i - 1], nd.critical_radii[i]);
        EXPECT_LT(nd.critical_radii[i], nd.nodal_radii[i]);
        EXPECT_NEAR(s.du(nd.critical_radii[i]), 0.0,
                    1e-7 * nd.extrema[i] / nd.critical_radii[i]);
        EXPECT_NEAR(std::abs(s.u(nd.critical_radii[i])), nd.extrema[i], 1e-9 * nd.extrema[i]);
      }
      // sign of region i is (-1)^i
      const double mid = i == 0 ? 0.0 : nd.critical_radii[i];
      EXPECT_EQ(s.u(mid) > 0, i % 2 == 0);
    }
  }
}

TEST(Solve, ProfileSamplesAreConsistent) {
  const auto& s = sol_3_2_49();
  const auto& pr = s.profile;
  ASSERT_EQ(pr.grid.size(), pr.values.size());
  ASSERT_EQ(pr.grid.size(), pr.derivatives.size());
  EXPECT_EQ(pr.grid.front(), 0.0);
  EXPECT_DOUBLE_EQ(pr.grid.back(), 1.0);
  for (std::size_t j = 1; j < pr.grid.size(); ++j) EXPECT_GT(pr.grid[j], pr.grid[j - 1]);
}

TEST(Solve, OdeResidualWithinTenTolerances) {
  for (double tol : {1e-9, 1e-10}) {
    SolveOptions so;
    so.ivp_tol = tol;
    for (int m : {1, 2, 3}) {
      const auto s = solve_m_nodal(ProblemSpec::make(3, 4.95, m), so);
      EXPECT_LE(max_profile_residual(s), 10.0) << "tol " << tol << " m " << m;
    }
  }
}

TEST(Solve, InsufficientDomainReported) {
  SolveOptions so;
  so.r_max = 1.5;
  so.max_extensions = 0;
  try {
    solve_m_nodal(ProblemSpec::make(3, 3.0, 1), so);
    FAIL() << "expected insufficient_domain";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_domain);
  }
}

TEST(Solve, RegionEnergyIdentity) {
  for (auto [N, p, m] : {std::tuple{3, 4.5, 3}, std::tuple{3, 4.99, 2}, std::tuple{4, 2.9, 2}}) {
    const auto s = solve_m_nodal(ProblemSpec::make(N, p, m));
    for (const auto& e : energy_per_region(s)) EXPECT_LT(e.relative_gap, 1e-6) << N << " " << p;
  }
}

TEST(Scaling, SubSolutionsRescale) {
  SolveOptions loose;
  loose.ivp_tol = 1e-10;
  SolveOptions tight;
  tight.ivp_tol = 1e-11;
  const auto s1 = solve_m_nodal(ProblemSpec::make(4, 2.8, 1), tight);
  const auto s2 = solve_m_nodal(ProblemSpec::make(4, 2.8, 2), loose);
  const auto s2t = solve_m_nodal(ProblemSpec::make(4, 2.8, 2), tight);
  const auto s3 = solve_m_nodal(ProblemSpec::make(4, 2.8, 3), loose);
  const auto a = check_scaling_relations(s2, s1);
  EXPECT_TRUE(a.pass) << a.max_residual;
  const auto b = check_scaling_relations(s3, s2t);
  EXPECT_TRUE(b.pass) << b.max_residual;
  EXPECT_GE(b.entries.size(), 5u);
  EXPECT_THROW(check_scaling_relations(s1, s2), Error);
}

TEST(Bounds, GammaSolvesDefiningEquation) {
  const double k = 4.0;  // N = 3
  const double g = gamma_of_alpha(3, 0.25);
  const double val = 1.0 / (k - 2.0) + g - (k - 1.0) / (k - 2.0) * std::pow(g, (k - 2.0) / (k - 1.0));
  EXPECT_NEAR(val, 0.25, 1e-11);
  EXPECT_THROW(gamma_of_alpha(3, 0.6), Error);
}

TEST(Bounds, PointwiseBoundsHold) {
  const auto s = solve_m_nodal(ProblemSpec::make(3, 4.95, 3));
  const auto rep = check_pointwise_bounds(s, 0.25);
  EXPECT_TRUE(rep.first_region.pass) << rep.first_region.margin;
  for (const auto& ab : rep.annular) {
    EXPECT_TRUE(ab.regime_reached) << ab.region;
    EXPECT_TRUE(ab.check.pass) << ab.region << " " << ab.check.margin;
  }
  EXPECT_TRUE(rep.derivative.holder_applicable);
  EXPECT_TRUE(rep.derivative.pass);
  EXPECT_GT(rep.potential.sup_pf, 3.75);
  EXPECT_LT(rep.potential.sup_pf, 3.75 * 1.1);
}
