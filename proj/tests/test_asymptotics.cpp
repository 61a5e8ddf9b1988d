#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lemorse/asymptotics.hpp"

using namespace lemorse;

namespace {

std::vector<RadialSolution> sweep_solutions(int N, int m) {
  std::vector<RadialSolution> v;
  const double ps = critical_exponent(N);
  for (double e : {0.5, 0.2, 0.1, 0.05, 0.02, 0.01}) v.push_back(solve_m_nodal(ProblemSpec::make(N, ps - e, m)));
  return v;
}

std::vector<const RadialSolution*> ptrs(const std::vector<RadialSolution>& v) {
  std::vector<const RadialSolution*> out;
  for (const auto& s : v) out.push_back(&s);
  return out;
}

}  // namespace

TEST(Rescale, NormalizationAndZeros) {
  const auto s = solve_m_nodal(ProblemSpec::make(3, 4.9, 2));
  const auto z0 = rescale_region(s, 0);
  EXPECT_EQ(z0.x_grid.front(), 0.0);
  EXPECT_NEAR(z0.z_values.front(), 1.0, 1e-12);
  for (double v : z0.z_values) EXPECT_LE(std::abs(v), 1.0 + 1e-12);

  const auto z1 = rescale_region(s, 1, 50.0, 20001);
  EXPECT_NEAR(z1.z_values.front(), 0.0, 1e-9);  // inner nodal radius
  EXPECT_NEAR(z1.x_inner, z1.lambda * s.nodal.nodal_radii[0], 1e-12 * z1.x_inner);
  // value 1 with zero slope at the rescaled critical radius
  std::size_t jmax = 0;
  for (std::size_t j = 0; j < z1.z_values.size(); ++j)
    if (z1.z_values[j] > z1.z_values[jmax]) jmax = j;
  EXPECT_NEAR(z1.z_values[jmax], 1.0, 1e-6);
  EXPECT_NEAR(z1.x_grid[jmax], z1.x_critical, 2.0 * (z1.x_grid[1] - z1.x_grid[0]));
  const double r = z1.x_critical / z1.lambda;
  EXPECT_NEAR(-s.u(r) / z1.extremum, 1.0, 1e-12);
  EXPECT_NEAR(s.du(r), 0.0, 1e-7 * z1.extremum / r);
  EXPECT_THROW(rescale_region(s, 2), Error);
  EXPECT_THROW(rescale_region(s, -1), Error);
}

TEST(Rescale, SyntheticBubbleHasZeroDistance) {
  const LimitProfile lp(3);
  RescaledProfile z;
  z.dim = 3;
  for (int j = 0; j <= 100; ++j) {
    const double x = 0.1 * j;
    z.x_grid.push_back(x);
    z.z_values.push_back(lp.U(x));
    z.dz_values.push_back(lp.dU(x));
  }
  const auto d = profile_distance(z, 5.0, 0.0);
  EXPECT_EQ(d.c0, 0.0);
  EXPECT_EQ(d.c1, 0.0);
  EXPECT_EQ(d.points, 51u);
}

TEST(Rescale, DistanceArgumentErrors) {
  RescaledProfile z;
  z.dim = 3;
  z.region_index = 1;
  z.x_grid = {10.0, 20.0};
  z.z_values = {0.0, 0.0};
  z.dz_values = {0.0, 0.0};
  EXPECT_THROW(profile_distance(z, 5.0, 0.0), Error);  // i >= 1 needs a cut
  EXPECT_THROW(profile_distance(z, 0.5, 1.0), Error);
  try {
    profile_distance(z, 5.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_domain);
  }
}

TEST(Rescale, FrozenSecondRegionDistance) {
  const auto s = solve_m_nodal(ProblemSpec::make(3, 4.99, 2));
  const auto z = rescale_region(s, 1, 50.0, 20001);
  const auto d = profile_distance(z, 5.0, 0.5);
  // oracle value 1.0293e-2 at ODE tolerance 1e-12
  EXPECT_LT(d.c0, 1.1e-2);
  EXPECT_GT(d.points, 100u);
}

TEST(Rescale, EnergyInvariance) {
  for (int m : {1, 2, 3}) {
    const auto s = solve_m_nodal(ProblemSpec::make(3, 4.95, m));
    const auto e = energy_per_region(s);
    for (int i = 0; i < m; ++i) {
      const double scaled = rescaled_gradient_energy(s, i);
      const double expect =
          e[static_cast<std::size_t>(i)].gradient *
          rescaling_energy_factor(3, 4.95, s.nodal.extrema[static_cast<std::size_t>(i)]);
      EXPECT_NEAR(scaled / expect, 1.0, 1e-10) << m << " " << i;
    }
  }
}

TEST(Sweep, TailMonotone) {
  EXPECT_TRUE(tail_monotone({5, 1, 2, 3}, true));
  EXPECT_FALSE(tail_monotone({1, 2, 2}, true));
  EXPECT_TRUE(tail_monotone({9, 3, 2, 1}, false));
  EXPECT_FALSE(tail_monotone({1, 2}, true));
  EXPECT_FALSE(tail_monotone({1, 2, std::nan("")}, true));
}

TEST(Sweep, OneNodalDegeneratesToGrowth) {
  const auto sols = sweep_solutions(3, 1);
  const auto d = sweep_diagnostics(ptrs(sols));
  ASSERT_EQ(d.rows.size(), 6u);
  EXPECT_TRUE(d.rows.front().A.empty());
  ASSERT_EQ(d.trends.size(), 2u);
  EXPECT_TRUE(d.all_trends_ok());
  for (std::size_t k = 1; k < d.rows.size(); ++k) {
    EXPECT_GT(d.rows[k].M0, d.rows[k - 1].M0);
    EXPECT_LT(d.rows[k].distance_c0[0], d.rows[k - 1].distance_c0[0]);
  }
}

TEST(Sweep, TrendsTwoAndThreeNodal) {
  for (int m : {2, 3}) {
    const auto sols = sweep_solutions(3, m);
    const auto d = sweep_diagnostics(ptrs(sols));
    for (const auto& t : d.trends) EXPECT_TRUE(t.ok) << "m=" << m << " " << t.column;
    const auto& last = d.rows.back();
    EXPECT_EQ(last.A.size(), static_cast<std::size_t>(m - 1));
    EXPECT_EQ(last.energies.size(), static_cast<std::size_t>(m));
    EXPECT_LT(last.sup_pf, 3.75 * 1.05);
  }
}

TEST(Sweep, Validation) {
  const auto a = solve_m_nodal(ProblemSpec::make(3, 4.5, 1));
  const auto b = solve_m_nodal(ProblemSpec::make(3, 4.8, 1));
  const auto c = solve_m_nodal(ProblemSpec::make(3, 4.9, 2));
  EXPECT_THROW(sweep_diagnostics({&a, &b}), Error);
  EXPECT_THROW(sweep_diagnostics({&b, &a, &a}), Error);
  EXPECT_THROW(sweep_diagnostics({&a, &b, &c}), Error);
}
