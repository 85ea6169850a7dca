#include <gtest/gtest.h>

#include "aprelax/norms.hpp"
#include "aprelax/study.hpp"

using namespace aprelax;

TEST(DiscreteNorms, ConstantTrajectoryIsZero) {
  const std::vector<double> times = {0.0, 0.1, 0.25};
  const std::vector<std::vector<double>> traj(3, std::vector<double>(9, 1.7));
  const auto n = discrete_norms(times, traj, 0.2);
  EXPECT_EQ(n.dx_linf, 0.0);
  EXPECT_EQ(n.wide_dxx_linf, 0.0);
  EXPECT_EQ(n.dxx_linf, 0.0);
  EXPECT_EQ(n.wide_dtx_l2, 0.0);
  EXPECT_EQ(n.dxx_l2, 0.0);
}

TEST(DiscreteNorms, StaticLinearProfile) {
  std::vector<double> v(12);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 * (0.25 * static_cast<double>(i)) + 1.0;
  const std::vector<double> times = {0.0, 0.5};
  const std::vector<std::vector<double>> traj = {v, v};
  const auto n = discrete_norms(times, traj, 0.25);
  EXPECT_DOUBLE_EQ(n.dx_linf, 3.0);
  EXPECT_EQ(n.wide_dxx_linf, 0.0);
  EXPECT_EQ(n.dxx_linf, 0.0);
  EXPECT_EQ(n.wide_dtx_l2, 0.0);
  EXPECT_EQ(n.dxx_l2, 0.0);
}

TEST(DiscreteNorms, QuadraticGrowingInTime) {
  // v_i(t) = t x_i^2 with x_i = i dx; second differences are exactly 2t,
  // d/dt of the centred first difference is exactly 2 x_i.
  const double dx = 0.5;
  const std::vector<double> times = {0.0, 1.0, 2.0};
  std::vector<std::vector<double>> traj;
  for (double t : times) {
    std::vector<double> v(5);
    for (std::size_t i = 0; i < 5; ++i) v[i] = t * (dx * static_cast<double>(i)) * (dx * static_cast<double>(i));
    traj.push_back(v);
  }
  const auto n = discrete_norms(times, traj, dx);
  // sups skip the final sample t = 2
  EXPECT_DOUBLE_EQ(n.dxx_linf, 2.0);
  EXPECT_DOUBLE_EQ(n.wide_dxx_linf, 2.0);
  EXPECT_DOUBLE_EQ(n.dx_linf, 1.5 + 2.0);
  // interior cells x = 0.5, 1, 1.5: int_0^2 sum dx (2x)^2 dt = 14
  EXPECT_NEAR(n.wide_dtx_l2, std::sqrt(14.0), 1e-14);
  // left endpoint weights: only [1, 2] contributes, with 3 cells of (2 * 1)^2 dx
  EXPECT_NEAR(n.dxx_l2, std::sqrt(6.0), 1e-14);
}

TEST(DiscreteNorms, RejectsShortOrMismatchedTrajectories) {
  const std::vector<double> one = {0.0};
  const std::vector<std::vector<double>> traj1 = {{1, 2, 3}};
  EXPECT_THROW(discrete_norms(one, traj1, 1.0), std::invalid_argument);
  const std::vector<double> two = {0.0, 1.0};
  EXPECT_THROW(discrete_norms(two, traj1, 1.0), std::invalid_argument);
  const std::vector<std::vector<double>> ragged = {{1, 2, 3}, {1, 2}};
  EXPECT_THROW(discrete_norms(two, ragged, 1.0), std::invalid_argument);
  const std::vector<double> flat = {1.0, 1.0};
  const std::vector<std::vector<double>> ok = {{1, 2, 3}, {1, 2, 3}};
  EXPECT_THROW(discrete_norms(flat, ok, 1.0), std::invalid_argument);
  NormAccumulator acc(1.0);
  acc.add(0.0, ok[0]);
  EXPECT_THROW((void)acc.result(), std::invalid_argument);
}

TEST(DiscreteNorms, AccumulatorMatchesStoredTrajectory) {
  const std::vector<double> times = {0.0, 0.3, 0.7, 1.0};
  std::vector<std::vector<double>> traj;
  for (double t : times) {
    std::vector<double> v(20);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.4 * static_cast<double>(i) + t);
    traj.push_back(v);
  }
  NormAccumulator acc(0.1);
  for (std::size_t k = 0; k < times.size(); ++k) acc.add(times[k], traj[k]);
  const auto a = acc.result();
  const auto b = discrete_norms(times, traj, 0.1);
  EXPECT_EQ(a.dx_linf, b.dx_linf);
  EXPECT_EQ(a.wide_dtx_l2, b.wide_dtx_l2);
  EXPECT_EQ(a.dxx_l2, b.dxx_l2);
}

TEST(Regularity, FiniteAndConsistentUnderRefinement) {
  const StudyConfig config;
  std::vector<RegularityDiagnostics> diag;
  for (std::size_t n : {400u, 800u}) {
    const auto pair = run_pair(PSystem{}, InitialData{InitialKind::Smooth}, config.grid(n),
                               config.scheme(1e-2));
    ASSERT_TRUE(pair.regularity.has_value());
    diag.push_back(*pair.regularity);
  }
  const auto& c = diag[0];
  const auto& f = diag[1];
  const std::vector<std::pair<double, double>> pairs = {{c.dtx_p_l2, f.dtx_p_l2},
                                                        {c.wide_dxx_p_linf, f.wide_dxx_p_linf},
                                                        {c.dxx_tau_linf, f.dxx_tau_linf},
                                                        {c.dx_tau_linf, f.dx_tau_linf},
                                                        {c.dxx_u_l2, f.dxx_u_l2}};
  for (const auto& [coarse, fine] : pairs) {
    EXPECT_TRUE(std::isfinite(coarse));
    EXPECT_GT(coarse, 0.0);
    EXPECT_LE(std::abs(coarse - fine), 0.10 * fine);
  }
}

TEST(Regularity, OnlyForPSystem) {
  const StudyConfig config;
  const auto pair = run_pair(GoldsteinTaylor{}, InitialData{InitialKind::Smooth}, config.grid(100),
                             config.scheme(1e-1));
  EXPECT_FALSE(pair.regularity.has_value());
}
