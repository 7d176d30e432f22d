#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dfpp/oriented.hpp"

using namespace dfpp;

TEST(Oriented, OriginFrontRespectsParityAndLightCone) {
  for (std::uint32_t rep = 0; rep < 20; ++rep) {
    FrontState s = FrontState::origin();
    for (int n = 1; n <= 200 && !s.extinct(); ++n) {
      const auto prev = s.right_edge();
      s = evolve_front(s, 0.7, 3, rep);
      if (s.extinct()) break;
      EXPECT_GE(s.x_min, -n);
      EXPECT_LE(s.x_max(), n);
      for (std::int64_t x = s.x_min; x <= s.x_max(); ++x)
        if (s.contains(x)) {
          EXPECT_TRUE(s.parity_ok(x));
        }
      EXPECT_LE(*s.right_edge(), *prev + 1);
    }
  }
}

TEST(Oriented, FullyOpenEdgeMovesAtUnitSpeed) {
  const RightEdgeTrace t = right_edge_trace(1.0, 300, 1, 0);
  for (std::size_t n = 0; n < t.r.size(); ++n) EXPECT_EQ(t.r[n], static_cast<std::int64_t>(n + 1));
  EXPECT_EQ(*t.alpha_hat(), 1.0);
}

TEST(Oriented, FirstStepLaw) {
  // r_1 = 1 iff the up-right edge of 0 is open; r_1 = -1 iff that edge is
  // closed and site -1 is entered from 0 or from -2.
  const double p = 0.5;
  const int n = 20000;
  int plus = 0, minus = 0;
  for (int i = 0; i < n; ++i) {
    const auto r1 = *right_edge_trace(p, 1, 77, static_cast<std::uint32_t>(i)).r[0];
    if (r1 == 1) ++plus;
    if (r1 == -1) ++minus;
  }
  const double pm = (1 - p) * (1 - (1 - p) * (1 - p));
  EXPECT_NEAR(plus / double(n), p, 4 * std::sqrt(p * (1 - p) / n));
  EXPECT_NEAR(minus / double(n), pm, 4 * std::sqrt(pm * (1 - pm) / n));
}

TEST(Oriented, RightEdgeIsMonotoneInP) {
  for (std::uint32_t rep = 0; rep < 50; ++rep) {
    const auto lo = right_edge_trace(0.62, 400, 5, rep);
    const auto hi = right_edge_trace(0.68, 400, 5, rep);
    for (std::size_t n = 0; n < lo.r.size(); ++n) ASSERT_LE(*lo.r[n], *hi.r[n]);
  }
}

TEST(Oriented, MarginDoesNotMatterWellAboveCriticality) {
  const auto a = estimate_edge_speed(0.8, 2000, 8, 4, 1, 100);
  const auto b = estimate_edge_speed(0.8, 2000, 8, 4, 1, 400);
  EXPECT_NEAR(a.alpha_hat, b.alpha_hat, 1e-9);
}

TEST(Oriented, ConeAnglesAnchors) {
  const ConeAngles zero = cone_angles(0.0);
  EXPECT_EQ(zero.theta_minus, std::numbers::pi / 4);
  EXPECT_EQ(zero.theta_plus, std::numbers::pi / 4);
  const ConeAngles one = cone_angles(1.0);
  EXPECT_EQ(one.theta_minus, 0.0);
  EXPECT_EQ(one.theta_plus, std::numbers::pi / 2);
  const ConeAngles mid = cone_angles(0.5);
  EXPECT_NEAR(mid.theta_minus, std::atan(1.0 / 3.0), 1e-15);
  EXPECT_NEAR(mid.theta_minus + mid.theta_plus, std::numbers::pi / 2, 1e-15);
  EXPECT_THROW(cone_angles(1.5), std::domain_error);
}

TEST(Oriented, ConeAtFullOpennessIsTheQuadrant) {
  const ConeEstimate c = estimate_cone(1.0, 100, 2, 1, 1);
  EXPECT_EQ(c.theta_minus, 0.0);
  EXPECT_EQ(c.theta_plus, std::numbers::pi / 2);
}

TEST(Oriented, ClusterOfClosedOriginIsSingleton) {
  const int n = 20000;
  const double p = 0.3;
  int singletons = 0;
  for (int i = 0; i < n; ++i) {
    const ClusterSize c = cluster_size(p, 1000, 9, static_cast<std::uint32_t>(i));
    EXPECT_FALSE(c.exceeded);
    if (c.size == 1) ++singletons;
  }
  const double q = (1 - p) * (1 - p);
  EXPECT_NEAR(singletons / double(n), q, 4 * std::sqrt(q * (1 - q) / n));
  EXPECT_EQ(cluster_size(0.0, 10, 1, 0).size, 1);
  EXPECT_TRUE(cluster_size(0.99, 50, 1, 0).exceeded);
}

TEST(Oriented, SlopeReach) {
  EXPECT_EQ(slope_reach_frequency(1.0, 0.1, 64, 10, 1, 1), 1.0);
  EXPECT_EQ(slope_reach_frequency(0.0, 0.5, 4, 10, 1, 1), 0.0);
  const double near = slope_reach_frequency(0.7, 0.2, 16, 400, 2, 1);
  const double far = slope_reach_frequency(0.7, 0.2, 64, 400, 2, 1);
  EXPECT_LE(far, near);
  EXPECT_THROW(slope_connectivity(0.7, 0.5, 16, 10, 1, 0.3, 1), std::invalid_argument);
}

TEST(Oriented, CriticalProbabilityBracket) {
  PcOptions opt;
  opt.replicates = 16;
  opt.workers = 1;
  const PcEstimate est = estimate_pc(2000, 0.0625, 3, opt);
  EXPECT_GT(est.p_hat, 0.6);
  EXPECT_LT(est.p_hat, 0.7);
  EXPECT_LT(est.hi - est.lo, 0.0625);
  EXPECT_THROW(estimate_pc(2000, 1e-4, 3, opt), std::invalid_argument);
}
