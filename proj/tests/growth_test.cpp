#include <gtest/gtest.h>

#include <cmath>

#include "dfpp/growth.hpp"

using namespace dfpp;

TEST(Growth, FirstStepIsAFairDomino) {
  const auto law = enumerate_growth_law(2, GrowthRule::kEdgeProportional);
  ASSERT_EQ(law.size(), 2u);
  EXPECT_DOUBLE_EQ(law.at(Shape{{0, 0}, {1, 0}}), 0.5);
  EXPECT_DOUBLE_EQ(law.at(Shape{{0, 0}, {0, 1}}), 0.5);
}

TEST(Growth, ThreeCellLawByHand) {
  // From the horizontal domino the boundary edges are: (2,0) east, (0,1)
  // north, (1,1) north -- three edges, one each.
  const auto law = enumerate_growth_law(3, GrowthRule::kEdgeProportional);
  EXPECT_DOUBLE_EQ(law.at(Shape{{0, 0}, {1, 0}, {2, 0}}), 0.5 / 3);
  EXPECT_DOUBLE_EQ(law.at(Shape{{0, 0}, {0, 1}, {0, 2}}), 0.5 / 3);
  EXPECT_DOUBLE_EQ(law.at(Shape{{0, 0}, {1, 0}, {1, 1}}), 0.5 / 3);
  EXPECT_DOUBLE_EQ(law.at(Shape{{0, 0}, {1, 0}, {0, 1}}), 2 * 0.5 / 3);
  double total = 0.0;
  for (const auto& [s, p] : law) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(Growth, DoublyExposedCellHasWeightTwo) {
  GrowthState s = GrowthState::initial();
  occupy(s, {1, 0});
  occupy(s, {0, 1});
  EXPECT_EQ(s.boundary.at({1, 1}), kFromWest | kFromSouth);
  // (2,0) and (0,2) contribute one edge each, (1,1) two
  EXPECT_EQ(s.exposed_edges(), 4);
  const auto edge = enumerate_growth_law(4, GrowthRule::kEdgeProportional);
  const auto cell = enumerate_growth_law(4, GrowthRule::kCellUniform);
  const Shape square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_GT(edge.at(square), cell.at(square));
}

TEST(Growth, IncrementalBoundaryMatchesRecomputation) {
  for (std::uint32_t rep = 0; rep < 1000; ++rep) {
    GrowthState s = GrowthState::initial();
    rng::CounterStream stream(4, rep, rng::Stream::kGrowth);
    for (int step = 0; step < 30; ++step) {
      growth_step(s, stream.next());
      ASSERT_EQ(s.boundary, recompute_boundary(s.occupied));
    }
    EXPECT_EQ(s.n(), 31);
    EXPECT_EQ(static_cast<std::int64_t>(s.trajectory.size()), 31);
  }
}

TEST(Growth, ChainAndRaceLawsAgree) {
  for (std::int64_t n = 1; n <= 5; ++n) {
    const auto chain = enumerate_growth_law(n, GrowthRule::kEdgeProportional);
    const auto race = enumerate_race_law(n, false);
    ASSERT_EQ(chain.size(), race.size());
    for (const auto& [shape, p] : chain) EXPECT_NEAR(race.at(shape), p, 1e-15);
    const auto uniform = enumerate_growth_law(n, GrowthRule::kCellUniform);
    const auto vertex = enumerate_race_law(n, true);
    for (const auto& [shape, p] : uniform) EXPECT_NEAR(vertex.at(shape), p, 1e-15);
  }
}

TEST(Growth, FppConventions) {
  const GridSpec g = growth_window(5);
  const VertexClockField clocks(g, 3, 0);
  const FppGrowth one = fpp_growth(clocks, 1);
  ASSERT_EQ(one.cells.size(), 1u);
  EXPECT_EQ(one.cells[0], (Cell{0, 0}));
  EXPECT_EQ(one.t_n, 0.0);
  const FppGrowth two = fpp_growth(clocks, 2);
  const Cell expected = clocks.clock({1, 0}) < clocks.clock({0, 1}) ? Cell{1, 0} : Cell{0, 1};
  EXPECT_EQ(two.cells[1], expected);
  EXPECT_EQ(two.t_n, std::min(clocks.clock({1, 0}), clocks.clock({0, 1})));
}

TEST(Growth, FppSecondCellIsFair) {
  const int n = 20000;
  int horizontal = 0;
  for (int i = 0; i < n; ++i)
    if (fpp_growth(VertexClockField(growth_window(2), 8, static_cast<std::uint32_t>(i)), 2).cells[1].x == 1) ++horizontal;
  EXPECT_NEAR(horizontal / double(n), 0.5, 4 * std::sqrt(0.25 / n));
}

TEST(Growth, EdgeClockShapesMatchExactLaw) {
  const int n = 20000;
  std::map<Shape, int> counts;
  for (int i = 0; i < n; ++i) {
    const auto cells = fpp_growth(exponential_edge_clocks(growth_window(4), 12, static_cast<std::uint32_t>(i)), 4).cells;
    ++counts[Shape(cells.begin(), cells.end())];
  }
  for (const auto& [shape, p] : enumerate_growth_law(4, GrowthRule::kEdgeProportional))
    EXPECT_NEAR(counts[shape] / double(n), p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Growth, WindowExceeded) {
  EXPECT_THROW(fpp_growth(VertexClockField(GridSpec(2, 2), 1, 0), 20), WindowExceeded);
}

TEST(Growth, OccupancyHistogramsAgree) {
  const Occupancy a = growth_occupancy(10, 2000, 1, 1);
  const Occupancy b = fpp_occupancy(10, 2000, 2, 1);
  EXPECT_EQ(a.frequency({0, 0}), 1.0);
  EXPECT_EQ(b.frequency({0, 0}), 1.0);
  EXPECT_LT(total_variation(a, b), 0.05);
  EXPECT_EQ(total_variation(a, a), 0.0);
}

TEST(Growth, ScalingDiagnosticIsFinite) {
  const auto tv = scaling_diagnostic({10, 20}, 200, 3, 1);
  ASSERT_EQ(tv.size(), 2u);
  for (double d : tv) {
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
}
