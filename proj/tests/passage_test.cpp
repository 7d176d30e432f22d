#include <gtest/gtest.h>

#include <functional>
#include <limits>

#include "dfpp/passage.hpp"
#include "dfpp/philox.hpp"

using namespace dfpp;

namespace {

// Minimum over all monotone paths by recursive enumeration.
double enumerate_min(const EdgeField& f, Vertex from, Vertex to) {
  if (from == to) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (from.x < to.x) best = std::min(best, f.east(from.x, from.y) + enumerate_min(f, {from.x + 1, from.y}, to));
  if (from.y < to.y) best = std::min(best, f.north(from.x, from.y) + enumerate_min(f, {from.x, from.y + 1}, to));
  return best;
}

EdgeField constant_field(GridSpec g, double c) {
  EdgeField f(g, {});
  for (double& w : f.east_data()) w = c;
  for (double& w : f.north_data()) w = c;
  return f;
}

}  // namespace

TEST(Passage, MatchesEnumerationOnRandomGrids) {
  const auto mixed = EdgeTimeDistribution::atoms({{0.0, 0.4}, {1.0, 0.4}, {3.0, 0.2}});
  const auto expo = EdgeTimeDistribution::exponential(0.7);
  for (std::uint32_t rep = 0; rep < 200; ++rep) {
    rng::CounterStream s(17, rep, rng::Stream::kResample);
    const GridSpec g(1 + static_cast<std::int64_t>(s.below(5)), 1 + static_cast<std::int64_t>(s.below(5)));
    const EdgeField f = generate_field(g, rep % 2 ? mixed : expo, 17, rep);
    const PassageField pf = compute_passage(f);
    for (std::int64_t y = 0; y <= g.height; ++y)
      for (std::int64_t x = 0; x <= g.width; ++x) {
        // Recursive enumeration accumulates from the far end; compare to
        // rounding, and exactly against the weight of the extracted path.
        EXPECT_NEAR(pf.at(x, y), enumerate_min(f, {0, 0}, {x, y}), 1e-12);
        EXPECT_EQ(pf.at(x, y), path_weight(f, optimal_path(pf, {x, y})));
      }
  }
}

TEST(Passage, PointMassTimesAreManhattanLengths) {
  const PassageField pf = compute_passage(constant_field(GridSpec(6, 4), 2.0));
  for (std::int64_t y = 0; y <= 4; ++y)
    for (std::int64_t x = 0; x <= 6; ++x) EXPECT_EQ(pf.at(x, y), 2.0 * static_cast<double>(x + y));
}

TEST(Passage, TiesPreferTheWestNeighbour) {
  const PassageField pf = compute_passage(constant_field(GridSpec(3, 3), 1.0));
  const auto path = optimal_path(pf, {2, 1});
  const std::vector<Vertex> expected{{0, 0}, {0, 1}, {1, 1}, {2, 1}};
  EXPECT_EQ(path, expected);
}

TEST(Passage, PathHasManhattanLength) {
  const EdgeField f = generate_field(GridSpec(8, 8), EdgeTimeDistribution::exponential(1.0), 2, 0);
  const PassageField pf = compute_passage(f);
  const auto path = optimal_path(pf, {5, 7});
  EXPECT_EQ(path.size(), 13u);
  EXPECT_EQ(path.front(), (Vertex{0, 0}));
  EXPECT_EQ(path.back(), (Vertex{5, 7}));
  EXPECT_THROW(optimal_path(pf, {9, 0}), std::out_of_range);
}

TEST(Passage, StreamingEqualsFullSweep) {
  const auto d = EdgeTimeDistribution::atoms({{0.0, 0.6}, {1.0, 0.25}, {2.0, 0.15}});
  const Sampler sample(d);
  for (std::uint32_t rep = 0; rep < 20; ++rep) {
    const PassageField pf = compute_passage(generate_field(GridSpec(30, 20), d, 8, rep));
    for (Vertex v : {Vertex{30, 20}, Vertex{0, 20}, Vertex{30, 0}, Vertex{13, 7}, Vertex{0, 0}})
      EXPECT_EQ(streaming_passage_time(8, rep, v, [&](double u) { return sample(u); }), pf.at(v));
  }
}

TEST(Passage, RootedSweepLeavesOtherVerticesUnreachable) {
  const EdgeField f = generate_field(GridSpec(5, 5), EdgeTimeDistribution::exponential(1.0), 3, 0);
  const PassageField pf = compute_passage_from(f, {2, 3});
  EXPECT_EQ(pf.at(2, 3), 0.0);
  EXPECT_TRUE(std::isinf(pf.at(1, 4)));
  EXPECT_NEAR(pf.at(4, 5), enumerate_min(f, {2, 3}, {4, 5}), 1e-12);
}

TEST(Passage, TauCountsPositiveEdges) {
  const EdgeField f = generate_field(GridSpec(10, 10), EdgeTimeDistribution::exponential(1.0), 4, 0);
  const TauField tf = compute_tau(f);
  for (std::int64_t y = 0; y <= 10; ++y)
    for (std::int64_t x = 0; x <= 10; ++x) EXPECT_EQ(tf.at(x, y), x + y);
}

TEST(Passage, BallsAreConnectedWithSharpBoundaries) {
  const auto d = EdgeTimeDistribution::bernoulli01(0.5);
  int checked = 0;
  for (std::uint32_t rep = 0; rep < 40; ++rep) {
    const EdgeField f = generate_field(GridSpec(120, 120), d, 21, rep);
    const TauField tf = compute_tau(f);
    for (std::int32_t t : {0, 3, 8}) {
      DirectedSet b = ball(tf, t);
      ++checked;
      EXPECT_TRUE(b.is_directly_connected());
      const Boundaries bd = boundaries(b);
      for (const Vertex& v : bd.inner) EXPECT_EQ(tf.at(v), t);
      for (const Vertex& v : bd.outer) EXPECT_EQ(tf.at(v), t + 1);
      for (const Edge& e : bd.edges) EXPECT_GT(f.weight(e), 0.0);
    }
  }
  EXPECT_EQ(checked, 120);
}

TEST(Passage, BallIgnoresEdgesLeavingFromOutside) {
  const auto d = EdgeTimeDistribution::bernoulli01(0.5);
  const Sampler sample(d);
  for (std::uint32_t rep = 0; rep < 30; ++rep) {
    const EdgeField f = generate_field(GridSpec(100, 100), d, 5, rep);
    const DirectedSet b = ball(compute_tau(f), 4);
    EdgeField g = f;
    for (const Edge& e : f.edges())
      if (!edge_decides_set(b, e)) g.weight(e) = 1.0 - g.weight(e);
    EXPECT_EQ(sublevel_set(compute_tau(g), 4), b);
  }
}

TEST(Passage, DisconnectedSetIsDetected) {
  DirectedSet s(GridSpec(3, 3), 0);
  s.insert({0, 0});
  s.insert({2, 2});
  EXPECT_FALSE(s.is_directly_connected());
  s.insert({1, 0});
  s.insert({2, 0});
  s.insert({2, 1});
  EXPECT_TRUE(s.is_directly_connected());
}

TEST(Passage, TruncatedBallThrows) {
  const TauField tf = compute_tau(generate_field(GridSpec(10, 10), EdgeTimeDistribution::bernoulli01(1.0), 1, 0));
  EXPECT_THROW(ball(tf, 0), BallTruncated);
}

TEST(Passage, ShapeRadiusForConstantWeights) {
  const PassageField pf = compute_passage(constant_field(GridSpec(40, 40), 1.0));
  EXPECT_DOUBLE_EQ(shape_boundary_radius(pf, 10.0, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(shape_boundary_radius(pf, 10.0, std::numbers::pi / 2), 10.0);
  // Along the diagonal the unit L1 ball reaches (5, 5).
  EXPECT_NEAR(shape_boundary_radius(pf, 10.0, std::numbers::pi / 4), std::hypot(5.0, 5.0), 1e-12);
  EXPECT_THROW(shape_boundary_radius(pf, 100.0, 0.0), RayTruncated);
}
