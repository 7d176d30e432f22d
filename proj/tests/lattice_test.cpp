#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "dfpp/lattice.hpp"

using namespace dfpp;

TEST(Lattice, GridCounts) {
  const GridSpec g(3, 2);
  EXPECT_EQ(g.vertex_count(), 12u);
  EXPECT_EQ(g.east_count(), 9u);
  EXPECT_EQ(g.north_count(), 8u);
  EXPECT_TRUE(g.contains({3, 2}));
  EXPECT_FALSE(g.contains({4, 0}));
  EXPECT_TRUE(g.on_far_boundary({3, 0}));
  EXPECT_FALSE(g.on_far_boundary({2, 1}));
  EXPECT_THROW(GridSpec(0, 3), std::invalid_argument);
}

TEST(Lattice, EdgesEnumerateEveryWeight) {
  const GridSpec g(4, 3);
  EdgeField f(g, {});
  EXPECT_EQ(f.edges().size(), g.east_count() + g.north_count());
  for (const Edge& e : f.edges()) EXPECT_TRUE(g.has_edge(e));
}

TEST(Lattice, NearestVertex) {
  EXPECT_EQ(nearest_vertex(PolarPoint(5, 0)), (Vertex{5, 0}));
  EXPECT_EQ(nearest_vertex(PolarPoint(5, std::numbers::pi / 2)), (Vertex{0, 5}));
  EXPECT_EQ(nearest_vertex(PolarPoint(10, std::numbers::pi / 4)), (Vertex{7, 7}));
  EXPECT_EQ(nearest_vertex(PolarPoint(0, 1.0)), (Vertex{0, 0}));
  // (0.5, 0) is equidistant from (0,0) and (1,0).
  EXPECT_EQ(nearest_vertex(PolarPoint(0.5, 0)), (Vertex{0, 0}));
  EXPECT_THROW(PolarPoint(-1, 0), std::invalid_argument);
  EXPECT_THROW(PolarPoint(1, 2.0), std::invalid_argument);
}

TEST(Lattice, FieldsAreCoordinateKeyed) {
  const auto d = EdgeTimeDistribution::exponential(1.0);
  const EdgeField small = generate_field(GridSpec(4, 4), d, 11, 2);
  const EdgeField large = generate_field(GridSpec(9, 7), d, 11, 2);
  for (std::int64_t y = 0; y <= 4; ++y)
    for (std::int64_t x = 0; x < 4; ++x) EXPECT_EQ(small.east(x, y), large.east(x, y));
  const EdgeField other = generate_field(GridSpec(4, 4), d, 11, 3);
  EXPECT_NE(small.east(0, 0), other.east(0, 0));
}

TEST(Lattice, DistributionsShareUniforms) {
  const auto a = generate_field(GridSpec(6, 6), EdgeTimeDistribution::bernoulli01(0.4), 1, 0);
  const auto b = generate_field(GridSpec(6, 6), EdgeTimeDistribution::bernoulli01(0.7), 1, 0);
  for (const Edge& e : a.edges()) EXPECT_LE(b.weight(e), a.weight(e));
}

TEST(Lattice, DumpRoundTrip) {
  const auto d = EdgeTimeDistribution::atoms({{0.0, 0.5}, {2.5, 0.5}});
  const EdgeField f = generate_field(GridSpec(5, 3), d, 99, 7);
  std::stringstream ss;
  write_field_dump(ss, f);
  const EdgeField g = read_field_dump(ss);
  EXPECT_EQ(g.grid(), f.grid());
  EXPECT_EQ(g.provenance().distribution_id, d.id());
  EXPECT_EQ(g.provenance().seed, 99u);
  EXPECT_EQ(g.provenance().replicate, 7u);
  EXPECT_EQ(g.east_data(), f.east_data());
  EXPECT_EQ(g.north_data(), f.north_data());
}

TEST(Lattice, TruncatedDumpIsRejected) {
  std::stringstream ss;
  write_field_dump(ss, generate_field(GridSpec(2, 2), EdgeTimeDistribution::bernoulli01(0.5), 1, 0));
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 3);
  std::stringstream cut(bytes);
  EXPECT_THROW(read_field_dump(cut), std::runtime_error);
}
