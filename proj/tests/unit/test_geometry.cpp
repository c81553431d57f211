#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "eowilson/errors.hpp"
#include "eowilson/geometry.hpp"

using namespace eowilson;

TEST(Geometry, ParityOfSite) {
  const LatticeGeometry g({4, 4, 4, 4}, 8, {2, 4});
  EXPECT_EQ(g.parity({0, 0, 0, 0}), Parity::kEven);
  EXPECT_EQ(g.parity({1, 0, 0, 0}), Parity::kOdd);
  EXPECT_EQ(g.parity({3, 2, 1, 0}), Parity::kEven);
  EXPECT_THROW(g.parity({4, 0, 0, 0}), BoundsError);
  EXPECT_THROW(g.parity({0, -1, 0, 0}), BoundsError);
}

TEST(Geometry, CompactedX) {
  const LatticeGeometry g({8, 4, 4, 4}, 8, {2, 4});
  EXPECT_EQ(g.eo_compact_x({5, 1, 2, 3}), 2);
  EXPECT_EQ(g.eo_compact_x({0, 0, 0, 0}), 0);
  // x = 6 in a row with y + z + t odd is an odd site at compacted index 3.
  const SiteCoord c{6, 1, 0, 0};
  EXPECT_EQ(g.parity(c), Parity::kOdd);
  EXPECT_EQ(g.eo_compact_x(c), 3);
  EXPECT_THROW(g.eo_compact_x({8, 0, 0, 0}), BoundsError);
}

TEST(Geometry, LaneAndBlock) {
  const LatticeGeometry g44({16, 16, 4, 4}, 16, {4, 4});
  EXPECT_EQ(g44.lane_and_block(0, 0), (LaneBlock{0, 0, 0}));
  EXPECT_EQ(g44.lane_and_block(3, 1).lane, 7);

  const LatticeGeometry g82({32, 4, 2, 2}, 16, {8, 2});
  EXPECT_EQ(g82.lane_and_block(9, 3), (LaneBlock{9, 1, 1}));
  EXPECT_THROW(g82.lane_and_block(16, 0), BoundsError);
  EXPECT_THROW(g82.lane_and_block(0, 4), BoundsError);
}

TEST(Geometry, RejectsInvalidShapes) {
  EXPECT_THROW(LatticeGeometry({4, 4, 4, 4}, 16, {4, 4}), ConfigError);   // NX % 8
  EXPECT_THROW(LatticeGeometry({8, 6, 4, 4}, 16, {4, 4}), ConfigError);   // NY % 4
  EXPECT_THROW(LatticeGeometry({8, 4, 4, 4}, 16, {1, 16}), ConfigError);  // vlenx >= 2
  EXPECT_THROW(LatticeGeometry({8, 4, 4, 4}, 16, {2, 4}), ConfigError);   // vlen mismatch
  EXPECT_THROW(LatticeGeometry({8, 4, 3, 4}, 8, {2, 4}), ConfigError);    // odd extent
  EXPECT_THROW(LatticeGeometry({8, 8, 4, 4}, DomainGrid({1, 1, 3, 1}), 8, {2, 4}), ConfigError);
  // Divisible globally but odd locally.
  EXPECT_THROW(LatticeGeometry({8, 8, 4, 6}, DomainGrid({1, 1, 1, 2}), 8, {2, 4}), ConfigError);
  // No single-precision tiling fits 4^4.
  for (Tiling t : {Tiling{16, 1}, Tiling{8, 2}, Tiling{4, 4}, Tiling{2, 8}})
    EXPECT_THROW(LatticeGeometry({4, 4, 4, 4}, 16, t), ConfigError);
}

TEST(Geometry, ParsesDimsAndTilings) {
  EXPECT_EQ(parse_dims("64x32x16x8"), (Dims{64, 32, 16, 8}));
  EXPECT_EQ(parse_tiling("8x2"), (Tiling{8, 2}));
  EXPECT_THROW(parse_dims("4x4x4"), ConfigError);
  EXPECT_THROW(parse_dims("4x4xax4"), ConfigError);
  EXPECT_THROW(parse_tiling("4"), ConfigError);
  EXPECT_EQ(to_string(Dims{1, 2, 3, 4}), "1x2x3x4");
}

struct GeometryCase {
  Dims size;
  int vlen;
  Tiling tiling;
  Dims grid;
};

class GeometryBijection : public ::testing::TestWithParam<GeometryCase> {};

// Every local site maps to a distinct (parity, block, lane) and back.
TEST_P(GeometryBijection, SiteAddressRoundTrip) {
  const GeometryCase& p = GetParam();
  const LatticeGeometry g(p.size, DomainGrid(p.grid), p.vlen, p.tiling);
  std::set<std::tuple<int, int, int>> seen;
  const Dims& local = g.local_size();
  for (std::int64_t i = 0; i < g.local_volume(); ++i) {
    const SiteCoord c = from_lexicographic(i, local);
    const PackedAddress a = g.address(c);
    ASSERT_EQ(a.parity, g.parity(c));
    ASSERT_LT(a.block, g.blocks_per_parity());
    ASSERT_LT(a.lane, g.vlen());
    ASSERT_EQ(g.site(a.parity, a.block, a.lane), c);
    ASSERT_TRUE(seen.insert({index(a.parity), a.block, a.lane}).second);
    // The lane/block pair agrees with the compacted-x formula.
    const LaneBlock lb = g.lane_and_block(g.eo_compact_x(c), c.y);
    const BlockCoord bc = g.block_coord(a.block);
    ASSERT_EQ(lb.lane, a.lane);
    ASSERT_EQ(lb.bx, bc.bx);
    ASSERT_EQ(lb.by, bc.by);
    ASSERT_EQ(bc.z, c.z);
    ASSERT_EQ(bc.t, c.t);
    ASSERT_EQ(g.block_index(bc), a.block);
  }
  EXPECT_EQ(static_cast<std::int64_t>(seen.size()), g.local_volume());
  EXPECT_EQ(static_cast<std::int64_t>(2) * g.blocks_per_parity() * g.vlen(), g.local_volume());
}

// Stepping +mu then -mu returns to the same packed address.
TEST_P(GeometryBijection, NeighborStepsInvert) {
  const GeometryCase& p = GetParam();
  const LatticeGeometry g(p.size, DomainGrid(p.grid), p.vlen, p.tiling);
  const Dims& local = g.local_size();
  for (std::int64_t i = 0; i < g.local_volume(); ++i) {
    const SiteCoord c = from_lexicographic(i, local);
    for (int mu = 0; mu < kNumDims; ++mu) {
      const SiteCoord up = shifted(c, local, mu, +1);
      ASSERT_NE(g.parity(up), g.parity(c));
      ASSERT_EQ(g.address(shifted(up, local, mu, -1)), g.address(c));
    }
  }
}

TEST_P(GeometryBijection, RowBaseDescribesSitePositions) {
  const GeometryCase& p = GetParam();
  const LatticeGeometry g(p.size, DomainGrid(p.grid), p.vlen, p.tiling);
  for (Parity par : {Parity::kEven, Parity::kOdd})
    for (int b = 0; b < g.blocks_per_parity(); ++b) {
      const int rb = g.row_base(par, g.block_coord(b));
      for (int lane = 0; lane < g.vlen(); ++lane) {
        const SiteCoord s = g.site(par, b, lane);
        const int ly = lane / g.vlenx();
        ASSERT_EQ(s.x % 2, (rb + ly) & 1);
      }
    }
}

TEST_P(GeometryBijection, GlobalOwnerRoundTrip) {
  const GeometryCase& p = GetParam();
  const LatticeGeometry g(p.size, DomainGrid(p.grid), p.vlen, p.tiling);
  std::set<std::int64_t> seen;
  for (int r = 0; r < g.num_domains(); ++r)
    for (std::int64_t i = 0; i < g.local_volume(); ++i) {
      const SiteCoord local = from_lexicographic(i, g.local_size());
      const SiteCoord global = g.to_global(r, local);
      SiteCoord back;
      ASSERT_EQ(g.owner(global, &back), r);
      ASSERT_EQ(back, local);
      seen.insert(lexicographic(global, g.global_size()));
    }
  EXPECT_EQ(static_cast<std::int64_t>(seen.size()), g.global_volume());
}

INSTANTIATE_TEST_SUITE_P(
    Lattices, GeometryBijection,
    ::testing::Values(GeometryCase{{4, 4, 4, 4}, 8, {2, 4}, {1, 1, 1, 1}},
                      GeometryCase{{8, 8, 8, 8}, 8, {2, 4}, {1, 1, 1, 1}},
                      GeometryCase{{8, 8, 8, 8}, 8, {4, 2}, {1, 1, 1, 1}},
                      GeometryCase{{8, 8, 8, 8}, 16, {4, 4}, {1, 1, 1, 1}},
                      GeometryCase{{8, 8, 8, 8}, 16, {2, 8}, {1, 1, 1, 1}},
                      GeometryCase{{16, 8, 4, 4}, 8, {8, 1}, {1, 1, 1, 1}},
                      GeometryCase{{16, 8, 4, 4}, 16, {8, 2}, {1, 1, 1, 1}},
                      GeometryCase{{32, 2, 2, 2}, 16, {16, 1}, {1, 1, 1, 1}},
                      GeometryCase{{8, 8, 8, 8}, 8, {2, 4}, {2, 1, 2, 2}},
                      GeometryCase{{16, 8, 8, 8}, 8, {2, 4}, {2, 2, 2, 2}}));

TEST(DomainGrid, RankCoordinatesAndNeighbors) {
  const DomainGrid grid({2, 3, 1, 2});
  EXPECT_EQ(grid.size(), 12);
  for (int r = 0; r < grid.size(); ++r) {
    EXPECT_EQ(grid.rank(grid.coord(r)), r);
    for (int mu = 0; mu < kNumDims; ++mu) {
      EXPECT_EQ(grid.neighbor(grid.neighbor(r, mu, +1), mu, -1), r);
      const Dims c = grid.coord(r);
      Dims up = c;
      up[mu] = (c[mu] + 1) % grid.extent(mu);
      EXPECT_EQ(grid.neighbor(r, mu, +1), grid.rank(up));
    }
  }
  EXPECT_EQ(grid.coord(1), (Dims{1, 0, 0, 0}));  // x fastest
  EXPECT_THROW(DomainGrid({0, 1, 1, 1}), ConfigError);
}

TEST(Geometry, LexicographicIsXFastest) {
  const Dims size{4, 6, 2, 8};
  EXPECT_EQ(lexicographic({1, 0, 0, 0}, size), 1);
  EXPECT_EQ(lexicographic({0, 1, 0, 0}, size), 4);
  EXPECT_EQ(lexicographic({0, 0, 0, 1}, size), 48);
  for (std::int64_t i = 0; i < volume(size); ++i)
    EXPECT_EQ(lexicographic(from_lexicographic(i, size), size), i);
  EXPECT_EQ(shifted({3, 0, 0, 0}, size, kX, +1), (SiteCoord{0, 0, 0, 0}));
  EXPECT_EQ(shifted({0, 0, 0, 0}, size, kT, -1), (SiteCoord{0, 0, 0, 7}));
}
