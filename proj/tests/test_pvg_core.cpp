#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "pvg/pvg_core.hpp"

namespace {

using pvg::PointSet;
using pvg::Rational;
using pvg::VisibilityGraph;
using pvg::testing::pt;

PointSet<Rational> make(std::initializer_list<std::pair<long, long>> coords) {
  PointSet<Rational> ps;
  for (const auto& [x, y] : coords) ps.add("v" + std::to_string(ps.size()), pt(x, y));
  return ps;
}

PointSet<Rational> grid(long r, long q) {
  PointSet<Rational> ps;
  for (long y = 0; y < r; ++y)
    for (long x = 0; x < q; ++x) ps.add("g" + std::to_string(y) + "_" + std::to_string(x), pt(x, y));
  return ps;
}

TEST(PointSetTest, RejectsDuplicatesAndInfinity) {
  PointSet<Rational> ps;
  ps.add("a", pt(0, 0));
  EXPECT_THROW(ps.add("a", pt(1, 0)), pvg::GeometryError);
  EXPECT_THROW(ps.add("b", pt(0, 0)), pvg::GeometryError);
  EXPECT_THROW(ps.add("c", pvg::ProjPoint<Rational>::at_infinity(Rational(1), Rational(0))), pvg::GeometryError);
  EXPECT_THROW(ps.add("has space", pt(3, 3)), pvg::GeometryError);
  EXPECT_THROW((void)ps.index_of("zz"), pvg::UnknownLabel);
}

TEST(VisibilityGraphTest, CollinearTriple) {
  const auto ps = make({{0, 0}, {1, 0}, {2, 0}});
  const auto g = pvg::visibility_graph(ps);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(0, 2));
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(VisibilityGraphTest, ConvexPositionIsComplete) {
  const auto ps = make({{0, 0}, {3, 1}, {2, 4}, {-1, 2}});
  const auto g = pvg::visibility_graph(ps);
  EXPECT_EQ(g.edge_count(), 6u);
}

TEST(VisibilityGraphTest, ThreeByThreeGridMatchesOracle) {
  const auto ps = grid(3, 3);
  const auto g = pvg::visibility_graph(ps);
  EXPECT_EQ(g, pvg::testing::naive_visibility(ps));
  EXPECT_EQ(g.degree(ps.index_of("g1_1")), 8u);
  EXPECT_FALSE(g.adjacent("g0_0", "g2_2"));
  EXPECT_FALSE(g.adjacent("g0_2", "g2_0"));
  EXPECT_TRUE(g.adjacent("g0_0", "g2_1"));
}

TEST(VisibilityGraphTest, SinglePoint) {
  const auto ps = make({{4, 4}});
  const auto g = pvg::visibility_graph(ps);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(VisibilityGraphTest, RandomSetsMatchOracle) {
  pvg::testing::Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    const auto ps = pvg::testing::random_point_set(rng, static_cast<std::size_t>(rng.range(1, 25)), i % 2 == 0);
    const auto g = pvg::visibility_graph(ps);
    ASSERT_TRUE(g.is_symmetric());
    ASSERT_EQ(g, pvg::testing::naive_visibility(ps)) << "set " << i;
  }
}

TEST(VisibilityGraphTest, InvariantUnderAffineMaps) {
  pvg::testing::Rng rng(77);
  for (int i = 0; i < 30; ++i) {
    const auto ps = pvg::testing::random_point_set(rng, 18, true);
    pvg::ProjMap<Rational>::Matrix m{};
    do {
      m = {{{rng.rational(-3, 3, 4), rng.rational(-3, 3, 4), rng.rational(-3, 3, 4)},
            {rng.rational(-3, 3, 4), rng.rational(-3, 3, 4), rng.rational(-3, 3, 4)},
            {Rational(0), Rational(0), Rational(1)}}};
    } while (sign(pvg::det3(m[0], m[1], m[2])) == 0);
    const auto image = ps.transformed(pvg::ProjMap<Rational>(m));
    EXPECT_EQ(pvg::visibility_graph(image), pvg::visibility_graph(ps));
  }
}

TEST(RayPartitionTest, GridCenterHasEightSingletonRays) {
  const auto ps = grid(3, 3);
  const auto rp = pvg::ray_partition("g1_1", ps);
  ASSERT_EQ(rp.ray_count(), 8u);
  for (const auto& ray : rp.rays) EXPECT_EQ(ray.size(), 1u);
  // Counterclockwise from direction (1, 0).
  EXPECT_EQ(ps.label(rp.rays[0][0]), "g1_2");
  EXPECT_EQ(ps.label(rp.rays[1][0]), "g2_2");
  EXPECT_EQ(ps.label(rp.rays[2][0]), "g2_1");
  EXPECT_EQ(ps.label(rp.rays[7][0]), "g0_2");
}

TEST(RayPartitionTest, OneRaySortedByDistance) {
  const auto ps = make({{0, 0}, {3, 0}, {1, 0}, {2, 0}});
  const auto rp = pvg::ray_partition("v0", ps);
  ASSERT_EQ(rp.ray_count(), 1u);
  EXPECT_EQ(rp.rays[0], (std::vector<std::size_t>{2, 3, 1}));
}

TEST(RayPartitionTest, SquareCorner) {
  const auto ps = make({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(pvg::ray_partition("v0", ps).ray_count(), 3u);
}

TEST(RayPartitionTest, UnknownLabel) {
  const auto ps = make({{0, 0}});
  EXPECT_THROW(pvg::ray_partition("nope", ps), pvg::UnknownLabel);
}

TEST(RayPartitionTest, RayCountsEqualDegreesAndCoverAllPoints) {
  pvg::testing::Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    const auto ps = pvg::testing::random_point_set(rng, 20, true);
    const auto g = pvg::visibility_graph(ps);
    for (std::size_t p = 0; p < ps.size(); ++p) {
      const auto rp = pvg::ray_partition(p, ps);
      EXPECT_EQ(rp.ray_count(), g.degree(p));
      std::size_t total = 0;
      for (const auto& ray : rp.rays) {
        total += ray.size();
        EXPECT_TRUE(g.adjacent(p, ray.front()));
        for (std::size_t k = 1; k < ray.size(); ++k) {
          EXPECT_EQ(pvg::orient(ps.point(p), ps.point(ray[0]), ps.point(ray[k])), 0);
          EXPECT_FALSE(g.adjacent(p, ray[k]));
        }
      }
      EXPECT_EQ(total, ps.size() - 1);
    }
  }
}

TEST(StructuralChecks, ConvexPositionPasses) {
  const auto ps = make({{0, 0}, {4, 0}, {6, 3}, {3, 6}, {-1, 4}});
  const auto g = pvg::visibility_graph(ps);
  for (std::size_t p = 0; p < ps.size(); ++p) {
    EXPECT_TRUE(pvg::check_empty_halfspace(p, ps, g).ok());
    EXPECT_TRUE(pvg::second_point_predicates(p, ps, g).ok());
  }
}

TEST(StructuralChecks, GridPassesExhaustively) {
  for (long r = 2; r <= 5; ++r) {
    for (long q = 2; q <= 5; ++q) {
      const auto ps = grid(r, q);
      const auto summary = pvg::check_all_structure(ps, pvg::visibility_graph(ps));
      EXPECT_TRUE(summary.ok()) << r << "x" << q << ": " << summary.failures.front();
    }
  }
}

TEST(StructuralChecks, HalfspaceIsApplied) {
  // N(p) induces the path (2,0)-(1,1)-(0,2); both ends have degree one.
  const auto ps = make({{0, 0}, {2, 0}, {1, 1}, {0, 2}});
  const auto rep = pvg::check_empty_halfspace(std::string("v0"), ps);
  EXPECT_EQ(rep.status, pvg::CheckStatus::Pass);
  EXPECT_EQ(rep.checked, 2u);
}

TEST(StructuralChecks, PathRayOrder) {
  // N(p) = {(2,0), (1,1), (0,2)}; (2,0)-(0,2) is blocked by (1,1).
  const auto ps = make({{0, 0}, {2, 0}, {1, 1}, {0, 2}});
  const auto rep = pvg::check_path_ray_order(std::string("v0"), ps);
  EXPECT_EQ(rep.status, pvg::CheckStatus::Pass);
  EXPECT_EQ(rep.checked, 1u);
}

TEST(StructuralChecks, PathRayOrderNotApplicableOnCycle) {
  // N(p) = {(1,0), (1,1), (0,1)} pairwise visible: a triangle.
  const auto ps = make({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(pvg::check_path_ray_order(std::string("v0"), ps).status, pvg::CheckStatus::NotApplicable);
  // Around the center of a regular-ish hexagon N(p) is a 6-cycle.
  const auto hex = make({{0, 0}, {2, 0}, {1, 2}, {-1, 2}, {-2, 0}, {-1, -2}, {1, -2}});
  EXPECT_EQ(pvg::check_path_ray_order(std::string("v0"), hex).status, pvg::CheckStatus::NotApplicable);
}

TEST(StructuralChecks, SecondPointOnCollinearEndpoint) {
  const auto ps = make({{0, 0}, {1, 0}, {2, 0}});
  const auto rep = pvg::second_point_predicates(std::string("v0"), ps);
  EXPECT_EQ(rep.status, pvg::CheckStatus::Pass);
  EXPECT_EQ(rep.checked, 1u);  // (2,0) sees all of N(p) = {(1,0)}
}

TEST(StructuralChecks, RandomSetsPass) {
  pvg::testing::Rng rng(404);
  for (int i = 0; i < 40; ++i) {
    const auto ps = pvg::testing::random_point_set(rng, 16, i % 3 != 0);
    const auto summary = pvg::check_all_structure(ps, pvg::visibility_graph(ps));
    EXPECT_TRUE(summary.ok()) << summary.failures.front();
  }
}

TEST(StructuralChecks, DetectsInconsistentGraph) {
  // Feeding a graph that is not the PVG of the points must be able to fail.
  const auto ps = make({{0, 0}, {2, 0}, {1, 1}, {0, 2}});
  VisibilityGraph wrong(ps.labels());
  wrong.add_edge("v0", "v1");
  wrong.add_edge("v0", "v2");
  wrong.add_edge("v0", "v3");
  wrong.add_edge("v1", "v3");  // the only edge inside N(v0)
  const auto rep = pvg::check_empty_halfspace(0, ps, wrong);
  EXPECT_EQ(rep.status, pvg::CheckStatus::Fail);
}

TEST(Formats, PointSetRoundTripAndOrdering) {
  std::istringstream in("# comment\nb 1/2 -3\na 0 0 # trailing\n\nc 2 7/3\n");
  const auto ps = pvg::read_point_set<Rational>(in);
  ASSERT_EQ(ps.size(), 3u);
  std::ostringstream out;
  pvg::write_point_set(out, ps);
  EXPECT_EQ(out.str(), "a 0 0\nb 1/2 -3\nc 2 7/3\n");
  std::istringstream bad("a 0\n");
  EXPECT_THROW(pvg::read_point_set<Rational>(bad), pvg::ParseError);
  std::istringstream dup("a 0 0\nb 0 0\n");
  EXPECT_THROW(pvg::read_point_set<Rational>(dup), pvg::ParseError);
}

TEST(Formats, GraphWriteRead) {
  const auto ps = make({{0, 0}, {1, 0}, {2, 0}, {5, 5}});
  const auto g = pvg::visibility_graph(ps);
  std::ostringstream out;
  pvg::write_graph(out, g);
  EXPECT_EQ(out.str(), "4 5\nv0 v1\nv0 v3\nv1 v2\nv1 v3\nv2 v3\n");
  std::istringstream in(out.str());
  EXPECT_EQ(pvg::read_graph(in), g);
  std::istringstream iso("3 1\na b\n");
  const auto gi = pvg::read_graph(iso);
  EXPECT_EQ(gi.size(), 3u);
  EXPECT_TRUE(gi.has_vertex("_iso0"));
  std::istringstream badcount("2 2\na b\n");
  EXPECT_THROW(pvg::read_graph(badcount), pvg::ParseError);
}

}  // namespace
