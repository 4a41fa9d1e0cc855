#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pvg/recognize.hpp"
#include "pvg/reduce.hpp"

using namespace pvg;
using pvg::testing::pt;

namespace {

VisibilityGraph make_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  VisibilityGraph g(labels);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

VisibilityGraph complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

VisibilityGraph path(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

SearchResult run(const VisibilityGraph& g, long k) {
  RealizationQuery q;
  q.target = g;
  q.k = k;
  return recognize_on_grid(q);
}

bool connected(const VisibilityGraph& g) {
  std::vector<char> seen(g.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : g.neighbors(u)) {
      if (!seen[v]) seen[v] = 1, stack.push_back(v);
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

TEST(Recognize, SmallExamples) {
  EXPECT_EQ(run(complete(3), 3).status, SearchStatus::Found);
  const auto p3 = run(path(3), 3);
  ASSERT_EQ(p3.status, SearchStatus::Found);
  const auto& ps = *p3.realization;
  EXPECT_TRUE(collinear(ps.point(0), ps.point(1), ps.point(2)));
  const auto claw = run(make_graph(4, {{0, 1}, {0, 2}, {0, 3}}), 6);
  EXPECT_EQ(claw.status, SearchStatus::Exhausted);
  EXPECT_GT(claw.stats.nodes, 0u);
  EXPECT_GT(claw.stats.prunes, 0u);
}

TEST(Recognize, CompleteGraphsAndPaths) {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const auto& g : {complete(n), path(n)}) {
      const auto r = run(g, 6);
      ASSERT_EQ(r.status, SearchStatus::Found) << n;
      EXPECT_TRUE(check_realization(*r.realization, g, true).ok);
      EXPECT_TRUE(check_realization(*r.realization, g, false).ok);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& p = r.realization->point(i);
        EXPECT_TRUE(sign(p.x()) >= 0 && p.x() <= Rational(6) && sign(p.y()) >= 0 && p.y() <= Rational(6));
      }
    }
  }
}

TEST(Recognize, AllGraphsUpToFiveVertices) {
  // Every labeled graph on 4 vertices and a sample on 5: disconnected graphs
  // are never PVGs; whatever is found must re-verify.
  for (std::size_t n : {4u, 5u}) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const std::size_t masks = std::size_t{1} << pairs.size();
    for (std::size_t m = 0; m < masks; m += (n == 4 ? 1 : 37)) {
      std::vector<std::pair<std::size_t, std::size_t>> e;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (m >> b & 1) e.push_back(pairs[b]);
      const auto g = make_graph(n, e);
      const auto r = run(g, 5);
      if (!connected(g)) {
        EXPECT_EQ(r.status, SearchStatus::Exhausted) << m;
      }
      if (r.status == SearchStatus::Found) {
        EXPECT_TRUE(check_realization(*r.realization, g, true).ok) << m;
      }
    }
  }
}

TEST(Recognize, Monotone) {
  const auto c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  bool found = false;
  for (long k = 1; k <= 5; ++k) {
    const bool now = run(c4, k).status == SearchStatus::Found;
    EXPECT_TRUE(!found || now) << k;
    found = found || now;
  }
}

TEST(Recognize, ParallelModeAgrees) {
  for (const auto& g : {complete(4), path(4), make_graph(4, {{0, 1}, {0, 2}, {0, 3}})}) {
    RealizationQuery q;
    q.target = g;
    q.k = 4;
    const auto a = recognize_on_grid(q);
    q.deterministic = false;
    const auto b = recognize_on_grid(q);
    EXPECT_EQ(a.status, b.status);
    if (b.realization) {
      EXPECT_TRUE(check_realization(*b.realization, g, true).ok);
    }
  }
}

TEST(Recognize, RowsAndRectangularBounds) {
  const auto grid = build_grid(2, 3);
  RealizationQuery q;
  q.target = grid.graph;
  q.k = 3;
  q.k_y = 1;
  q.rows = {{0, 1, 2}, {3, 4, 5}};
  std::size_t count = 0;
  enumerate_realizations(q, [&](const std::vector<GridPoint>& cells) {
    ++count;
    EXPECT_EQ(cells[0].y, cells[2].y);
    EXPECT_EQ(cells[3].y, cells[5].y);
    EXPECT_TRUE(check_realization(to_point_set(q.target, cells), q.target, true).ok);
    return true;
  });
  EXPECT_GT(count, 0u);
}

TEST(Recognize, Caps) {
  EXPECT_THROW(run(complete(10), 3), SearchError);
  EXPECT_THROW(run(complete(3), 0), SearchError);
  EXPECT_THROW(run(complete(3), 100), SearchError);
}

TEST(CheckRealization, CollinearTripleAgainstTriangle) {
  PointSet<Rational> ps;
  ps.add("a", pt(0, 0));
  ps.add("b", pt(1, 1));
  ps.add("c", pt(2, 2));
  const auto rep = check_realization(ps, complete(3), true);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.message, "edge a-c is blocked by b");
  const auto rep2 = check_realization(ps, make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), false);
  EXPECT_FALSE(rep2.ok);
  PointSet<Rational> tri;
  tri.add("a", pt(0, 0));
  tri.add("b", pt(1, 0));
  tri.add("c", pt(0, 1));
  EXPECT_EQ(check_realization(tri, path(3), true).message, "non-edge a-c has no blocker");
  EXPECT_THROW(check_realization(tri, complete(4), true), SearchError);
}

TEST(CheckRealization, UnlabeledUsesIsomorphism) {
  PointSet<Rational> ps;
  ps.add("a", pt(0, 0));
  ps.add("b", pt(2, 2));
  ps.add("c", pt(1, 1));
  // Labeled: a-b is blocked; unlabeled it is still a path.
  EXPECT_FALSE(check_realization(ps, path(3), true).ok);
  EXPECT_TRUE(check_realization(ps, path(3), false).ok);
}

TEST(CheckRealization, ConstructionsPass) {
  FanSpec<Rational> fs;
  fs.segments = {Segment<Rational>(pt(1, 0), pt(0, 1)), Segment<Rational>(pt(2, 0), pt(0, 3))};
  const auto f = build_fan(fs);
  EXPECT_TRUE(check_realization(f.points, f.graph, true).ok);
  const auto r = compile(parse_system("VARS 2\nADD 1 1 2\n"), {Rational(1), Rational(2)});
  EXPECT_TRUE(check_realization(r.construction.points, r.construction.graph, true).ok);
}

TEST(Isomorphism, FindsMapsAndAutomorphisms) {
  const auto a = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto b = make_graph(4, {{2, 0}, {0, 3}, {3, 1}});
  const auto m = find_isomorphism(a, b);
  ASSERT_TRUE(m.has_value());
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(a.adjacent(u, v), b.adjacent((*m)[u], (*m)[v]));
  EXPECT_FALSE(find_isomorphism(a, make_graph(4, {{0, 1}, {0, 2}, {0, 3}})).has_value());
  EXPECT_EQ(automorphisms(path(4)).size(), 2u);
  EXPECT_EQ(automorphisms(complete(4)).size(), 24u);
  EXPECT_EQ(automorphisms(make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})).size(), 8u);
}

TEST(IncidencePattern, SmallPatterns) {
  const auto three = search_incidence_pattern(IncidencePattern::exact(3, {{0, 1, 2}}), 2);
  EXPECT_EQ(three.status, SearchStatus::Found);
  EXPECT_EQ(search_incidence_pattern(IncidencePattern::exact(3, {{0, 1, 2}}), 1).status, SearchStatus::Exhausted);
  const auto quad = search_incidence_pattern(complete_quadrilateral_pattern(), 4);
  ASSERT_EQ(quad.status, SearchStatus::Found);
  std::vector<ProjPoint<Rational>> pts(quad.realization->points());
  EXPECT_TRUE(pattern_holds(complete_quadrilateral_pattern(), pts));
}

TEST(IncidencePattern, PappusHasGridRealization) {
  // A1 A2 A3 | B1 B2 B3 | C12 C13 C23 with Ci j on Ai Bj and Aj Bi.
  const auto pappus = IncidencePattern::exact(
      9, {{0, 1, 2}, {3, 4, 5}, {0, 4, 6}, {1, 3, 6}, {0, 5, 7}, {2, 3, 7}, {1, 5, 8}, {2, 4, 8}, {6, 7, 8}});
  const auto r = search_incidence_pattern(pappus, 8);
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_TRUE(pattern_holds(pappus, r.realization->points()));
}

TEST(IncidencePattern, PerlesSmallGrid) {
  const auto p = perles_pattern();
  EXPECT_EQ(p.points, 9u);
  EXPECT_EQ(p.lines.size(), 9u);
  EXPECT_EQ(search_incidence_pattern(p, 4).status, SearchStatus::Exhausted);
  EXPECT_THROW(search_incidence_pattern(p, 40), SearchError);
}

}  // namespace
