#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pvg/projgeom.hpp"

namespace {

using pvg::ProjLine;
using pvg::ProjMap;
using pvg::Rational;
using pvg::testing::pt;
using P = pvg::ProjPoint<Rational>;
using L = ProjLine<Rational>;
using S = pvg::Segment<Rational>;
using Map = ProjMap<Rational>;

P inf(long dx, long dy) { return P::at_infinity(Rational(dx), Rational(dy)); }

Map random_map(pvg::testing::Rng& rng) {
  for (;;) {
    Map::Matrix m{};
    for (auto& row : m)
      for (auto& c : row) c = rng.rational(-5, 5, 3);
    if (sign(pvg::det3(m[0], m[1], m[2])) != 0) return Map(m);
  }
}

TEST(ProjPoint, CanonicalForms) {
  EXPECT_EQ(P(Rational(2), Rational(4), Rational(2)), pt(1, 2));
  EXPECT_EQ(P(Rational(-2), Rational(4), Rational(0)), inf(1, -2));
  EXPECT_TRUE(pt(1, 2).is_affine());
  EXPECT_FALSE(inf(1, 0).is_affine());
  EXPECT_THROW(P(Rational(0), Rational(0), Rational(0)), pvg::GeometryError);
}

TEST(Orient, Examples) {
  EXPECT_EQ(pvg::orient(pt(0, 0), pt(1, 0), pt(0, 1)), 1);
  EXPECT_EQ(pvg::orient(pt(0, 0), pt(1, 1), pt(2, 2)), 0);
  EXPECT_EQ(pvg::orient(pt(0, 0), pt(0, 1), pt(1, 0)), -1);
  EXPECT_THROW(pvg::orient(pt(0, 0), pt(1, 0), inf(1, 1)), pvg::GeometryError);
}

TEST(Orient, AlternatingProperty) {
  pvg::testing::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    const P a(rng.rational(-9, 9, 4), rng.rational(-9, 9, 4));
    const P b(rng.rational(-9, 9, 4), rng.rational(-9, 9, 4));
    const P c = rng.coin(30) ? P(a.x() + (b.x() - a.x()) * Rational(3), a.y() + (b.y() - a.y()) * Rational(3))
                             : P(rng.rational(-9, 9, 4), rng.rational(-9, 9, 4));
    const int o = pvg::orient(a, b, c);
    EXPECT_EQ(pvg::orient(b, a, c), -o);
    EXPECT_EQ(pvg::orient(a, c, b), -o);
    EXPECT_EQ(pvg::orient(c, b, a), -o);
    EXPECT_EQ(pvg::orient(b, c, a), o);
    EXPECT_EQ(pvg::orient(c, a, b), o);
  }
}

TEST(MeetJoin, Examples) {
  const L xaxis(Rational(0), Rational(1), Rational(0));
  const L yaxis(Rational(1), Rational(0), Rational(0));
  EXPECT_EQ(pvg::meet(xaxis, yaxis), pt(0, 0));
  const L y1(Rational(0), Rational(1), Rational(-1));
  const P par = pvg::meet(xaxis, y1);
  EXPECT_FALSE(par.is_affine());
  EXPECT_EQ(par, inf(1, 0));
  const L diag = pvg::join(pt(0, 0), pt(1, 1));
  EXPECT_EQ(diag, L(Rational(1), Rational(-1), Rational(0)));
  EXPECT_THROW(pvg::join(pt(1, 1), pt(1, 1)), pvg::GeometryError);
  EXPECT_THROW(pvg::meet(xaxis, xaxis), pvg::GeometryError);
}

TEST(MeetJoin, DualityProperty) {
  pvg::testing::Rng rng(8);
  int tested = 0;
  while (tested < 200) {
    const P p(rng.rational(-9, 9, 5), rng.rational(-9, 9, 5));
    const P q(rng.rational(-9, 9, 5), rng.rational(-9, 9, 5));
    const P r(rng.rational(-9, 9, 5), rng.rational(-9, 9, 5));
    if (pvg::collinear(p, q, r)) continue;
    ++tested;
    const L pq = pvg::join(p, q);
    EXPECT_TRUE(pq.contains(p));
    EXPECT_TRUE(pq.contains(q));
    EXPECT_EQ(pvg::meet(pq, pvg::join(p, r)), p);
  }
}

TEST(SegmentIntersection, Examples) {
  using R = pvg::SegmentIntersection<Rational>;
  const R cross = pvg::segment_intersection(S(pt(0, 0), pt(2, 2)), S(pt(0, 2), pt(2, 0)));
  ASSERT_TRUE(std::holds_alternative<P>(cross));
  EXPECT_EQ(std::get<P>(cross), pt(1, 1));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(
      pvg::segment_intersection(S(pt(0, 0), pt(1, 0)), S(pt(2, 0), pt(3, 0)))));
  // Open segments: touching endpoints do not intersect.
  EXPECT_TRUE(std::holds_alternative<std::monostate>(
      pvg::segment_intersection(S(pt(0, 0), pt(1, 1)), S(pt(1, 1), pt(2, 0)))));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(
      pvg::segment_intersection(S(pt(0, 0), pt(1, 0)), S(pt(1, 0), pt(2, 0)))));
  // T-junction: an endpoint inside the other segment is not an open crossing.
  EXPECT_TRUE(std::holds_alternative<std::monostate>(
      pvg::segment_intersection(S(pt(0, 0), pt(2, 0)), S(pt(1, 0), pt(1, 1)))));
  EXPECT_TRUE(std::holds_alternative<pvg::SegmentOverlap>(
      pvg::segment_intersection(S(pt(0, 0), pt(2, 0)), S(pt(1, 0), pt(3, 0)))));
  EXPECT_TRUE(std::holds_alternative<pvg::SegmentOverlap>(
      pvg::segment_intersection(S(pt(0, 0), pt(3, 3)), S(pt(2, 2), pt(1, 1)))));
}

// Brute-force oracle: solve a + s (b - a) = c + t (d - c) by Cramer's rule and
// check 0 < s, t < 1; collinear pairs by interval overlap on the x or y axis.
int oracle_kind(const S& s1, const S& s2, P* where) {
  const auto& a = s1.first();
  const auto& b = s1.second();
  const auto& c = s2.first();
  const auto& d = s2.second();
  const Rational rx = b.x() - a.x(), ry = b.y() - a.y();
  const Rational qx = d.x() - c.x(), qy = d.y() - c.y();
  const Rational den = rx * qy - ry * qx;
  const Rational wx = c.x() - a.x(), wy = c.y() - a.y();
  if (den.is_zero()) {
    if (!(wx * ry - wy * rx).is_zero()) return 0;
    const bool use_x = !rx.is_zero();
    auto coord = [&](const P& p) { return use_x ? p.x() : p.y(); };
    Rational lo1 = std::min(coord(a), coord(b)), hi1 = std::max(coord(a), coord(b));
    Rational lo2 = std::min(coord(c), coord(d)), hi2 = std::max(coord(c), coord(d));
    return std::min(hi1, hi2) > std::max(lo1, lo2) ? 2 : 0;
  }
  const Rational s = (wx * qy - wy * qx) / den;
  const Rational t = (wx * ry - wy * rx) / den;
  if (s > Rational(0) && s < Rational(1) && t > Rational(0) && t < Rational(1)) {
    *where = P(a.x() + s * rx, a.y() + s * ry);
    return 1;
  }
  return 0;
}

TEST(SegmentIntersection, AgreesWithParametricOracle) {
  pvg::testing::Rng rng(99);
  int crossings = 0, overlaps = 0;
  for (int i = 0; i < 1000; ++i) {
    auto draw = [&] { return P(Rational(rng.range(-4, 4)), Rational(rng.range(-4, 4))); };
    P a = draw(), b = draw(), c = draw(), d = draw();
    if (a == b || c == d) continue;
    if (rng.coin(15)) {  // force a collinear pair
      c = P(a.x() + (b.x() - a.x()) * Rational(rng.range(-2, 2)), a.y() + (b.y() - a.y()) * Rational(rng.range(-2, 2)));
      d = P(a.x() + (b.x() - a.x()) * Rational(rng.range(-2, 3), 2), a.y() + (b.y() - a.y()) * Rational(rng.range(-2, 3), 2));
      if (c == d) continue;
    }
    const S s1(a, b), s2(c, d);
    P where;
    const int expected = oracle_kind(s1, s2, &where);
    const auto got = pvg::segment_intersection(s1, s2);
    switch (expected) {
      case 0: EXPECT_TRUE(std::holds_alternative<std::monostate>(got)); break;
      case 1:
        ++crossings;
        ASSERT_TRUE(std::holds_alternative<P>(got));
        EXPECT_EQ(std::get<P>(got), where);
        break;
      case 2: ++overlaps; EXPECT_TRUE(std::holds_alternative<pvg::SegmentOverlap>(got)); break;
    }
  }
  EXPECT_GT(crossings, 50);
  EXPECT_GT(overlaps, 5);
}

TEST(ProjMapTest, ApplyExamples) {
  EXPECT_EQ(Map::identity().apply(pt(3, -2)), pt(3, -2));
  EXPECT_EQ(Map::translation(Rational(3), Rational(4)).apply(pt(1, 2)), pt(4, 6));
  // Sends the line x = 1 to the line at infinity.
  const Map m({{{Rational(1), Rational(0), Rational(0)},
                {Rational(0), Rational(1), Rational(0)},
                {Rational(1), Rational(0), Rational(-1)}}});
  const L target = m.apply(L(Rational(1), Rational(0), Rational(-1)));
  EXPECT_TRUE(target.is_at_infinity());
  EXPECT_FALSE(m.apply(pt(1, 7)).is_affine());
  EXPECT_THROW(Map({{{Rational(1), Rational(2), Rational(3)},
                     {Rational(2), Rational(4), Rational(6)},
                     {Rational(0), Rational(0), Rational(1)}}}),
               pvg::GeometryError);
}

TEST(ProjMapTest, InverseAndLineTransport) {
  pvg::testing::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Map m = random_map(rng);
    const P p(rng.rational(-5, 5, 3), rng.rational(-5, 5, 3));
    const P q(rng.rational(-5, 5, 3), rng.rational(-5, 5, 3));
    EXPECT_EQ(m.inverse().apply(m.apply(p)), p);
    if (p == q) continue;
    const L l = pvg::join(p, q);
    EXPECT_EQ(m.apply(l), pvg::join(m.apply(p), m.apply(q)));
  }
}

TEST(CrossRatio, DeterminantFormulaExample) {
  const Rational v = pvg::cross_ratio(pt(5, 0), pt(1, 0), pt(0, 0), inf(1, 0));
  EXPECT_EQ(v, Rational(5));
}

TEST(CrossRatio, CoincidentNumeratorGivesZero) {
  EXPECT_EQ(pvg::cross_ratio(pt(0, 0), pt(1, 0), pt(0, 0), inf(1, 0)), Rational(0));
}

TEST(CrossRatio, Errors) {
  EXPECT_THROW(pvg::cross_ratio(pt(0, 0), pt(1, 0), pt(0, 1), pt(3, 0)), pvg::GeometryError);
  // |a,d| = 0
  EXPECT_THROW(pvg::cross_ratio(pt(2, 0), pt(1, 0), pt(0, 0), pt(2, 0)), pvg::GeometryError);
}

TEST(CrossRatio, ProjectiveInvarianceOfExample) {
  pvg::testing::Rng rng(31);
  const P a = pt(5, 0), b = pt(1, 0), c = pt(0, 0), d = inf(1, 0);
  for (int i = 0; i < 50; ++i) {
    const Map m = random_map(rng);
    EXPECT_EQ(pvg::cross_ratio(m.apply(a), m.apply(b), m.apply(c), m.apply(d)), Rational(5));
  }
}

TEST(CrossRatio, OrientedDistanceFormOnAffineLines) {
  pvg::testing::Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const P base(rng.rational(-5, 5, 3), rng.rational(-5, 5, 3));
    const Rational dx = rng.rational(-3, 3, 2), dy = rng.rational(-3, 3, 2);
    if (dx.is_zero() && dy.is_zero()) continue;
    Rational t[4];
    for (auto& ti : t) ti = rng.rational(-10, 10, 5);
    if (t[0] == t[3] || t[1] == t[2] || t[0] == t[1] || t[2] == t[3] || t[0] == t[2] || t[1] == t[3]) continue;
    P pts[4];
    for (int k = 0; k < 4; ++k) pts[k] = P(base.x() + t[k] * dx, base.y() + t[k] * dy);
    const Rational expected = (t[2] - t[0]) * (t[3] - t[1]) / ((t[3] - t[0]) * (t[2] - t[1]));
    EXPECT_EQ(pvg::cross_ratio(pts[0], pts[1], pts[2], pts[3]), expected);
    // Swapping the last two inverts the ratio.
    EXPECT_EQ(pvg::cross_ratio(pts[0], pts[1], pts[2], pts[3]) * pvg::cross_ratio(pts[0], pts[1], pts[3], pts[2]),
              Rational(1));
    // Holds even when the map sends some of the points to infinity.
    const Map m = random_map(rng);
    EXPECT_EQ(pvg::cross_ratio(m.apply(pts[0]), m.apply(pts[1]), m.apply(pts[2]), m.apply(pts[3])), expected);
  }
}

}  // namespace
