#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pvg/vonstaudt.hpp"

using namespace pvg;
using pvg::testing::pt;

namespace {

using Frame = LineCoordinateFrame<Rational>;
using P = ProjPoint<Rational>;

P on_l(const Rational& v) { return locate(Frame::canonical(), v); }
P anchor(const Rational& x) { return P(x, Rational(1)); }

ProjMap<Rational> random_map(pvg::testing::Rng& rng) {
  for (;;) {
    ProjMap<Rational>::Matrix m{};
    for (auto& row : m)
      for (auto& v : row) v = Rational(rng.range(-6, 6));
    try {
      return ProjMap<Rational>(m);
    } catch (const GeometryError&) {
    }
  }
}

TEST(Frame, ValueOfMarkedPoints) {
  const auto f = Frame::canonical();
  EXPECT_EQ(value(f, f.zero), Rational(0));
  EXPECT_EQ(value(f, f.one), Rational(1));
  EXPECT_EQ(value(f, pt(7, 0)), Rational(7));
  EXPECT_EQ(value(f, P(Rational(-5, 3), Rational(0))), Rational(-5, 3));
  EXPECT_THROW(value(f, pt(1, 1)), GeometryError);
  EXPECT_THROW(value(f, f.infinity), GeometryError);
}

TEST(Frame, LocateRoundTrip) {
  pvg::testing::Rng rng(21);
  const auto f = Frame::canonical();
  EXPECT_EQ(locate(f, Rational(0)), f.zero);
  EXPECT_EQ(locate(f, Rational(1)), f.one);
  for (int i = 0; i < 100; ++i) {
    const Rational v = rng.rational(-40, 40, 17);
    EXPECT_EQ(value(f, locate(f, v)), v);
  }
}

TEST(Frame, ProjectiveFramesKeepValues) {
  pvg::testing::Rng rng(8);
  const auto base = Frame::canonical();
  for (int i = 0; i < 30; ++i) {
    const auto m = random_map(rng);
    const auto f = base.transformed(m);
    const Rational v = rng.rational(-9, 9, 5);
    EXPECT_EQ(value(f, m.apply(locate(base, v))), v);
    EXPECT_EQ(value(f, locate(f, v)), v);
  }
}

TEST(Frame, RejectsBadFrames) {
  const ProjLine<Rational> l(Rational(0), Rational(1), Rational(0));
  EXPECT_THROW(Frame(l, pt(0, 0), pt(0, 0), P::at_infinity(Rational(1), Rational(0))), GeometryError);
  EXPECT_THROW(Frame(l, pt(0, 0), pt(1, 1), P::at_infinity(Rational(1), Rational(0))), GeometryError);
}

TEST(MulGadget, TwoTimesThree) {
  const auto g = mul_gadget(Frame::canonical(), on_l(2), on_l(3), anchor(10), anchor(11));
  EXPECT_EQ(value(g.frame, g.at("z")), Rational(6));
  EXPECT_FALSE(audit_gadget(g).has_value());
  EXPECT_TRUE(g.has("f"));
  // f is on the anchor line.
  EXPECT_EQ(g.at("f").y(), Rational(1));
}

TEST(MulGadget, IdentityInput) {
  const auto g = mul_gadget(Frame::canonical(), on_l(1), on_l(Rational(7, 2)), anchor(10), anchor(11));
  EXPECT_TRUE(g.degenerate);
  EXPECT_EQ(g.at("z"), on_l(Rational(7, 2)));
  EXPECT_FALSE(audit_gadget(g).has_value());
}

TEST(MulGadget, Preconditions) {
  const auto f = Frame::canonical();
  EXPECT_THROW(mul_gadget(f, on_l(3), on_l(2), anchor(10), anchor(11)), GeometryError);
  EXPECT_THROW(mul_gadget(f, on_l(2), on_l(3), anchor(10), anchor(10)), GeometryError);
  EXPECT_THROW(mul_gadget(f, on_l(2), on_l(3), anchor(10), pt(11, 2)), GeometryError);
}

TEST(AddGadget, TwoPlusThree) {
  const auto g = add_gadget(Frame::canonical(), on_l(2), on_l(3), anchor(11), anchor(10));
  EXPECT_EQ(value(g.frame, g.at("z")), Rational(5));
  EXPECT_FALSE(audit_gadget(g).has_value());
  EXPECT_FALSE(g.has("f"));
  EXPECT_EQ(g.at("c").y(), g.at("d").y());
}

TEST(AddGadget, IdentityInput) {
  const auto g = add_gadget(Frame::canonical(), on_l(0), on_l(Rational(9, 4)), anchor(11), anchor(10));
  EXPECT_EQ(g.at("z"), on_l(Rational(9, 4)));
  EXPECT_FALSE(audit_gadget(g).has_value());
}

TEST(Gadgets, RandomInputsAndAnchors) {
  pvg::testing::Rng rng(99);
  const auto f = Frame::canonical();
  int built = 0;
  for (int i = 0; i < 40; ++i) {
    Rational x = rng.rational(1, 6, 7), y = rng.rational(1, 6, 7);
    if (y < x) std::swap(x, y);
    for (int k = 0; k < 20; ++k) {
      const Rational a = rng.rational(-30, 30, 5), b = rng.rational(-30, 30, 5);
      if (a == b) continue;
      try {
        const auto m = mul_gadget(f, on_l(x), on_l(y), anchor(a), anchor(b));
        EXPECT_EQ(value(f, m.at("z")), x * y);
        EXPECT_FALSE(audit_gadget(m).has_value());
        const auto s = add_gadget(f, on_l(x), on_l(y), anchor(a), anchor(b));
        EXPECT_EQ(value(f, s.at("z")), x + y);
        EXPECT_FALSE(audit_gadget(s).has_value());
        ++built;
      } catch (const GeometryError&) {
        // anchors in special position
      }
    }
  }
  EXPECT_GT(built, 700);
}

TEST(Gadgets, InvariantUnderProjectiveMaps) {
  pvg::testing::Rng rng(4);
  const auto f = Frame::canonical();
  const auto m = mul_gadget(f, on_l(Rational(3, 2)), on_l(Rational(5, 2)), anchor(7), anchor(9));
  const auto s = add_gadget(f, on_l(Rational(3, 2)), on_l(Rational(5, 2)), anchor(9), anchor(7));
  for (int i = 0; i < 25; ++i) {
    const auto map = random_map(rng);
    const auto mm = m.transformed(map);
    const auto ss = s.transformed(map);
    EXPECT_FALSE(audit_gadget(mm).has_value());
    EXPECT_FALSE(audit_gadget(ss).has_value());
    EXPECT_EQ(value(mm.frame, mm.at("z")), Rational(15, 4));
    EXPECT_EQ(value(ss.frame, ss.at("z")), Rational(4));
  }
}

TEST(Gadgets, GeneralFrame) {
  // l: x + y = 2 with 0 = (2, 0), 1 = (1, 1), infinity in direction (1, -1).
  const Frame f(ProjLine<Rational>(Rational(1), Rational(1), Rational(-2)), pt(2, 0), pt(1, 1),
                P::at_infinity(Rational(1), Rational(-1)));
  const ProjLine<Rational> linf(Rational(1), Rational(1), Rational(-5));
  const P a(Rational(-4), Rational(9)), b(Rational(-6), Rational(11));
  ASSERT_TRUE(linf.contains(a) && linf.contains(b));
  const auto g = mul_gadget(f, locate(f, Rational(2)), locate(f, Rational(5)), a, b);
  EXPECT_EQ(value(f, g.at("z")), Rational(10));
  const auto h = add_gadget(f, locate(f, Rational(2)), locate(f, Rational(5)), a, b);
  EXPECT_EQ(value(f, h.at("z")), Rational(7));
}

TEST(Gadgets, CompositionChain) {
  // ((x * x) + 1) * x through cascaded gadgets.
  pvg::testing::Rng rng(12);
  const auto f = Frame::canonical();
  for (int i = 0; i < 20; ++i) {
    const Rational x = rng.rational(1, 5, 9);
    if (x == Rational(1)) continue;
    const auto g1 = mul_gadget(f, on_l(x), on_l(x), anchor(10), anchor(11));
    const auto g2 = add_gadget(f, f.one, g1.at("z"), anchor(21), anchor(20));
    const auto g3 = mul_gadget(f, on_l(x), g2.at("z"), anchor(30), anchor(31));
    EXPECT_EQ(value(f, g3.at("z")), (x * x + Rational(1)) * x);
  }
}

TEST(PlaceAnchors, FirstGadgetOrdering) {
  const auto f = Frame::canonical();
  const auto pa = place_anchors({}, GadgetKind::Mul, on_l(2), on_l(2), {});
  const auto g = mul_gadget(f, on_l(2), on_l(2), pa.a, pa.b);
  EXPECT_LT(pa.a.x(), pa.b.x());
  // e > d > c in height.
  EXPECT_GT(g.at("e").y(), g.at("d").y());
  EXPECT_GT(g.at("d").y(), g.at("c").y());
  EXPECT_GT(g.at("c").y(), Rational(0));
}

TEST(PlaceAnchors, SecondGadgetAboveFirst) {
  const auto f = Frame::canonical();
  std::vector<P> ell{on_l(1), on_l(2), on_l(3)};
  const auto p1 = place_anchors({}, GadgetKind::Add, on_l(1), on_l(1), ell);
  const auto g1 = add_gadget(f, on_l(1), on_l(1), p1.a, p1.b);
  EXPECT_GT(p1.a.x(), p1.b.x());
  EXPECT_GT(g1.at("e").y(), g1.at("c").y());
  EXPECT_EQ(g1.at("c").y(), g1.at("d").y());
  const auto p2 = place_anchors({g1}, GadgetKind::Add, on_l(1), on_l(2), ell);
  EXPECT_GT(p2.b.x(), p2.threshold);
  EXPECT_GT(p2.b.x(), p1.a.x());
  const auto g2 = add_gadget(f, on_l(1), on_l(2), p2.a, p2.b);
  for (const char* r : {"c", "d", "e"}) EXPECT_GT(g2.at(r).y(), g1.at("e").y()) << r;
  EXPECT_EQ(value(f, g2.at("z")), Rational(3));
  // Every crossing of new and old sightlines lies inside the epsilon strip.
  for (const auto& [lo1, hi1] : g1.segments()) {
    for (const auto& [lo2, hi2] : g2.segments()) {
      const auto hit = segment_intersection(Segment<Rational>(g1.at(lo1), g1.at(hi1)),
                                            Segment<Rational>(g2.at(lo2), g2.at(hi2)));
      if (const auto* p = std::get_if<P>(&hit)) {
        EXPECT_LT(p->y(), p2.epsilon);
      }
    }
  }
}

TEST(PlaceAnchors, JitterShiftsAnchors) {
  const auto a = place_anchors({}, GadgetKind::Mul, on_l(2), on_l(3), {});
  const auto b = place_anchors({}, GadgetKind::Mul, on_l(2), on_l(3), {}, Rational(1, 7));
  EXPECT_EQ(b.a.x() - a.a.x(), Rational(1, 7));
}

}  // namespace
