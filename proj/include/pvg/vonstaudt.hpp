#pragma once

/**
 * @file vonstaudt.hpp
 * @brief Cross-ratio coordinates on a line and the addition/multiplication
 * gadgets built from sightlines between a line l and a second line through
 * the infinity point of l.
 */

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pvg/projgeom.hpp"

namespace pvg {

/// Coordinates on `line`: value(p) = cross_ratio(p, one; zero, infinity).
template <class T>
struct LineCoordinateFrame {
  ProjLine<T> line;
  ProjPoint<T> zero;
  ProjPoint<T> one;
  ProjPoint<T> infinity;

  LineCoordinateFrame(ProjLine<T> l, ProjPoint<T> z, ProjPoint<T> o, ProjPoint<T> inf)
      : line(std::move(l)), zero(std::move(z)), one(std::move(o)), infinity(std::move(inf)) {
    if (!line.contains(zero) || !line.contains(one) || !line.contains(infinity)) {
      throw GeometryError("frame points must lie on the carrier line");
    }
    if (zero == one || zero == infinity || one == infinity) throw GeometryError("frame points must be distinct");
  }

  /// l is y = 0 with 0 = (0,0), 1 = (1,0) and the horizontal point at infinity.
  static LineCoordinateFrame canonical() {
    return LineCoordinateFrame(ProjLine<T>(T(0), T(1), T(0)), ProjPoint<T>(T(0), T(0)), ProjPoint<T>(T(1), T(0)),
                               ProjPoint<T>::at_infinity(T(1), T(0)));
  }

  LineCoordinateFrame transformed(const ProjMap<T>& m) const {
    return LineCoordinateFrame(m.apply(line), m.apply(zero), m.apply(one), m.apply(infinity));
  }
};

/// The second line of the canonical drawing, y = 1.
template <class T>
ProjLine<T> canonical_linf() {
  return ProjLine<T>(T(0), T(1), T(-1));
}

template <class T>
T value(const LineCoordinateFrame<T>& f, const ProjPoint<T>& p) {
  if (!f.line.contains(p)) throw GeometryError("point " + p.to_string() + " is not on the frame line");
  if (p == f.infinity) throw GeometryError("the infinity point has no value");
  return cross_ratio(p, f.one, f.zero, f.infinity);
}

/// Inverse of value: writes one = alpha*zero + beta*infinity and returns alpha*zero + v*beta*infinity.
template <class T>
ProjPoint<T> locate(const LineCoordinateFrame<T>& f, const T& v) {
  const auto& z = f.zero.coords();
  const auto& w = f.infinity.coords();
  const auto& o = f.one.coords();
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3;
    const T det = z[i] * w[j] - z[j] * w[i];
    if (sign(det) == 0) continue;
    const T alpha = (o[i] * w[j] - o[j] * w[i]) / det;
    const T beta = (z[i] * o[j] - z[j] * o[i]) / det;
    std::array<T, 3> p{};
    for (std::size_t k = 0; k < 3; ++k) p[k] = alpha * z[k] + v * beta * w[k];
    return ProjPoint<T>(p);
  }
  throw GeometryError("degenerate frame");
}

enum class GadgetKind { Add, Mul };

inline const char* to_string(GadgetKind k) { return k == GadgetKind::Add ? "ADD" : "MUL"; }

struct GadgetGroup {
  std::string name;
  std::vector<std::string> roles;  // collinear roles; "0", "1", "inf" refer to the frame
};

/**
 * Roles: anchors a, b (and f for MUL) on the anchor line, interior c, d, e,
 * inputs x, y and output z on l.
 */
template <class T>
struct GadgetInstance {
  GadgetKind kind = GadgetKind::Add;
  LineCoordinateFrame<T> frame = LineCoordinateFrame<T>::canonical();
  std::vector<std::pair<std::string, ProjPoint<T>>> points;
  std::vector<GadgetGroup> groups;
  bool degenerate = false;  // input equals the identity element

  const ProjPoint<T>& at(const std::string& role) const {
    if (role == "0") return frame.zero;
    if (role == "1") return frame.one;
    if (role == "inf") return frame.infinity;
    for (const auto& [r, p] : points) {
      if (r == role) return p;
    }
    throw GeometryError("gadget has no role '" + role + "'");
  }
  bool has(const std::string& role) const {
    for (const auto& [r, p] : points) {
      if (r == role) return true;
    }
    return false;
  }
  /// Sightline segments as (point on l, anchor) role pairs.
  std::vector<std::pair<std::string, std::string>> segments() const {
    if (kind == GadgetKind::Mul) return {{"x", "a"}, {"1", "b"}, {"y", "b"}, {"0", "f"}, {"z", "a"}};
    return {{"0", "a"}, {"x", "b"}, {"y", "a"}, {"z", "b"}};
  }
  GadgetInstance transformed(const ProjMap<T>& m) const {
    GadgetInstance g = *this;
    g.frame = frame.transformed(m);
    for (auto& [r, p] : g.points) p = m.apply(p);
    return g;
  }
};

namespace detail {

template <class T>
void check_anchors(const LineCoordinateFrame<T>& f, const ProjPoint<T>& a, const ProjPoint<T>& b) {
  if (a == b) throw GeometryError("gadget anchors coincide");
  const auto linf = join(a, b);
  if (!linf.contains(f.infinity)) throw GeometryError("gadget anchors must lie on a line through infinity");
  if (linf == f.line) throw GeometryError("gadget anchors lie on the frame line");
}

template <class T>
void check_interior(const GadgetInstance<T>& g, const ProjLine<T>& linf) {
  if (g.degenerate) return;
  for (const char* r : {"c", "d", "e"}) {
    const auto& p = g.at(r);
    if (g.frame.line.contains(p) || linf.contains(p)) {
      throw GeometryError(std::string("gadget point ") + r + " falls on l or on the anchor line");
    }
  }
}

}  // namespace detail

template <class T>
GadgetInstance<T> mul_gadget(const LineCoordinateFrame<T>& f, const ProjPoint<T>& x, const ProjPoint<T>& y,
                             const ProjPoint<T>& a, const ProjPoint<T>& b) {
  detail::check_anchors(f, a, b);
  const T vx = value(f, x), vy = value(f, y);
  if (sign(vx - T(1)) < 0 || sign(vy - vx) < 0) throw GeometryError("mul gadget needs 1 <= x <= y");
  const auto linf = join(a, b);
  GadgetInstance<T> g;
  g.kind = GadgetKind::Mul;
  g.frame = f;
  g.degenerate = x == f.one;
  const auto c = meet(join(a, x), join(b, f.one));
  const auto fp = g.degenerate ? f.infinity : meet(join(f.zero, c), linf);
  const auto d = g.degenerate ? y : meet(join(b, y), join(f.zero, c));
  const auto z = meet(f.line, join(d, a));
  const auto e = meet(join(a, z), join(b, f.one));
  g.points = {{"a", a}, {"b", b}, {"f", fp}, {"c", c}, {"d", d}, {"e", e}, {"x", x}, {"y", y}, {"z", z}};
  g.groups = {{"a-x", {"a", "c", "x"}},
              {"b-1", {"b", "e", "c", "1"}},
              {"b-y", {"b", "d", "y"}},
              {"f-0", {"f", "d", "c", "0"}},
              {"a-z", {"a", "e", "d", "z"}}};
  detail::check_interior(g, linf);
  return g;
}

template <class T>
GadgetInstance<T> add_gadget(const LineCoordinateFrame<T>& f, const ProjPoint<T>& x, const ProjPoint<T>& y,
                             const ProjPoint<T>& a, const ProjPoint<T>& b) {
  detail::check_anchors(f, a, b);
  const T vx = value(f, x), vy = value(f, y);
  if (sign(vx) < 0 || sign(vy - vx) < 0) throw GeometryError("add gadget needs 0 <= x <= y");
  const auto linf = join(a, b);
  GadgetInstance<T> g;
  g.kind = GadgetKind::Add;
  g.frame = f;
  g.degenerate = x == f.zero;
  const auto c = meet(join(a, f.zero), join(b, x));
  const auto d = g.degenerate ? y : meet(join(a, y), join(c, f.infinity));
  const auto z = meet(f.line, join(d, b));
  const auto e = meet(join(a, f.zero), join(b, z));
  g.points = {{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"e", e}, {"x", x}, {"y", y}, {"z", z}};
  g.groups = {{"a-0", {"a", "e", "c", "0"}},
              {"b-x", {"b", "c", "x"}},
              {"a-y", {"a", "d", "y"}},
              {"b-z", {"b", "e", "d", "z"}},
              {"c-d", {"c", "d", "inf"}}};
  detail::check_interior(g, linf);
  return g;
}

/// Exact audit: every group collinear and the output value correct.
template <class T>
std::optional<std::string> audit_gadget(const GadgetInstance<T>& g) {
  for (const auto& grp : g.groups) {
    std::vector<ProjPoint<T>> pts;
    for (const auto& r : grp.roles) {
      const auto& p = g.at(r);
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    for (std::size_t k = 2; k < pts.size(); ++k) {
      if (!collinear(pts[0], pts[1], pts[k])) return "group " + grp.name + " is not collinear";
    }
  }
  const T vx = value(g.frame, g.at("x")), vy = value(g.frame, g.at("y")), vz = value(g.frame, g.at("z"));
  const T want = g.kind == GadgetKind::Add ? vx + vy : vx * vy;
  if (!(vz == want)) return "output value " + vz.to_string() + " differs from " + want.to_string();
  return std::nullopt;
}

/// Anchor positions chosen for the next gadget in the canonical drawing.
template <class T>
struct AnchorPlacement {
  ProjPoint<T> a;
  ProjPoint<T> b;
  T epsilon;
  T threshold;
  std::size_t halvings = 0;
};

namespace detail {

template <class T>
T max_of(const T& a, const T& b) {
  return sign(a - b) >= 0 ? a : b;
}
template <class T>
T min_of(const T& a, const T& b) {
  return sign(a - b) <= 0 ? a : b;
}

/// x coordinate where the segment p-q reaches height h (p on y = 0, q on y = 1).
template <class T>
T x_at_height(const ProjPoint<T>& p, const ProjPoint<T>& q, const T& h) {
  return p.x() + h * (q.x() - p.x()) / (q.y() - p.y());
}

template <class T>
std::vector<std::pair<ProjPoint<T>, ProjPoint<T>>> gadget_segments(const GadgetInstance<T>& g) {
  std::vector<std::pair<ProjPoint<T>, ProjPoint<T>>> out;
  for (const auto& [lo, hi] : g.segments()) {
    if (g.at(lo) == g.at(hi) || !g.at(hi).is_affine()) continue;
    out.emplace_back(g.at(lo), g.at(hi));
  }
  return out;
}

}  // namespace detail

/**
 * Inductive placement in the canonical drawing (l: y = 0, anchors on y = 1).
 * `jitter` shifts both anchors, `spread` is the first anchor gap tried.
 * The new anchors go right of every earlier gadget, far enough that the new
 * sightlines leave the epsilon-strip above l to the right of all earlier
 * material, and close enough together that c, d, e sit above every earlier
 * interior point.
 */
inline AnchorPlacement<Rational> place_anchors(const std::vector<GadgetInstance<Rational>>& previous, GadgetKind kind,
                                              const ProjPoint<Rational>& x, const ProjPoint<Rational>& y,
                                              const std::vector<ProjPoint<Rational>>& ell_points,
                                              const Rational& jitter = Rational(0),
                                              const Rational& spread = Rational(1)) {
  using T = Rational;
  using detail::max_of;
  using detail::min_of;
  const auto frame = LineCoordinateFrame<T>::canonical();
  T low(1), top(0);
  for (const auto& g : previous) {
    for (const char* r : {"c", "d", "e"}) {
      const T h = g.at(r).y();
      if (sign(h) <= 0) continue;
      low = min_of(low, h);
      top = max_of(top, h);
    }
  }
  // Earlier sightlines also cross each other just above l.
  std::vector<std::pair<ProjPoint<T>, ProjPoint<T>>> earlier;
  for (const auto& g : previous) {
    for (const auto& s : detail::gadget_segments(g)) earlier.push_back(s);
  }
  for (std::size_t i = 0; i < earlier.size(); ++i) {
    for (std::size_t j = i + 1; j < earlier.size(); ++j) {
      const auto hit = segment_intersection(Segment<T>(earlier[i].first, earlier[i].second),
                                            Segment<T>(earlier[j].first, earlier[j].second));
      if (const auto* p = std::get_if<ProjPoint<T>>(&hit)) {
        if (sign(p->y()) > 0 && sign(p->y() - T(1)) < 0) low = min_of(low, p->y());
      }
    }
  }
  T eps = min_of(low, T(1) - top) / T(2);
  if (sign(eps) <= 0) throw GeometryError("earlier gadgets leave no room above l");
  std::vector<ProjPoint<T>> base_pts = ell_points;
  base_pts.push_back(frame.zero);
  base_pts.push_back(frame.one);
  base_pts.push_back(x);
  base_pts.push_back(y);
  T xl = base_pts.front().x(), xr = xl;
  for (const auto& p : base_pts) {
    xl = min_of(xl, p.x());
    xr = max_of(xr, p.x());
  }
  for (const auto& s : earlier) {
    const T at_eps = detail::x_at_height(s.first, s.second, eps);
    xl = min_of(xl, min_of(s.first.x(), at_eps));
    xr = max_of(xr, max_of(s.first.x(), at_eps));
  }
  T threshold = xr + (xr - xl + T(1)) / eps;
  for (int widen = 0; widen < 60; ++widen, threshold = threshold * T(2)) {
    const T base = threshold.floor() + T(1) + jitter;
    T delta = spread;
    for (std::size_t halvings = 0; halvings < 200; ++halvings, delta = delta / T(2)) {
      const ProjPoint<T> left(base, T(1)), right(base + delta, T(1));
      const auto& a = kind == GadgetKind::Add ? right : left;
      const auto& b = kind == GadgetKind::Add ? left : right;
      const auto g = kind == GadgetKind::Add ? add_gadget(frame, x, y, a, b) : mul_gadget(frame, x, y, a, b);
      bool above = true;
      for (const char* r : {"c", "d", "e"}) {
        const T h = g.at(r).y();
        if (sign(h) > 0) above = above && sign(h - top) > 0;
      }
      if (!above) continue;
      bool strip = true;
      for (const auto& ns : detail::gadget_segments(g)) {
        for (const auto& os : earlier) {
          const auto hit = segment_intersection(Segment<T>(ns.first, ns.second), Segment<T>(os.first, os.second));
          if (const auto* p = std::get_if<ProjPoint<T>>(&hit)) {
            strip = strip && sign(p->y()) > 0 && sign(p->y() - eps) < 0;
          } else if (std::holds_alternative<SegmentOverlap>(hit)) {
            strip = false;
          }
        }
      }
      if (!strip) break;
      return {a, b, eps, threshold, halvings};
    }
  }
  throw GeometryError("anchor placement did not converge");
}

}  // namespace pvg
