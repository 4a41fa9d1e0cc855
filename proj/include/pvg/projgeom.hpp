#pragma once

// Projective plane over an exact field: points, lines, incidence, orientation,
// open-segment intersection, projective maps and the cross-ratio.

#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "pvg/exactnum.hpp"

namespace pvg {

class GeometryError : public std::domain_error {
 public:
  explicit GeometryError(const std::string& what) : std::domain_error(what) {}
};

template <class T>
T det2(const T& a, const T& b, const T& c, const T& d) {
  return a * d - b * c;
}

template <class T>
T det3(const std::array<T, 3>& r0, const std::array<T, 3>& r1, const std::array<T, 3>& r2) {
  return r0[0] * det2(r1[1], r1[2], r2[1], r2[2]) - r0[1] * det2(r1[0], r1[2], r2[0], r2[2]) +
         r0[2] * det2(r1[0], r1[1], r2[0], r2[1]);
}

template <class T>
std::array<T, 3> cross3(const std::array<T, 3>& u, const std::array<T, 3>& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

namespace detail {

// Scales a nonzero homogeneous triple so that z = 1 when `prefer_z` and z != 0,
// otherwise so that the first nonzero entry is 1.
template <class T>
std::array<T, 3> canonical_triple(std::array<T, 3> v, bool prefer_z) {
  std::size_t pivot = 3;
  if (prefer_z && sign(v[2]) != 0) {
    pivot = 2;
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      if (sign(v[i]) != 0) {
        pivot = i;
        break;
      }
    }
  }
  if (pivot == 3) throw GeometryError("homogeneous triple is zero");
  const T s = v[pivot];
  for (auto& c : v) c = c / s;
  return v;
}

template <class T>
std::strong_ordering compare_triples(const std::array<T, 3>& a, const std::array<T, 3>& b) {
  for (std::size_t i = 0; i < 3; ++i) {
    const int s = sign(a[i] - b[i]);
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

}  // namespace detail

/// Point of the projective plane. Affine points are stored with z = 1, points
/// at infinity with their first nonzero coordinate equal to 1.
template <class T>
class ProjPoint {
 public:
  ProjPoint() : v_{T(0), T(0), T(1)} {}
  ProjPoint(T x, T y) : v_{std::move(x), std::move(y), T(1)} {}
  ProjPoint(T x, T y, T z) : v_(detail::canonical_triple<T>({std::move(x), std::move(y), std::move(z)}, true)) {}
  explicit ProjPoint(const std::array<T, 3>& v) : v_(detail::canonical_triple(v, true)) {}

  /// Point at infinity in direction (dx, dy).
  static ProjPoint at_infinity(T dx, T dy) { return ProjPoint(std::move(dx), std::move(dy), T(0)); }

  const T& x() const { return v_[0]; }
  const T& y() const { return v_[1]; }
  const T& z() const { return v_[2]; }
  const std::array<T, 3>& coords() const { return v_; }
  bool is_affine() const { return sign(v_[2]) != 0; }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) {
    return detail::compare_triples(a.v_, b.v_);
  }

  std::string to_string() const {
    if (is_affine()) return "(" + v_[0].to_string() + ", " + v_[1].to_string() + ")";
    return "[" + v_[0].to_string() + ":" + v_[1].to_string() + ":0]";
  }

 private:
  std::array<T, 3> v_;
};

/// Line a x + b y + c z = 0, stored with its first nonzero coefficient equal to 1.
template <class T>
class ProjLine {
 public:
  ProjLine(T a, T b, T c) : v_(detail::canonical_triple<T>({std::move(a), std::move(b), std::move(c)}, false)) {}
  explicit ProjLine(const std::array<T, 3>& v) : v_(detail::canonical_triple(v, false)) {}

  static ProjLine at_infinity() { return ProjLine(T(0), T(0), T(1)); }

  const T& a() const { return v_[0]; }
  const T& b() const { return v_[1]; }
  const T& c() const { return v_[2]; }
  const std::array<T, 3>& coords() const { return v_; }

  /// Signed evaluation; zero iff the point is incident.
  T eval(const ProjPoint<T>& p) const {
    return v_[0] * p.x() + v_[1] * p.y() + v_[2] * p.z();
  }
  bool contains(const ProjPoint<T>& p) const { return sign(eval(p)) == 0; }
  bool is_at_infinity() const { return sign(v_[0]) == 0 && sign(v_[1]) == 0; }

  friend bool operator==(const ProjLine& a, const ProjLine& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const ProjLine& a, const ProjLine& b) {
    return detail::compare_triples(a.v_, b.v_);
  }

  std::string to_string() const {
    return v_[0].to_string() + "*x + " + v_[1].to_string() + "*y + " + v_[2].to_string() + " = 0";
  }

 private:
  std::array<T, 3> v_;
};

template <class T>
ProjLine<T> join(const ProjPoint<T>& p, const ProjPoint<T>& q) {
  if (p == q) throw GeometryError("join of identical points " + p.to_string());
  return ProjLine<T>(cross3(p.coords(), q.coords()));
}

template <class T>
ProjPoint<T> meet(const ProjLine<T>& l1, const ProjLine<T>& l2) {
  if (l1 == l2) throw GeometryError("meet of identical lines " + l1.to_string());
  return ProjPoint<T>(cross3(l1.coords(), l2.coords()));
}

template <class T>
bool collinear(const ProjPoint<T>& p, const ProjPoint<T>& q, const ProjPoint<T>& r) {
  return sign(det3(p.coords(), q.coords(), r.coords())) == 0;
}

/// Orientation of an affine triple: +1 counterclockwise, -1 clockwise, 0 collinear.
template <class T>
int orient(const ProjPoint<T>& p, const ProjPoint<T>& q, const ProjPoint<T>& r) {
  if (!p.is_affine() || !q.is_affine() || !r.is_affine()) {
    throw GeometryError("orient requires affine points");
  }
  return sign(det2(q.x() - p.x(), q.y() - p.y(), r.x() - p.x(), r.y() - p.y()));
}

/// True iff affine point w lies on the open segment (u, v).
template <class T>
bool on_open_segment(const ProjPoint<T>& u, const ProjPoint<T>& v, const ProjPoint<T>& w) {
  if (w == u || w == v) return false;
  if (orient(u, v, w) != 0) return false;
  const T dx = v.x() - u.x();
  const T dy = v.y() - u.y();
  const T t = (w.x() - u.x()) * dx + (w.y() - u.y()) * dy;
  const T len = dx * dx + dy * dy;
  return sign(t) > 0 && sign(len - t) > 0;
}

/// Segment between two distinct affine points.
template <class T>
class Segment {
 public:
  Segment(ProjPoint<T> a, ProjPoint<T> b) : a_(std::move(a)), b_(std::move(b)) {
    if (!a_.is_affine() || !b_.is_affine()) throw GeometryError("segment endpoints must be affine");
    if (a_ == b_) throw GeometryError("degenerate segment at " + a_.to_string());
  }
  const ProjPoint<T>& first() const { return a_; }
  const ProjPoint<T>& second() const { return b_; }
  ProjLine<T> line() const { return join(a_, b_); }
  bool contains_open(const ProjPoint<T>& w) const { return on_open_segment(a_, b_, w); }

 private:
  ProjPoint<T> a_;
  ProjPoint<T> b_;
};

/// Collinear open segments sharing a sub-segment of positive length.
struct SegmentOverlap {
  friend bool operator==(SegmentOverlap, SegmentOverlap) = default;
};

template <class T>
using SegmentIntersection = std::variant<std::monostate, ProjPoint<T>, SegmentOverlap>;

/// Intersection of two open segments: empty, a single crossing point, or an overlap.
template <class T>
SegmentIntersection<T> segment_intersection(const Segment<T>& s1, const Segment<T>& s2) {
  const auto& a = s1.first();
  const auto& b = s1.second();
  const auto& c = s2.first();
  const auto& d = s2.second();
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  if (o1 == 0 && o2 == 0) {
    // Parametrize along s1; overlap iff the open parameter intervals meet.
    const T dx = b.x() - a.x();
    const T dy = b.y() - a.y();
    const T len = dx * dx + dy * dy;
    auto param = [&](const ProjPoint<T>& p) { return ((p.x() - a.x()) * dx + (p.y() - a.y()) * dy) / len; };
    T lo = param(c);
    T hi = param(d);
    if (sign(lo - hi) > 0) std::swap(lo, hi);
    const T zero(0);
    const T one(1);
    const T& left = sign(lo - zero) > 0 ? lo : zero;
    const T& right = sign(hi - one) < 0 ? hi : one;
    if (sign(right - left) > 0) return SegmentOverlap{};
    return std::monostate{};
  }
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return meet(s1.line(), s2.line());
  return std::monostate{};
}

/// Nonsingular 3x3 matrix acting on homogeneous coordinates.
template <class T>
class ProjMap {
 public:
  using Matrix = std::array<std::array<T, 3>, 3>;

  explicit ProjMap(Matrix m) : m_(std::move(m)) {
    if (sign(det3(m_[0], m_[1], m_[2])) == 0) throw GeometryError("singular projective map");
  }

  static ProjMap identity() {
    return ProjMap({{{T(1), T(0), T(0)}, {T(0), T(1), T(0)}, {T(0), T(0), T(1)}}});
  }
  static ProjMap translation(const T& dx, const T& dy) {
    return ProjMap({{{T(1), T(0), dx}, {T(0), T(1), dy}, {T(0), T(0), T(1)}}});
  }
  static ProjMap affine(const T& a, const T& b, const T& c, const T& d, const T& e, const T& f) {
    return ProjMap({{{a, b, c}, {d, e, f}, {T(0), T(0), T(1)}}});
  }

  const Matrix& matrix() const { return m_; }
  T determinant() const { return det3(m_[0], m_[1], m_[2]); }

  ProjPoint<T> apply(const ProjPoint<T>& p) const {
    const auto& v = p.coords();
    std::array<T, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = m_[i][0] * v[0] + m_[i][1] * v[1] + m_[i][2] * v[2];
    return ProjPoint<T>(out);
  }

  /// Image of a line: coefficients transform by the inverse transpose.
  ProjLine<T> apply(const ProjLine<T>& l) const {
    const Matrix inv = inverse().m_;
    const auto& v = l.coords();
    std::array<T, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = inv[0][i] * v[0] + inv[1][i] * v[1] + inv[2][i] * v[2];
    return ProjLine<T>(out);
  }

  ProjMap inverse() const {
    const T det = determinant();
    Matrix adj{};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
        const std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        adj[i][j] = det2(m_[r0][c0], m_[r0][c1], m_[r1][c0], m_[r1][c1]) / det;
      }
    }
    return ProjMap(adj);
  }

  friend ProjMap operator*(const ProjMap& f, const ProjMap& g) {
    Matrix out{};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        out[i][j] = f.m_[i][0] * g.m_[0][j] + f.m_[i][1] * g.m_[1][j] + f.m_[i][2] * g.m_[2][j];
      }
    }
    return ProjMap(out);
  }

 private:
  Matrix m_;
};

template <class T>
ProjPoint<T> apply(const ProjMap<T>& m, const ProjPoint<T>& p) {
  return m.apply(p);
}

namespace detail {

// Two-coordinate representation of points on a common line: drops the
// coordinate whose line coefficient is nonzero, which is a linear bijection
// from the line's 2-D subspace onto the plane.
template <class T>
std::size_t dropped_axis(const ProjLine<T>& l) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (sign(l.coords()[i]) != 0) return i;
  }
  return 2;
}

template <class T>
T bracket(const ProjPoint<T>& p, const ProjPoint<T>& q, std::size_t drop) {
  const std::size_t i = drop == 0 ? 1 : 0;
  const std::size_t j = drop == 2 ? 1 : 2;
  return det2(p.coords()[i], q.coords()[i], p.coords()[j], q.coords()[j]);
}

}  // namespace detail

/**
 * Cross-ratio (a,b;c,d) = |a,c| |b,d| / (|a,d| |b,c|) of four collinear points,
 * where |x,y| is the 2x2 determinant of the points' coordinates on their line.
 * Points at infinity are allowed. Throws when the points are not collinear or
 * the denominator vanishes.
 */
template <class T>
T cross_ratio(const ProjPoint<T>& a, const ProjPoint<T>& b, const ProjPoint<T>& c,
              const ProjPoint<T>& d) {
  const ProjPoint<T>* pts[4] = {&a, &b, &c, &d};
  std::optional<ProjLine<T>> line;
  for (int i = 0; i < 4 && !line; ++i) {
    for (int j = i + 1; j < 4 && !line; ++j) {
      if (!(*pts[i] == *pts[j])) line = join(*pts[i], *pts[j]);
    }
  }
  if (!line) throw GeometryError("cross-ratio of four coincident points");
  for (const auto* p : pts) {
    if (!line->contains(*p)) throw GeometryError("cross-ratio of non-collinear points");
  }
  const std::size_t drop = detail::dropped_axis(*line);
  const T ad = detail::bracket(a, d, drop);
  const T bc = detail::bracket(b, c, drop);
  if (sign(ad) == 0 || sign(bc) == 0) throw GeometryError("degenerate cross-ratio (coincident points)");
  return detail::bracket(a, c, drop) * detail::bracket(b, d, drop) / (ad * bc);
}

}  // namespace pvg
