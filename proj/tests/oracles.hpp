#pragma once

// Test-only oracles and generators. Nothing here calls into the ray-sorting
// path of the library; the visibility oracle is the plain triple loop.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pvg/pvg_core.hpp"

namespace pvg::testing {

/// Deterministic generator independent of the standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Rational rational(long lo, long hi, long max_den) {
    const long den = range(1, max_den);
    return Rational(range(lo * den, hi * den), den);
  }
  bool coin(int percent) { return range(0, 99) < percent; }

 private:
  std::mt19937_64 eng_;
};

/// u ~ v iff no w lies strictly between them: exact parametric test.
template <class T>
VisibilityGraph naive_visibility(const PointSet<T>& ps) {
  VisibilityGraph g(ps.labels());
  for (std::size_t u = 0; u < ps.size(); ++u) {
    for (std::size_t v = u + 1; v < ps.size(); ++v) {
      bool blocked = false;
      const auto& a = ps.point(u);
      const auto& b = ps.point(v);
      for (std::size_t w = 0; w < ps.size() && !blocked; ++w) {
        if (w == u || w == v) continue;
        const auto& c = ps.point(w);
        const T dx = b.x() - a.x(), dy = b.y() - a.y();
        const T cx = c.x() - a.x(), cy = c.y() - a.y();
        if (sign(dx * cy - dy * cx) != 0) continue;
        // c = a + t (b - a) with 0 < t < 1 on the dominant axis.
        const T t = sign(dx) != 0 ? cx / dx : cy / dy;
        blocked = sign(t) > 0 && sign(t - T(1)) < 0;
      }
      if (!blocked) g.add_edge(u, v);
    }
  }
  return g;
}

/// Random rational point set; with `collinear` some points are forced onto
/// lines through earlier pairs.
inline PointSet<Rational> random_point_set(Rng& rng, std::size_t n, bool collinear) {
  PointSet<Rational> ps;
  std::size_t tries = 0;
  while (ps.size() < n && tries++ < 100 * n) {
    ProjPoint<Rational> p;
    if (collinear && ps.size() >= 2 && rng.coin(40)) {
      const auto& a = ps.point(static_cast<std::size_t>(rng.range(0, static_cast<long>(ps.size()) - 1)));
      const auto& b = ps.point(static_cast<std::size_t>(rng.range(0, static_cast<long>(ps.size()) - 1)));
      if (a == b) continue;
      const Rational t = rng.rational(-2, 3, 4);
      p = ProjPoint<Rational>(a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y()));
    } else if (collinear && rng.coin(20)) {
      p = ProjPoint<Rational>(Rational(rng.range(-4, 4)), Rational(rng.range(-4, 4)));
    } else {
      p = ProjPoint<Rational>(rng.rational(-20, 20, 7), rng.rational(-20, 20, 7));
    }
    if (ps.find_point(p)) continue;
    ps.add("q" + std::to_string(ps.size()), p);
  }
  return ps;
}

/// True iff some three points are collinear (brute force).
template <class T>
bool has_collinear_triple(const PointSet<T>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      for (std::size_t k = j + 1; k < ps.size(); ++k)
        if (orient(ps.point(i), ps.point(j), ps.point(k)) == 0) return true;
  return false;
}

inline ProjPoint<Rational> pt(long x, long y) { return ProjPoint<Rational>(Rational(x), Rational(y)); }

}  // namespace pvg::testing
