#pragma once

/**
 * @file fan.hpp
 * @brief Rigidity constructions as exact point sets.
 *
 * Every construction is described by strokes (closed segments). The point set
 * is the set of all pairwise contacts of strokes, each stroke becomes a
 * declared collinear group, and the visibility graph is computed from the
 * exact coordinates. Builders are deterministic in (spec, seed).
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pvg/pvg_core.hpp"

namespace pvg {

struct CollinearGroup {
  std::string name;
  std::string kind;
  std::vector<std::string> members;
};

template <class T>
struct ConstructionOutput {
  std::string kind;
  PointSet<T> points;
  VisibilityGraph graph;
  std::vector<std::vector<std::string>> roles;  // parallel to points
  std::vector<CollinearGroup> declared;
  std::vector<CollinearGroup> incidental;   // undeclared collinear lines that were tolerated
  std::vector<CollinearGroup> annotations;  // groupings that are not collinear (crossing groups, multi-points)
  std::vector<std::pair<std::string, std::string>> meta;
  std::optional<ProjMap<T>> frame_map;  // canonical drawing -> output coordinates

  void set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta) {
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    }
    meta.emplace_back(key, value);
  }
  std::string meta_value(const std::string& key) const {
    for (const auto& kv : meta) {
      if (kv.first == key) return kv.second;
    }
    return {};
  }
  bool has_role(std::size_t i, const std::string& role) const {
    const auto& r = roles.at(i);
    return std::find(r.begin(), r.end(), role) != r.end();
  }
  void add_role(std::size_t i, const std::string& role) {
    if (!has_role(i, role)) roles.at(i).push_back(role);
  }
  const CollinearGroup* group(const std::string& name) const {
    for (const auto& g : declared) {
      if (g.name == name) return &g;
    }
    return nullptr;
  }
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Raw 64-bit draws; fractions use plain modulo so results do not depend on the
// standard library's distribution implementations.
class DrawRng {
 public:
  explicit DrawRng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  /// k / den with k in [1, den - 1].
  Rational fraction(long den) {
    return Rational(1 + static_cast<long>(next() % static_cast<std::uint64_t>(den - 1)), den);
  }

 private:
  std::mt19937_64 eng_;
};

template <class T>
struct Stroke {
  std::string name;
  std::string kind;
  ProjPoint<T> a;
  ProjPoint<T> b;
};

// Contact point of two closed strokes, if any. Collinear strokes may only
// touch at a shared endpoint.
template <class T>
std::optional<ProjPoint<T>> stroke_contact(const Stroke<T>& s, const Stroke<T>& t) {
  const bool shared = s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
  if (shared) {
    const ProjPoint<T>& common = (s.a == t.a || s.a == t.b) ? s.a : s.b;
    const ProjPoint<T>& other = common == t.a ? t.b : t.a;
    if (orient(s.a, s.b, other) != 0) return common;
  }
  const int o1 = orient(s.a, s.b, t.a);
  const int o2 = orient(s.a, s.b, t.b);
  if (o1 == 0 && o2 == 0) {
    const auto hit = segment_intersection(Segment<T>(s.a, s.b), Segment<T>(t.a, t.b));
    if (std::holds_alternative<SegmentOverlap>(hit) || (s.a == t.a && s.b == t.b) || (s.a == t.b && s.b == t.a)) {
      throw GeometryError("strokes '" + s.name + "' and '" + t.name + "' overlap");
    }
    if (shared) return (s.a == t.a || s.a == t.b) ? s.a : s.b;
    return std::nullopt;
  }
  if (o1 * o2 > 0) return std::nullopt;
  const int o3 = orient(t.a, t.b, s.a);
  const int o4 = orient(t.a, t.b, s.b);
  if (o3 * o4 > 0) return std::nullopt;
  return meet(join(s.a, s.b), join(t.a, t.b));
}

template <class T>
struct Arrangement {
  std::vector<Stroke<T>> strokes;
  std::map<ProjPoint<T>, std::vector<std::size_t>> incidence;  // point -> strokes through it
  std::map<ProjPoint<T>, std::vector<std::string>> tags;
};

template <class T>
bool on_closed(const Stroke<T>& s, const ProjPoint<T>& p) {
  return p == s.a || p == s.b || on_open_segment(s.a, s.b, p);
}

template <class T>
Arrangement<T> arrange(std::vector<Stroke<T>> strokes,
                       const std::vector<std::pair<std::string, ProjPoint<T>>>& marked = {}) {
  Arrangement<T> arr;
  arr.strokes = std::move(strokes);
  const std::size_t m = arr.strokes.size();
  std::vector<std::vector<std::pair<ProjPoint<T>, std::size_t>>> found(m);
  parallel_for(
      m,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          if (auto p = stroke_contact(arr.strokes[i], arr.strokes[j])) found[i].emplace_back(std::move(*p), j);
        }
      },
      4);
  for (std::size_t i = 0; i < m; ++i) {
    for (auto& [p, j] : found[i]) {
      auto& v = arr.incidence[p];
      v.push_back(i);
      v.push_back(j);
    }
  }
  for (const auto& [tag, p] : marked) {
    if (!p.is_affine()) throw GeometryError("marked point '" + tag + "' is at infinity");
    auto& v = arr.incidence[p];
    for (std::size_t i = 0; i < m; ++i) {
      if (on_closed(arr.strokes[i], p)) v.push_back(i);
    }
    arr.tags[p].push_back(tag);
  }
  for (auto& [p, v] : arr.incidence) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return arr;
}

inline std::string padded(const std::string& prefix, std::size_t i, std::size_t count) {
  std::size_t width = 2;
  for (std::size_t c = 100; c <= count; c *= 10) ++width;
  std::ostringstream os;
  os << prefix << std::setw(static_cast<int>(width)) << std::setfill('0') << i;
  return os.str();
}

// Points sorted by coordinates, labelled prefix + zero-padded index.
template <class T>
ConstructionOutput<T> assemble(std::string kind, const Arrangement<T>& arr, const std::string& prefix = "v") {
  ConstructionOutput<T> out;
  out.kind = std::move(kind);
  const std::size_t n = arr.incidence.size();
  std::vector<std::vector<std::size_t>> on_stroke(arr.strokes.size());
  std::size_t idx = 0;
  for (const auto& [p, strokes] : arr.incidence) {
    out.points.add(padded(prefix, idx, n), p);
    std::vector<std::string> r;
    for (std::size_t s : strokes) {
      r.push_back(arr.strokes[s].name);
      on_stroke[s].push_back(idx);
    }
    if (auto it = arr.tags.find(p); it != arr.tags.end()) {
      for (const auto& t : it->second) r.push_back(t);
    }
    out.roles.push_back(std::move(r));
    ++idx;
  }
  for (std::size_t s = 0; s < arr.strokes.size(); ++s) {
    auto& members = on_stroke[s];
    if (members.size() < 2) continue;
    const auto& a = arr.strokes[s].a;
    std::vector<T> dist(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto& q = out.points.point(members[k]);
      const T dx = q.x() - a.x();
      const T dy = q.y() - a.y();
      dist[k] = dx * dx + dy * dy;
    }
    std::vector<std::size_t> order(members.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sign(dist[x] - dist[y]) < 0; });
    CollinearGroup g{arr.strokes[s].name, arr.strokes[s].kind, {}};
    for (std::size_t k : order) g.members.push_back(out.points.label(members[k]));
    out.declared.push_back(std::move(g));
  }
  out.graph = visibility_graph(out.points);
  return out;
}

template <class T>
T power_of_two_below(const T& bound) {
  // Largest 2^-k (k >= 0) that is <= bound; bound must be positive.
  if (sign(bound) <= 0) throw GeometryError("power_of_two_below needs a positive bound");
  T e(1);
  while (sign(e - bound) > 0) e = e / T(2);
  return e;
}

template <class T>
std::string scalar_list(const std::vector<T>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x.to_string();
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Collinearity audit
// ---------------------------------------------------------------------------

/**
 * Maximal lines holding at least `min_size` points, each as sorted indices.
 * Above `exhaustive_limit` points only lines through a strided sample of
 * origins are found; `sampled` reports that.
 */
template <class T>
std::vector<std::vector<std::size_t>> collinear_lines(const PointSet<T>& ps, std::size_t min_size = 3,
                                                      std::size_t exhaustive_limit = 2000, bool* sampled = nullptr) {
  const std::size_t n = ps.size();
  std::vector<std::size_t> origins;
  const bool sample = n > exhaustive_limit;
  const std::size_t stride = sample ? (n + exhaustive_limit - 1) / exhaustive_limit : 1;
  for (std::size_t i = 0; i < n; i += stride) origins.push_back(i);
  if (sampled) *sampled = sample;
  const auto lifted = detail::lift_all(ps);
  std::vector<std::vector<std::vector<std::size_t>>> per(origins.size());
  detail::parallel_for(
      origins.size(),
      [&](std::size_t k) {
        const std::size_t i = origins[k];
        for (auto& members : detail::direction_classes(i, lifted, true)) {
          if (members.size() + 1 < min_size) continue;
          members.push_back(i);
          std::sort(members.begin(), members.end());
          if (!sample && members.front() != i) continue;
          per[k].push_back(std::move(members));
        }
      },
      8);
  std::set<std::vector<std::size_t>> all;
  for (auto& v : per) {
    for (auto& line : v) all.insert(std::move(line));
  }
  return {all.begin(), all.end()};
}

struct CollinearityAudit {
  std::vector<std::vector<std::size_t>> undeclared;  // maximal lines not inside a single declared group
  std::size_t lines = 0;
  bool sampled = false;
};

template <class T>
CollinearityAudit audit_collinearity(const ConstructionOutput<T>& out, std::size_t exhaustive_limit = 2000) {
  CollinearityAudit audit;
  const auto& ps = out.points;
  std::vector<std::vector<std::size_t>> groups_of(ps.size());
  for (std::size_t g = 0; g < out.declared.size(); ++g) {
    for (const auto& l : out.declared[g].members) groups_of[ps.index_of(l)].push_back(g);
  }
  for (auto& v : groups_of) std::sort(v.begin(), v.end());
  const auto lines = collinear_lines(ps, 3, exhaustive_limit, &audit.sampled);
  audit.lines = lines.size();
  for (const auto& line : lines) {
    std::vector<std::size_t> common = groups_of[line.front()];
    for (std::size_t k = 1; k < line.size() && !common.empty(); ++k) {
      std::vector<std::size_t> next;
      std::set_intersection(common.begin(), common.end(), groups_of[line[k]].begin(), groups_of[line[k]].end(),
                            std::back_inserter(next));
      common = std::move(next);
    }
    if (common.empty()) audit.undeclared.push_back(line);
  }
  return audit;
}

/// Checks that every declared group is exactly collinear; returns the first offender.
template <class T>
std::optional<std::string> check_declared_collinear(const ConstructionOutput<T>& out) {
  for (const auto& g : out.declared) {
    if (g.members.size() < 3) continue;
    const auto& a = out.points.point(out.points.index_of(g.members[0]));
    const auto& b = out.points.point(out.points.index_of(g.members[1]));
    for (std::size_t k = 2; k < g.members.size(); ++k) {
      if (!collinear(a, b, out.points.point(out.points.index_of(g.members[k])))) {
        return "group '" + g.name + "': " + g.members[0] + ", " + g.members[1] + ", " + g.members[k] +
               " are not collinear";
      }
    }
  }
  return std::nullopt;
}

template <class T>
CollinearGroup make_incidental(const ConstructionOutput<T>& out, const std::vector<std::size_t>& line, std::size_t k) {
  CollinearGroup g{"C" + std::to_string(k + 1), "incidental", {}};
  for (std::size_t i : line) g.members.push_back(out.points.label(i));
  return g;
}

// ---------------------------------------------------------------------------
// Fans
// ---------------------------------------------------------------------------

template <class T>
struct FanSpec {
  ProjLine<T> l{T(0), T(1), T(0)};
  ProjLine<T> lprime{T(1), T(0), T(0)};
  std::vector<Segment<T>> segments;
  std::vector<std::string> names;
  /// Fractions of the smallest endpoint parameter: s1 on l, s2 on l, s1 on l', s2 on l'.
  std::optional<std::array<T, 4>> s1_s2_hint;
  bool allow_multiple_crossings = false;
  std::uint64_t seed = 1;
  std::size_t max_attempts = 64;
};

namespace detail {

template <class T>
struct Vec2 {
  T x;
  T y;
};

template <class T>
Vec2<T> vsub(const ProjPoint<T>& a, const ProjPoint<T>& b) {
  return {a.x() - b.x(), a.y() - b.y()};
}
template <class T>
ProjPoint<T> vadd(const ProjPoint<T>& p, const Vec2<T>& v, const T& s) {
  return ProjPoint<T>(p.x() + s * v.x, p.y() + s * v.y);
}
template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x * b.x + a.y * b.y;
}
template <class T>
T cross(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x * b.y - a.y * b.x;
}

template <class T>
std::string segment_text(const Segment<T>& s) {
  return s.first().to_string() + "-" + s.second().to_string();
}

}  // namespace detail

/**
 * Fan of a segment set: rays from the apex through every crossing, the two
 * boundary lines as rays, two extra segments s1, s2 nearest the apex, and a
 * point at every contact. s1/s2 are redrawn until no undeclared collinearity
 * involves them.
 */
template <class T>
ConstructionOutput<T> build_fan(const FanSpec<T>& spec) {
  using detail::Vec2;
  if (spec.segments.empty()) throw GeometryError("fan needs at least one segment");
  const ProjPoint<T> p = meet(spec.l, spec.lprime);
  if (!p.is_affine()) throw GeometryError("fan lines must meet in an affine apex");
  const std::size_t n = spec.segments.size();
  std::vector<ProjPoint<T>> on_l, on_lp;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = spec.segments[i];
    const bool f_l = spec.l.contains(s.first()), s_l = spec.l.contains(s.second());
    const bool f_lp = spec.lprime.contains(s.first()), s_lp = spec.lprime.contains(s.second());
    if (f_l && s_lp && !f_lp && !s_l) {
      on_l.push_back(s.first());
      on_lp.push_back(s.second());
    } else if (s_l && f_lp && !f_l && !s_lp) {
      on_l.push_back(s.second());
      on_lp.push_back(s.first());
    } else {
      throw GeometryError("segment " + std::to_string(i + 1) + " does not join l and l' away from the apex");
    }
  }
  const Vec2<T> u = detail::vsub(on_l[0], p);
  const Vec2<T> v = detail::vsub(on_lp[0], p);
  std::vector<T> t(n), tp(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = detail::dot(detail::vsub(on_l[i], p), u) / detail::dot(u, u);
    tp[i] = detail::dot(detail::vsub(on_lp[i], p), v) / detail::dot(v, v);
    if (sign(t[i]) <= 0 || sign(tp[i]) <= 0) {
      throw GeometryError("segment " + std::to_string(i + 1) + " is not inside the wedge");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (t[i] == t[j] || tp[i] == tp[j]) {
        throw GeometryError("segments " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                            " share an endpoint");
      }
    }
  }
  std::map<ProjPoint<T>, std::vector<std::size_t>> crossings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sign(t[i] - t[j]) * sign(tp[i] - tp[j]) < 0) {
        auto& v2 = crossings[meet(spec.segments[i].line(), spec.segments[j].line())];
        v2.push_back(i);
        v2.push_back(j);
      }
    }
  }
  std::size_t multi = 0;
  for (auto& [x, segs] : crossings) {
    std::sort(segs.begin(), segs.end());
    segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
    if (segs.size() > 2) {
      if (!spec.allow_multiple_crossings) {
        throw GeometryError("three or more segments cross at " + x.to_string());
      }
      ++multi;
    }
  }
  // One ray per crossing direction, ordered from l towards l'.
  std::map<ProjPoint<T>, ProjPoint<T>> ray_dir;
  for (const auto& [x, segs] : crossings) {
    ray_dir.emplace(ProjPoint<T>::at_infinity(x.x() - p.x(), x.y() - p.y()), x);
  }
  std::vector<ProjPoint<T>> ray_through;
  for (const auto& [d, x] : ray_dir) ray_through.push_back(x);
  const int turn = sign(detail::cross(u, v));
  std::sort(ray_through.begin(), ray_through.end(), [&](const ProjPoint<T>& a, const ProjPoint<T>& b) {
    return sign(detail::cross(detail::vsub(a, p), detail::vsub(b, p))) == turn;
  });

  std::vector<detail::Stroke<T>> base;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = i < spec.names.size() ? spec.names[i] : "S" + std::to_string(i + 1);
    base.push_back({name, "segment", on_l[i], on_lp[i]});
  }
  for (std::size_t r = 0; r < ray_through.size(); ++r) {
    const Vec2<T> d = detail::vsub(ray_through[r], p);
    const ProjLine<T> line = join(p, ray_through[r]);
    T reach(1);
    for (const auto& s : spec.segments) {
      const auto q = meet(line, s.line());
      if (!q.is_affine()) continue;
      const T lam = detail::dot(detail::vsub(q, p), d) / detail::dot(d, d);
      if (sign(lam - reach) > 0) reach = lam;
    }
    base.push_back({"R" + std::to_string(r + 1), "ray", p, detail::vadd(p, d, reach + T(1))});
  }
  const T tmax = *std::max_element(t.begin(), t.end(), [](const T& a, const T& b) { return sign(a - b) < 0; });
  const T tpmax = *std::max_element(tp.begin(), tp.end(), [](const T& a, const T& b) { return sign(a - b) < 0; });
  const T tmin = *std::min_element(t.begin(), t.end(), [](const T& a, const T& b) { return sign(a - b) < 0; });
  const T tpmin = *std::min_element(tp.begin(), tp.end(), [](const T& a, const T& b) { return sign(a - b) < 0; });
  base.push_back({"l", "boundary", p, detail::vadd(p, u, tmax + T(1))});
  base.push_back({"lprime", "boundary", p, detail::vadd(p, v, tpmax + T(1))});

  std::string text;
  for (const auto& s : spec.segments) text += detail::segment_text(s) + ";";
  detail::DrawRng rng(detail::fnv1a(text) ^ spec.seed);
  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::array<T, 4> h;
    if (attempt == 0 && spec.s1_s2_hint) {
      h = *spec.s1_s2_hint;
    } else {
      for (auto& x : h) x = T(rng.fraction(1009));
      if (sign(h[0] - h[1]) > 0) std::swap(h[0], h[1]);
      if (sign(h[2] - h[3]) > 0) std::swap(h[2], h[3]);
    }
    for (const auto& x : h) {
      if (sign(x) <= 0 || sign(x - T(1)) >= 0) throw GeometryError("s1/s2 parameters must lie in (0, 1)");
    }
    if (sign(h[1] - h[0]) <= 0 || sign(h[3] - h[2]) <= 0) continue;
    auto strokes = base;
    strokes.push_back({"s1", "aux", detail::vadd(p, u, h[0] * tmin), detail::vadd(p, v, h[2] * tpmin)});
    strokes.push_back({"s2", "aux", detail::vadd(p, u, h[1] * tmin), detail::vadd(p, v, h[3] * tpmin)});
    auto out = detail::assemble("fan", detail::arrange(std::move(strokes)));
    const auto apex = *out.points.find_point(p);
    out.add_role(apex, "apex");
    const auto audit = audit_collinearity(out);
    bool clash = false;
    for (const auto& line : audit.undeclared) {
      for (std::size_t i : line) clash = clash || out.has_role(i, "s1") || out.has_role(i, "s2");
    }
    if (clash) continue;
    for (std::size_t k = 0; k < audit.undeclared.size(); ++k) {
      out.incidental.push_back(make_incidental(out, audit.undeclared[k], k));
    }
    std::size_t m = 0;
    for (const auto& [x, segs] : crossings) {
      if (segs.size() < 3) continue;
      CollinearGroup g{"X" + std::to_string(++m), "multipoint", {out.points.label(*out.points.find_point(x))}};
      out.annotations.push_back(std::move(g));
    }
    out.set_meta("seed", std::to_string(spec.seed));
    out.set_meta("attempts", std::to_string(attempt + 1));
    out.set_meta("segments", std::to_string(n));
    out.set_meta("crossings", std::to_string(crossings.size()));
    out.set_meta("multipoints", std::to_string(multi));
    out.set_meta("rays", std::to_string(ray_through.size()));
    out.set_meta("apex", out.points.label(apex));
    out.set_meta("s1_s2", detail::scalar_list(std::vector<T>(h.begin(), h.end())));
    out.set_meta("audit", audit.sampled ? "sampled" : "exhaustive");
    return out;
  }
  throw GeometryError("could not place s1, s2 free of accidental collinearities after " +
                      std::to_string(spec.max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Generalized fans
// ---------------------------------------------------------------------------

/**
 * Canonical drawing: l is y = 0, l' is y = height, the apex is the horizontal
 * point at infinity. Segments join l and l'.
 */
template <class T>
struct GenFanSpec {
  T height = T(1);
  std::vector<Segment<T>> segments;
  std::vector<std::string> names;
  std::vector<T> bundle_heights;  // lowest ray of each middle bundle
  std::vector<T> plain_rays;      // heights of single fan-style rays
  bool rays_for_singletons = false;
  std::vector<std::vector<ProjPoint<T>>> declared_groups;  // expected I_1 > ... > I_k, optional
  std::vector<std::pair<std::string, ProjPoint<T>>> marked_points;  // extra points on l or l'
  std::size_t bundle_size = 2;
  std::size_t extension_count = 2;
  bool faithful = false;
  std::optional<T> epsilon;
  std::uint64_t seed = 1;
  std::size_t max_attempts = 32;
};

/// Bundle size 5n and extension count (5n)^4 for n segments.
inline std::pair<std::size_t, std::size_t> faithful_parameters(std::size_t n) {
  const std::size_t b = 5 * n;
  return {b, b * b * b * b};
}

template <class T>
ConstructionOutput<T> build_generalized_fan(const GenFanSpec<T>& spec) {
  const T& H = spec.height;
  if (sign(H) <= 0) throw GeometryError("height must be positive");
  const std::size_t n = spec.segments.size();
  if (n == 0) throw GeometryError("generalized fan needs at least one segment");
  std::vector<ProjPoint<T>> bottom, top;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = spec.segments[i];
    if (sign(s.first().y()) == 0 && s.second().y() == H) {
      bottom.push_back(s.first());
      top.push_back(s.second());
    } else if (sign(s.second().y()) == 0 && s.first().y() == H) {
      bottom.push_back(s.second());
      top.push_back(s.first());
    } else {
      throw GeometryError("segment " + std::to_string(i + 1) + " does not join y = 0 and y = height");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (bottom[i] == bottom[j] && top[i] == top[j]) {
        throw GeometryError("segments " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide");
      }
    }
  }
  std::map<ProjPoint<T>, std::vector<std::size_t>> crossings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sign(bottom[i].x() - bottom[j].x()) * sign(top[i].x() - top[j].x()) < 0) {
        auto& v = crossings[meet(spec.segments[i].line(), spec.segments[j].line())];
        v.push_back(i);
        v.push_back(j);
      }
    }
  }
  auto less = [](const T& a, const T& b) { return sign(a - b) < 0; };
  T dmin = H / T(2);
  for (const auto& [x, segs] : crossings) {
    if (less(x.y(), dmin)) dmin = x.y();
    if (less(H - x.y(), dmin)) dmin = H - x.y();
  }
  std::size_t B = spec.bundle_size, E = spec.extension_count;
  if (spec.faithful) std::tie(B, E) = faithful_parameters(n);
  if (B < 1 || E < 1) throw GeometryError("bundle size and extension count must be positive");
  if (!spec.faithful && (B < 2 || E < 2)) throw GeometryError("scaled mode needs bundle size and extension count >= 2");
  const T span_ext = T(static_cast<long>(B + E));

  std::vector<T> bundles = spec.bundle_heights;
  std::sort(bundles.begin(), bundles.end(), less);
  T eps;
  if (spec.epsilon) {
    eps = *spec.epsilon;
  } else {
    T cap = dmin / (span_ext + T(1));
    for (std::size_t k = 0; k < bundles.size(); ++k) {
      T next = H - dmin;
      for (const auto& [x, segs] : crossings) {
        if (less(bundles[k], x.y()) && less(x.y(), next)) next = x.y();
      }
      if (k + 1 < bundles.size() && less(bundles[k + 1], next)) next = bundles[k + 1];
      for (const auto& r : spec.plain_rays) {
        if (less(bundles[k], r) && less(r, next)) next = r;
      }
      const T room = (next - bundles[k]) / T(static_cast<long>(B + 1));
      if (sign(room) > 0 && less(room, cap)) cap = room;
    }
    eps = detail::power_of_two_below(cap);
  }
  if (sign(eps) <= 0) throw GeometryError("epsilon must be positive");
  const T ext = span_ext * eps;
  if (!less(ext, dmin) || !less(T(2) * ext, H)) {
    throw GeometryError("epsilon violates the spacing invariant: (B+E)*epsilon = " + ext.to_string() +
                        " must be below " + dmin.to_string());
  }
  const T lo = ext, hi = H - ext;
  for (std::size_t k = 0; k < bundles.size(); ++k) {
    const T b0 = bundles[k];
    const T b1 = b0 + T(static_cast<long>(B - 1)) * eps;
    if (!less(lo, b0) || !less(b1, hi)) throw GeometryError("bundle at " + b0.to_string() + " overlaps an extended bundle");
    if (k + 1 < bundles.size() && !less(b1, bundles[k + 1])) throw GeometryError("bundles overlap at " + b0.to_string());
    for (const auto& [x, segs] : crossings) {
      if (!less(x.y(), b0) && !less(b1, x.y())) {
        throw GeometryError("bundle at " + b0.to_string() + " contains the crossing " + x.to_string());
      }
    }
  }
  // Crossing groups, top to bottom, separated by bundles.
  std::vector<std::vector<ProjPoint<T>>> groups(bundles.size() + 1);
  for (const auto& [x, segs] : crossings) {
    std::size_t above = 0;
    for (const auto& b : bundles) above += less(x.y(), b) ? 1 : 0;
    groups[above].push_back(x);
  }
  std::vector<std::vector<ProjPoint<T>>> nonempty;
  for (auto& g : groups) {
    if (!g.empty()) {
      std::sort(g.begin(), g.end());
      nonempty.push_back(g);
    }
  }
  if (!spec.declared_groups.empty()) {
    auto want = spec.declared_groups;
    for (auto& g : want) std::sort(g.begin(), g.end());
    if (want != nonempty) throw GeometryError("bundle positions do not separate the declared groups");
  }
  std::vector<T> plain = spec.plain_rays;
  if (spec.rays_for_singletons) {
    for (const auto& g : nonempty) {
      if (g.size() == 1) plain.push_back(g.front().y());
    }
  }
  std::sort(plain.begin(), plain.end(), less);
  plain.erase(std::unique(plain.begin(), plain.end()), plain.end());
  for (const auto& r : plain) {
    if (!less(lo, r) || !less(r, hi)) throw GeometryError("plain ray at " + r.to_string() + " is inside an extended bundle");
    for (const auto& b : bundles) {
      for (std::size_t k = 0; k < B; ++k) {
        if (r == b + T(static_cast<long>(k)) * eps) throw GeometryError("plain ray coincides with a bundle ray");
      }
    }
  }

  T xmin = bottom[0].x(), xmax = bottom[0].x();
  auto widen = [&](const ProjPoint<T>& q) {
    if (less(q.x(), xmin)) xmin = q.x();
    if (less(xmax, q.x())) xmax = q.x();
  };
  for (std::size_t i = 0; i < n; ++i) {
    widen(bottom[i]);
    widen(top[i]);
  }
  for (const auto& [name, q] : spec.marked_points) {
    if (sign(q.y()) != 0 && !(q.y() == H)) throw GeometryError("marked point '" + name + "' is not on l or l'");
    widen(q);
  }
  T span = xmax - xmin;
  if (sign(span) == 0) span = T(1);

  std::string text = H.to_string() + ";";
  for (const auto& s : spec.segments) text += detail::segment_text(s) + ";";
  detail::DrawRng rng(detail::fnv1a(text) ^ spec.seed);
  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    // Unequal gaps keep the aux lines off lattice patterns with the bundle rays.
    const T w = span * (T(1) + T(rng.fraction(1013))) / T(4);
    const T s3 = xmin - w * (T(1) + T(rng.fraction(1031)));
    const T s2 = s3 - w * (T(1) + T(rng.fraction(1033)));
    const T s1 = s2 - w * (T(1) + T(rng.fraction(1039)));
    const T s0b = s1 - w * (T(1) + T(rng.fraction(1019)));
    const T s0t = s1 - w * (T(1) + T(rng.fraction(1021)));
    const T xr = xmax + w;
    T reach = less(T(1), xr) ? xr : T(1);
    T inv_mu(1);
    while (less(inv_mu, T(2) * reach)) inv_mu = inv_mu * T(2);
    const T mu = T(1) / inv_mu;
    const ProjMap<T> map({{{T(1), T(0), T(0)}, {T(0), T(1), T(0)}, {-mu, T(0), T(1)}}});
    const ProjPoint<T> apex = map.apply(ProjPoint<T>::at_infinity(T(1), T(0)));
    auto M = [&](const T& x, const T& y) { return map.apply(ProjPoint<T>(x, y)); };

    std::vector<detail::Stroke<T>> strokes;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string name = i < spec.names.size() ? spec.names[i] : "S" + std::to_string(i + 1);
      strokes.push_back({name, "segment", map.apply(bottom[i]), map.apply(top[i])});
    }
    strokes.push_back({"s0", "aux", M(s0b, T(0)), M(s0t, H)});
    strokes.push_back({"s1", "aux", M(s1, T(0)), M(s1, H)});
    strokes.push_back({"s2", "aux", M(s2, T(0)), M(s2, H)});
    strokes.push_back({"s3", "aux", M(s3, T(0)), M(s3, H)});
    auto horizontal = [&](std::string name, std::string kind, const T& y, const T& right) {
      strokes.push_back({std::move(name), std::move(kind), apex, M(right, y)});
    };
    horizontal("l", "boundary", T(0), xr);
    horizontal("lprime", "boundary", H, xr);
    for (std::size_t k = 1; k <= B; ++k) {
      horizontal("Lb" + std::to_string(k), "bundle", T(static_cast<long>(k)) * eps, xr);
      horizontal("Ub" + std::to_string(k), "bundle", H - T(static_cast<long>(k)) * eps, xr);
    }
    for (std::size_t j = 1; j <= E; ++j) {
      horizontal("Le" + std::to_string(j), "extension", T(static_cast<long>(B + j)) * eps, s3);
      horizontal("Ue" + std::to_string(j), "extension", H - T(static_cast<long>(B + j)) * eps, s3);
    }
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      for (std::size_t k = 0; k < B; ++k) {
        horizontal("M" + std::to_string(b + 1) + "." + std::to_string(k + 1), "bundle",
                   bundles[b] + T(static_cast<long>(k)) * eps, xr);
      }
    }
    for (std::size_t r = 0; r < plain.size(); ++r) horizontal("P" + std::to_string(r + 1), "ray", plain[r], xr);
    std::vector<std::pair<std::string, ProjPoint<T>>> marked;
    for (const auto& [name, q] : spec.marked_points) marked.emplace_back(name, map.apply(q));

    auto out = detail::assemble("genfan", detail::arrange(std::move(strokes), marked));
    const std::size_t apex_i = *out.points.find_point(apex);
    out.add_role(apex_i, "apex");

    // Each point of s0 must see every point off s0 and off its own horizontal.
    bool s0_ok = true;
    for (std::size_t q = 0; q < out.points.size() && s0_ok; ++q) {
      if (!out.has_role(q, "s0")) continue;
      std::string own;
      for (const auto& r : out.roles[q]) {
        if (r != "s0") own = r;
      }
      for (std::size_t w = 0; w < out.points.size() && s0_ok; ++w) {
        if (w == q || out.has_role(w, "s0") || out.has_role(w, own)) continue;
        s0_ok = out.graph.adjacent(q, w);
      }
    }
    if (!s0_ok) continue;

    const auto audit = audit_collinearity(out);
    for (std::size_t k = 0; k < audit.undeclared.size(); ++k) {
      out.incidental.push_back(make_incidental(out, audit.undeclared[k], k));
    }
    for (std::size_t g = 0; g < nonempty.size(); ++g) {
      CollinearGroup grp{"I" + std::to_string(g + 1), "crossing-group", {}};
      for (const auto& x : nonempty[g]) grp.members.push_back(out.points.label(*out.points.find_point(map.apply(x))));
      out.annotations.push_back(std::move(grp));
    }
    out.frame_map = map;
    out.set_meta("mode", spec.faithful ? "faithful" : "scaled");
    out.set_meta("B", std::to_string(B));
    out.set_meta("E", std::to_string(E));
    out.set_meta("epsilon", eps.to_string());
    out.set_meta("mu", mu.to_string());
    out.set_meta("seed", std::to_string(spec.seed));
    out.set_meta("attempts", std::to_string(attempt + 1));
    out.set_meta("segments", std::to_string(n));
    out.set_meta("crossings", std::to_string(crossings.size()));
    out.set_meta("groups", std::to_string(nonempty.size()));
    out.set_meta("plain_rays", std::to_string(plain.size()));
    out.set_meta("apex", out.points.label(apex_i));
    out.set_meta("s0_property", "pass");
    out.set_meta("audit", audit.sampled ? "sampled" : "exhaustive");
    return out;
  }
  throw GeometryError("could not place s0 with full visibility after " + std::to_string(spec.max_attempts) +
                      " attempts");
}

// ---------------------------------------------------------------------------
// Grids, line arrangements, Perles
// ---------------------------------------------------------------------------

/// r rows by q columns of integer points; declared groups are all maximal lattice lines.
inline ConstructionOutput<Rational> build_grid(long r, long q) {
  if (r < 1 || q < 1) throw GeometryError("grid dimensions must be positive");
  ConstructionOutput<Rational> out;
  out.kind = "grid";
  const std::size_t total = static_cast<std::size_t>(r * q);
  for (long y = 0; y < r; ++y) {
    for (long x = 0; x < q; ++x) {
      out.points.add(detail::padded("g", static_cast<std::size_t>(y * q + x), total),
                     ProjPoint<Rational>(Rational(x), Rational(y)));
      out.roles.push_back({"row" + std::to_string(y + 1), "col" + std::to_string(x + 1)});
    }
  }
  auto label = [&](long y, long x) { return out.points.label(static_cast<std::size_t>(y * q + x)); };
  if (q >= 2) {
    for (long y = 0; y < r; ++y) {
      CollinearGroup g{"row" + std::to_string(y + 1), "row", {}};
      for (long x = 0; x < q; ++x) g.members.push_back(label(y, x));
      out.declared.push_back(std::move(g));
    }
  }
  if (r >= 2) {
    for (long x = 0; x < q; ++x) {
      CollinearGroup g{"col" + std::to_string(x + 1), "column", {}};
      for (long y = 0; y < r; ++y) g.members.push_back(label(y, x));
      out.declared.push_back(std::move(g));
    }
  }
  std::size_t k = 0;
  for (const auto& line : collinear_lines(out.points)) {
    const auto& a = out.points.point(line[0]);
    const auto& b = out.points.point(line[1]);
    if (a.x() == b.x() || a.y() == b.y()) continue;
    CollinearGroup g{"lat" + std::to_string(++k), "lattice", {}};
    for (std::size_t i : line) g.members.push_back(out.points.label(i));
    out.declared.push_back(std::move(g));
  }
  out.graph = visibility_graph(out.points);
  out.set_meta("rows", std::to_string(r));
  out.set_meta("columns", std::to_string(q));
  out.set_meta("rigidity_bounds", r >= 6 && q >= 3 ? "satisfied" : "not met");
  return out;
}

/**
 * Fan fixing a line arrangement: an apex outside the hull of all crossings,
 * boundary rays just outside the extreme crossing directions, and each line
 * clipped to the wedge.
 */
template <class T>
ConstructionOutput<T> build_arrangement_fan(const std::vector<ProjLine<T>>& lines, std::vector<std::string> names = {},
                                            std::uint64_t seed = 1) {
  using detail::Vec2;
  if (lines.size() < 2) throw GeometryError("arrangement needs at least two lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].is_at_infinity()) throw GeometryError("line at infinity in arrangement");
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i] == lines[j]) throw GeometryError("repeated line in arrangement");
    }
  }
  std::map<ProjPoint<T>, std::vector<std::size_t>> crossings;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto x = meet(lines[i], lines[j]);
      if (!x.is_affine()) continue;
      auto& v = crossings[x];
      v.push_back(i);
      v.push_back(j);
    }
  }
  if (crossings.empty()) throw GeometryError("arrangement has no crossings");
  T cx(0), cy(0);
  for (const auto& [x, ls] : crossings) {
    cx = cx + x.x();
    cy = cy + x.y();
  }
  const T count(static_cast<long>(crossings.size()));
  const ProjPoint<T> centroid(cx / count, cy / count);
  const std::array<std::array<long, 2>, 12> dirs{
      {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {-1, 2}, {2, -1}, {3, 1}, {1, 3}, {-1, 3}, {3, -1}}};
  std::optional<Vec2<T>> d;
  for (const auto& c : dirs) {
    const Vec2<T> cand{T(c[0]), T(c[1])};
    bool ok = true;
    for (const auto& l : lines) ok = ok && sign(l.a() * cand.x + l.b() * cand.y) != 0;
    if (ok) {
      d = cand;
      break;
    }
  }
  if (!d) throw GeometryError("no apex direction avoids all line directions");
  auto rotate = [](const Vec2<T>& v, const T& c, const T& s) { return Vec2<T>{c * v.x - s * v.y, s * v.x + c * v.y}; };
  T tan_half = T(Rational(1, 100));
  for (int shrink = 0; shrink < 8; ++shrink, tan_half = tan_half / T(2)) {
    const T den = T(1) + tan_half * tan_half;
    const T cs = (T(1) - tan_half * tan_half) / den;
    const T sn = T(2) * tan_half / den;
    T t(1);
    for (int grow = 0; grow < 64; ++grow, t = t * T(2)) {
      const ProjPoint<T> p(centroid.x() + t * d->x, centroid.y() + t * d->y);
      bool ok = true;
      for (const auto& l : lines) ok = ok && !l.contains(p);
      if (!ok) continue;
      const Vec2<T> ref = detail::vsub(centroid, p);
      std::optional<Vec2<T>> lo, hi;
      for (const auto& [x, ls] : crossings) {
        const Vec2<T> dx = detail::vsub(x, p);
        if (sign(detail::dot(dx, ref)) <= 0) ok = false;
        if (!lo || sign(detail::cross(dx, *lo)) > 0) lo = dx;
        if (!hi || sign(detail::cross(*hi, dx)) > 0) hi = dx;
      }
      if (!ok) continue;
      const Vec2<T> u = rotate(*lo, cs, -sn);
      const Vec2<T> v = rotate(*hi, cs, sn);
      if (sign(detail::dot(u, ref)) <= 0 || sign(detail::dot(v, ref)) <= 0) continue;
      for (const auto& l : lines) {
        const T at_p = l.eval(p);
        const T lu = l.a() * u.x + l.b() * u.y;
        const T lv = l.a() * v.x + l.b() * v.y;
        ok = ok && sign(lu) * sign(at_p) < 0 && sign(lv) * sign(at_p) < 0;
      }
      for (const auto& [x, ls] : crossings) {
        const Vec2<T> dx = detail::vsub(x, p);
        ok = ok && sign(detail::cross(u, dx)) > 0 && sign(detail::cross(dx, v)) > 0;
      }
      if (!ok) continue;
      FanSpec<T> spec;
      spec.l = join(p, detail::vadd(p, u, T(1)));
      spec.lprime = join(p, detail::vadd(p, v, T(1)));
      for (std::size_t i = 0; i < lines.size(); ++i) {
        spec.segments.emplace_back(meet(lines[i], spec.l), meet(lines[i], spec.lprime));
        spec.names.push_back(i < names.size() ? names[i] : "L" + std::to_string(i + 1));
      }
      spec.allow_multiple_crossings = true;
      spec.seed = seed;
      auto out = build_fan(spec);
      out.kind = "arrangement";
      for (auto& g : out.declared) {
        if (g.kind == "segment") g.kind = "line";
      }
      out.set_meta("lines", std::to_string(lines.size()));
      out.set_meta("points", std::to_string(out.points.size()));
      out.set_meta("lines_cubed", std::to_string(lines.size() * lines.size() * lines.size()));
      return out;
    }
  }
  throw GeometryError("no valid apex placement found for the arrangement");
}

/// The 9-point, 9-line Perles configuration over Q(sqrt 5).
struct PerlesConfiguration {
  std::vector<ProjPoint<QuadExt>> points;
  std::vector<std::vector<std::size_t>> lines;  // point indices per line, each of size >= 3
};

/**
 * Affine image of a regular pentagon with its pentagram: outer vertices
 * V1..V4, the inner vertices not opposite V0, and the centre. V0 and the
 * inner vertex opposite it are dropped.
 */
inline PerlesConfiguration perles_configuration() {
  using Q = QuadExt;
  const Q r5 = Q::sqrt_of(5);
  const Q c1 = (r5 - Q(1)) / Q(4);
  const Q c2 = -(r5 + Q(1)) / Q(4);
  const Q g = (r5 - Q(1)) / Q(2);
  const std::vector<ProjPoint<Q>> outer{{Q(1), Q(0)}, {c1, Q(1)}, {c2, g}, {c2, -g}, {c1, Q(-1)}};
  std::vector<ProjLine<Q>> diagonals;
  for (std::size_t k = 0; k < 5; ++k) diagonals.push_back(join(outer[k], outer[(k + 2) % 5]));
  std::set<ProjPoint<Q>> inner;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      const auto x = meet(diagonals[i], diagonals[j]);
      if (std::find(outer.begin(), outer.end(), x) == outer.end()) inner.insert(x);
    }
  }
  PerlesConfiguration cfg;
  for (std::size_t k = 1; k < 5; ++k) cfg.points.push_back(outer[k]);
  for (const auto& x : inner) {
    if (!(sign(x.y()) == 0 && sign(x.x()) < 0)) cfg.points.push_back(x);
  }
  cfg.points.emplace_back(Q(0), Q(0));
  PointSet<Q> ps;
  for (std::size_t i = 0; i < cfg.points.size(); ++i) ps.add("P" + std::to_string(i + 1), cfg.points[i]);
  cfg.lines = collinear_lines(ps);
  return cfg;
}

/// Arrangement fan over the nine Perles lines; the configuration points carry role P1..P9.
inline ConstructionOutput<QuadExt> build_perles_fan(std::uint64_t seed = 1) {
  const auto cfg = perles_configuration();
  std::vector<ProjLine<QuadExt>> lines;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < cfg.lines.size(); ++k) {
    lines.push_back(join(cfg.points[cfg.lines[k][0]], cfg.points[cfg.lines[k][1]]));
    names.push_back("L" + std::to_string(k + 1));
  }
  auto out = build_arrangement_fan(lines, names, seed);
  out.kind = "perles";
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    const auto idx = out.points.find_point(cfg.points[i]);
    if (!idx) throw GeometryError("Perles point missing from its fan");
    out.add_role(*idx, "P" + std::to_string(i + 1));
  }
  out.set_meta("configuration_points", std::to_string(cfg.points.size()));
  out.set_meta("configuration_lines", std::to_string(cfg.lines.size()));
  return out;
}

/// Exact audit: every configuration line contains its declared points and no other configuration point.
inline bool perles_incidence_ok(const PerlesConfiguration& cfg) {
  for (const auto& line : cfg.lines) {
    const auto l = join(cfg.points[line[0]], cfg.points[line[1]]);
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
      const bool member = std::find(line.begin(), line.end(), i) != line.end();
      if (l.contains(cfg.points[i]) != member) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Provenance file
// ---------------------------------------------------------------------------

/**
 * KIND <kind>
 * META <key> <value>
 * POINT <label> <role>...
 * GROUP|INCIDENTAL|ANNOTATION <name> <kind> <label>...
 * MAP <9 entries, row-major>
 */
template <class T>
void write_provenance(std::ostream& out, const ConstructionOutput<T>& c) {
  out << "KIND " << c.kind << '\n';
  for (const auto& [k, v] : c.meta) out << "META " << k << ' ' << v << '\n';
  if (c.frame_map) {
    out << "MAP";
    for (const auto& row : c.frame_map->matrix()) {
      for (const auto& x : row) out << ' ' << x.to_string();
    }
    out << '\n';
  }
  for (std::size_t i : detail::label_order(c.points.labels())) {
    out << "POINT " << c.points.label(i);
    for (const auto& r : c.roles[i]) out << ' ' << r;
    out << '\n';
  }
  auto groups = [&](const char* tag, const std::vector<CollinearGroup>& gs) {
    for (const auto& g : gs) {
      out << tag << ' ' << g.name << ' ' << g.kind;
      for (const auto& m : g.members) out << ' ' << m;
      out << '\n';
    }
  };
  groups("GROUP", c.declared);
  groups("INCIDENTAL", c.incidental);
  groups("ANNOTATION", c.annotations);
}

/// Reads provenance into an output whose points must already be set.
template <class T>
void read_provenance(std::istream& in, ConstructionOutput<T>& c) {
  c.roles.assign(c.points.size(), {});
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string tag;
    ls >> tag;
    auto fail = [&](const std::string& why) {
      throw ParseError("provenance line " + std::to_string(lineno) + ": " + why);
    };
    if (tag == "KIND") {
      ls >> c.kind;
    } else if (tag == "META") {
      std::string k, v;
      ls >> k;
      std::getline(ls, v);
      if (!v.empty() && v.front() == ' ') v.erase(0, 1);
      c.set_meta(k, v);
    } else if (tag == "MAP") {
      typename ProjMap<T>::Matrix m{};
      for (auto& row : m) {
        for (auto& x : row) {
          std::string tok;
          if (!(ls >> tok)) fail("MAP needs 9 entries");
          x = parse_scalar<T>(tok);
        }
      }
      c.frame_map = ProjMap<T>(m);
    } else if (tag == "POINT") {
      std::string label, role;
      ls >> label;
      if (!c.points.contains(label)) fail("unknown point '" + label + "'");
      auto& r = c.roles[c.points.index_of(label)];
      while (ls >> role) r.push_back(role);
    } else if (tag == "GROUP" || tag == "INCIDENTAL" || tag == "ANNOTATION") {
      CollinearGroup g;
      if (!(ls >> g.name >> g.kind)) fail("group needs a name and a kind");
      std::string m;
      while (ls >> m) {
        if (!c.points.contains(m)) fail("unknown point '" + m + "'");
        g.members.push_back(m);
      }
      (tag == "GROUP" ? c.declared : tag == "INCIDENTAL" ? c.incidental : c.annotations).push_back(std::move(g));
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
}

/// Writes points.txt, graph.txt and provenance.txt into `dir`.
template <class T>
void write_construction(const std::filesystem::path& dir, const ConstructionOutput<T>& c) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("points.txt");
    write_point_set(f, c.points);
  }
  {
    auto f = open("graph.txt");
    write_graph(f, c.graph);
  }
  {
    auto f = open("provenance.txt");
    write_provenance(f, c);
  }
}

/// Reads a construction directory; the graph is taken from graph.txt when present.
template <class T>
ConstructionOutput<T> read_construction(const std::filesystem::path& dir) {
  auto open = [&](const char* name) {
    std::ifstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + (dir / name).string());
    return f;
  };
  ConstructionOutput<T> c;
  {
    auto f = open("points.txt");
    c.points = read_point_set<T>(f);
  }
  if (std::filesystem::exists(dir / "graph.txt")) {
    auto f = open("graph.txt");
    const auto file = read_graph(f);
    c.graph = VisibilityGraph(c.points.labels());
    for (const auto& [u, v] : file.edges()) {
      if (!c.graph.has_vertex(u) || !c.graph.has_vertex(v)) {
        throw ParseError("graph edge " + u + " " + v + " names an unknown point");
      }
      c.graph.add_edge(u, v);
    }
  } else {
    c.graph = visibility_graph(c.points);
  }
  c.roles.assign(c.points.size(), {});
  if (std::filesystem::exists(dir / "provenance.txt")) {
    auto f = open("provenance.txt");
    read_provenance(f, c);
  }
  return c;
}

}  // namespace pvg
