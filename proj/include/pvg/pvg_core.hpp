#pragma once

/**
 * @file pvg_core.hpp
 * @brief Point visibility graphs of exact affine point sets.
 *
 * Two points are adjacent iff the open segment between them contains no other
 * point of the set. From a point p all other points lie on deg(p) rays; the
 * first point of each ray is exactly a neighbor of p. The graph is computed per
 * origin by an exact angular sort (half-plane, then cross product), which is
 * O(n^2 log n) overall.
 *
 * Also provides the local-structure self-tests used throughout the repo:
 *   - degree-one vertices of G[N(p)] bound an empty half-plane, and their
 *     neighbor sits on the ray of smallest angle;
 *   - when G[N(p)] is an induced path its order matches the ray order;
 *   - points that see all (or all but one) of N(p) are second points on a ray
 *     (or lie on the ray of the unseen neighbor).
 */

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pvg/exactnum.hpp"
#include "pvg/parallel.hpp"
#include "pvg/projgeom.hpp"

namespace pvg {

class UnknownLabel : public std::out_of_range {
 public:
  explicit UnknownLabel(const std::string& label) : std::out_of_range("unknown label '" + label + "'") {}
};

/// Labeled set of pairwise distinct affine points.
template <class T>
class PointSet {
 public:
  PointSet() = default;

  /// Appends a point; returns its index.
  std::size_t add(std::string label, ProjPoint<T> p) {
    if (!p.is_affine()) throw GeometryError("point '" + label + "' is at infinity");
    if (label.empty() || label.find_first_of(" \t\r\n#") != std::string::npos) {
      throw GeometryError("invalid label '" + label + "'");
    }
    if (index_.count(label) != 0) throw GeometryError("duplicate label '" + label + "'");
    if (auto it = by_point_.find(p); it != by_point_.end()) {
      throw GeometryError("points '" + labels_[it->second] + "' and '" + label + "' coincide at " +
                          p.to_string());
    }
    const std::size_t i = points_.size();
    index_.emplace(label, i);
    by_point_.emplace(p, i);
    labels_.push_back(std::move(label));
    points_.push_back(std::move(p));
    return i;
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const ProjPoint<T>& point(std::size_t i) const { return points_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<ProjPoint<T>>& points() const { return points_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw UnknownLabel(label);
    return it->second;
  }
  bool contains(const std::string& label) const { return index_.count(label) != 0; }
  std::optional<std::size_t> find_point(const ProjPoint<T>& p) const {
    auto it = by_point_.find(p);
    if (it == by_point_.end()) return std::nullopt;
    return it->second;
  }

  /// Image under a map; throws if any point leaves the affine plane.
  PointSet transformed(const ProjMap<T>& m) const {
    PointSet out;
    for (std::size_t i = 0; i < size(); ++i) out.add(labels_[i], m.apply(points_[i]));
    return out;
  }

 private:
  std::vector<ProjPoint<T>> points_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<ProjPoint<T>, std::size_t> by_point_;
};

/// Simple undirected graph over labeled vertices; adjacency lists kept sorted.
class VisibilityGraph {
 public:
  VisibilityGraph() = default;
  explicit VisibilityGraph(std::vector<std::string> labels)
      : labels_(std::move(labels)), adj_(labels_.size()) {
    for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
    if (index_.size() != labels_.size()) throw GeometryError("duplicate vertex label");
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t index_of(const std::string& l) const {
    auto it = index_.find(l);
    if (it == index_.end()) throw UnknownLabel(l);
    return it->second;
  }
  bool has_vertex(const std::string& l) const { return index_.count(l) != 0; }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) throw GeometryError("self-loop at '" + labels_.at(u) + "'");
    insert_sorted(adj_.at(u), v);
    insert_sorted(adj_.at(v), u);
  }
  void add_edge(const std::string& u, const std::string& v) { add_edge(index_of(u), index_of(v)); }

  /// Replaces the whole neighbor list of u (caller keeps symmetry).
  void set_neighbors(std::size_t u, std::vector<std::size_t> nbrs) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    adj_.at(u) = std::move(nbrs);
  }

  bool adjacent(std::size_t u, std::size_t v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }
  bool adjacent(const std::string& u, const std::string& v) const { return adjacent(index_of(u), index_of(v)); }
  const std::vector<std::size_t>& neighbors(std::size_t u) const { return adj_.at(u); }
  std::size_t degree(std::size_t u) const { return adj_.at(u).size(); }
  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adj_) twice += a.size();
    return twice / 2;
  }

  /// Edges as label pairs (u < v lexicographically), sorted.
  std::vector<std::pair<std::string, std::string>> edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t u = 0; u < size(); ++u) {
      for (std::size_t v : adj_[u]) {
        if (labels_[u] < labels_[v]) out.emplace_back(labels_[u], labels_[v]);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_symmetric() const {
    for (std::size_t u = 0; u < size(); ++u) {
      for (std::size_t v : adj_[u]) {
        if (v == u || !adjacent(v, u)) return false;
      }
    }
    return true;
  }

  /// Same vertex labels and same edges, independent of vertex order.
  friend bool operator==(const VisibilityGraph& a, const VisibilityGraph& b) {
    if (a.size() != b.size()) return false;
    auto la = a.labels_;
    auto lb = b.labels_;
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    return la == lb && a.edges() == b.edges();
  }

 private:
  static void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> adj_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Points other than the origin grouped onto rays, rays in counterclockwise
/// order starting at direction (1, 0), points on a ray by distance.
struct RayPartition {
  std::size_t origin = 0;
  std::vector<std::vector<std::size_t>> rays;

  std::size_t ray_count() const { return rays.size(); }
};

namespace detail {

template <class T>
struct Direction {
  T dx;
  T dy;
  int half;  // 0: angle in [0, pi), 1: angle in [pi, 2 pi)
};

template <class T>
Direction<T> direction(const ProjPoint<T>& from, const ProjPoint<T>& to) {
  Direction<T> d{to.x() - from.x(), to.y() - from.y(), 0};
  const int sy = sign(d.dy);
  d.half = (sy > 0 || (sy == 0 && sign(d.dx) > 0)) ? 0 : 1;
  return d;
}

// Strict angular order; equal directions compare equivalent.
template <class T>
int compare_angle(const Direction<T>& a, const Direction<T>& b) {
  if (a.half != b.half) return a.half < b.half ? -1 : 1;
  const int c = sign(a.dx * b.dy - a.dy * b.dx);
  return -c;
}

template <class T>
T norm2(const Direction<T>& d) {
  return d.dx * d.dx + d.dy * d.dy;
}

// Points lifted to (X, Y, Z) with Z > 0; Rational coordinates become integers
// so direction arithmetic never normalizes fractions.
template <class T>
struct Lift {
  using K = T;
  static std::array<K, 3> of(const ProjPoint<T>& p) { return {p.x(), p.y(), T(1)}; }
};

template <>
struct Lift<Rational> {
  using K = mpz_class;
  static std::array<K, 3> of(const ProjPoint<Rational>& p) {
    const auto& x = p.x().raw();
    const auto& y = p.y().raw();
    return {x.get_num() * y.get_den(), y.get_num() * x.get_den(), x.get_den() * y.get_den()};
  }
};

inline int ksign(const mpz_class& v) { return sgn(v); }
template <class T>
int ksign(const T& v) {
  return sign(v);
}

template <class T>
std::vector<std::array<typename Lift<T>::K, 3>> lift_all(const PointSet<T>& ps) {
  std::vector<std::array<typename Lift<T>::K, 3>> out;
  out.reserve(ps.size());
  for (const auto& p : ps.points()) out.push_back(Lift<T>::of(p));
  return out;
}

/**
 * Indices other than `origin` grouped by direction, groups in angular order
 * from (1, 0), members by distance. With `undirected`, opposite directions
 * share a group (members then in no particular order).
 */
template <class K>
std::vector<std::vector<std::size_t>> direction_classes(std::size_t origin, const std::vector<std::array<K, 3>>& pts,
                                                        bool undirected) {
  const std::size_t n = pts.size();
  const auto& p = pts[origin];
  std::vector<Direction<K>> dirs(n);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == origin) continue;
    const auto& q = pts[i];
    Direction<K> d{K(q[0] * p[2] - p[0] * q[2]), K(q[1] * p[2] - p[1] * q[2]), 0};
    const int sy = ksign(d.dy);
    d.half = (sy > 0 || (sy == 0 && ksign(d.dx) > 0)) ? 0 : 1;
    if (undirected && d.half == 1) {
      d.dx = -d.dx;
      d.dy = -d.dy;
      d.half = 0;
    }
    dirs[i] = std::move(d);
    order.push_back(i);
  }
  auto angle = [&](std::size_t a, std::size_t b) {
    if (dirs[a].half != dirs[b].half) return dirs[a].half < dirs[b].half ? -1 : 1;
    return -ksign(K(dirs[a].dx * dirs[b].dy - dirs[a].dy * dirs[b].dx));
  };
  // Same ray: compare the offsets scaled back by each point's Z.
  auto nearer = [&](std::size_t a, std::size_t b) {
    const bool use_x = ksign(dirs[a].dx) != 0;
    const K& da = use_x ? dirs[a].dx : dirs[a].dy;
    const K& db = use_x ? dirs[b].dx : dirs[b].dy;
    return ksign(K(da * pts[b][2] - db * pts[a][2])) * ksign(da) < 0;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int c = angle(a, b);
    if (c != 0) return c < 0;
    return !undirected && nearer(a, b);
  });
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || angle(order[k - 1], order[k]) != 0) out.emplace_back();
    out.back().push_back(order[k]);
  }
  return out;
}

}  // namespace detail

/// Rays from point `origin` (by index).
template <class T>
RayPartition ray_partition(std::size_t origin, const PointSet<T>& ps) {
  if (origin >= ps.size()) throw std::out_of_range("ray_partition: origin index out of range");
  return {origin, detail::direction_classes(origin, detail::lift_all(ps), false)};
}

template <class T>
RayPartition ray_partition(const std::string& origin, const PointSet<T>& ps) {
  return ray_partition(ps.index_of(origin), ps);
}

/// Visibility graph; parallel over origins when hardware allows.
template <class T>
VisibilityGraph visibility_graph(const PointSet<T>& ps) {
  VisibilityGraph g(ps.labels());
  const auto lifted = detail::lift_all(ps);
  std::vector<std::vector<std::size_t>> firsts(ps.size());
  detail::parallel_for(
      ps.size(),
      [&](std::size_t i) {
        const auto rays = detail::direction_classes(i, lifted, false);
        firsts[i].reserve(rays.size());
        for (const auto& ray : rays) firsts[i].push_back(ray.front());
      },
      8);
  for (std::size_t i = 0; i < ps.size(); ++i) g.set_neighbors(i, std::move(firsts[i]));
  return g;
}

// ---------------------------------------------------------------------------
// Local-structure self-tests
// ---------------------------------------------------------------------------

enum class CheckStatus { Pass, Fail, NotApplicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not applicable";
  }
  return "?";
}

struct CheckReport {
  CheckStatus status = CheckStatus::Pass;
  std::size_t checked = 0;  // number of vertices the predicate actually applied to
  std::vector<std::string> witnesses;

  bool ok() const { return status != CheckStatus::Fail; }
  void fail(std::string why) {
    status = CheckStatus::Fail;
    witnesses.push_back(std::move(why));
  }
};

namespace detail {

// Ray partition of p plus per-point ray index and position on the ray.
struct LocalView {
  RayPartition rays;
  std::vector<std::size_t> ray_of;    // npos for p itself
  std::vector<std::size_t> position;  // 0 = first point on its ray
  std::vector<char> in_nbhd;          // membership in N(p)
  std::vector<std::size_t> nbhd;      // N(p) in ray order
};

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

template <class T>
LocalView local_view(std::size_t p, const PointSet<T>& ps) {
  LocalView v;
  v.rays = ray_partition(p, ps);
  v.ray_of.assign(ps.size(), kNone);
  v.position.assign(ps.size(), kNone);
  v.in_nbhd.assign(ps.size(), 0);
  for (std::size_t r = 0; r < v.rays.rays.size(); ++r) {
    const auto& ray = v.rays.rays[r];
    for (std::size_t k = 0; k < ray.size(); ++k) {
      v.ray_of[ray[k]] = r;
      v.position[ray[k]] = k;
    }
    v.in_nbhd[ray.front()] = 1;
    v.nbhd.push_back(ray.front());
  }
  return v;
}

inline std::size_t degree_into(const VisibilityGraph& g, std::size_t q, const std::vector<char>& mask) {
  std::size_t d = 0;
  for (std::size_t w : g.neighbors(q)) d += mask[w] != 0;
  return d;
}

// Compares the angles that v1 and v2 make with u; returns -1 if v1's angle is
// smaller, +1 if larger, 0 if equal.
template <class T>
int compare_angle_to(const Direction<T>& u, const Direction<T>& v1, const Direction<T>& v2) {
  const T d1 = u.dx * v1.dx + u.dy * v1.dy;
  const T d2 = u.dx * v2.dx + u.dy * v2.dy;
  const int s1 = sign(d1);
  const int s2 = sign(d2);
  // Larger cosine means smaller angle.
  if (s1 != s2) return s1 > s2 ? -1 : 1;
  if (s1 == 0) return 0;
  const T lhs = d1 * d1 * norm2(v2);
  const T rhs = d2 * d2 * norm2(v1);
  const int c = sign(lhs - rhs);  // > 0: |cos1| > |cos2|
  return s1 > 0 ? -c : c;
}

}  // namespace detail

/**
 * For every q in N(p) of degree one in G[N(p)]: all points lie weakly on one
 * side of line(p, q), and q's neighbor lies on a ray forming the smallest angle
 * with q's ray.
 */
template <class T>
CheckReport check_empty_halfspace(std::size_t p, const PointSet<T>& ps, const VisibilityGraph& g) {
  CheckReport rep;
  const auto view = detail::local_view(p, ps);
  const auto& origin = ps.point(p);
  for (std::size_t q : view.nbhd) {
    if (detail::degree_into(g, q, view.in_nbhd) != 1) continue;
    ++rep.checked;
    bool pos = false;
    bool neg = false;
    for (std::size_t w = 0; w < ps.size(); ++w) {
      if (w == p || w == q) continue;
      const int o = orient(origin, ps.point(q), ps.point(w));
      pos = pos || o > 0;
      neg = neg || o < 0;
    }
    if (pos && neg) {
      rep.fail("points on both sides of line(" + ps.label(p) + ", " + ps.label(q) + ")");
      continue;
    }
    std::size_t r = detail::kNone;
    for (std::size_t w : g.neighbors(q)) {
      if (view.in_nbhd[w]) r = w;
    }
    const auto u = detail::direction(origin, ps.point(q));
    const std::size_t qray = view.ray_of[q];
    std::size_t best = detail::kNone;
    for (std::size_t k = 0; k < view.rays.rays.size(); ++k) {
      if (k == qray) continue;
      if (best == detail::kNone) {
        best = k;
        continue;
      }
      const auto vk = detail::direction(origin, ps.point(view.rays.rays[k].front()));
      const auto vb = detail::direction(origin, ps.point(view.rays.rays[best].front()));
      if (detail::compare_angle_to(u, vk, vb) < 0) best = k;
    }
    const auto vr = detail::direction(origin, ps.point(r));
    const auto vb = detail::direction(origin, ps.point(view.rays.rays[best].front()));
    if (detail::compare_angle_to(u, vr, vb) != 0) {
      rep.fail("neighbor " + ps.label(r) + " of " + ps.label(q) + " (around " + ps.label(p) +
               ") is not on the ray of smallest angle");
    }
  }
  return rep;
}

/// When G[N(p)] is an induced path, its order must equal the cyclic ray order
/// (up to reversal). Reports NotApplicable otherwise.
template <class T>
CheckReport check_path_ray_order(std::size_t p, const PointSet<T>& ps, const VisibilityGraph& g) {
  CheckReport rep;
  const auto view = detail::local_view(p, ps);
  const std::size_t k = view.nbhd.size();
  if (k == 0) {
    rep.status = CheckStatus::NotApplicable;
    return rep;
  }
  std::size_t edges2 = 0;
  std::size_t start = view.nbhd.front();
  std::size_t endpoints = 0;
  for (std::size_t q : view.nbhd) {
    const std::size_t d = detail::degree_into(g, q, view.in_nbhd);
    if (d > 2) {
      rep.status = CheckStatus::NotApplicable;
      return rep;
    }
    if (d <= 1) {
      ++endpoints;
      start = q;
    }
    edges2 += d;
  }
  if (edges2 != 2 * (k - 1) || (k > 1 && endpoints != 2)) {
    rep.status = CheckStatus::NotApplicable;
    return rep;
  }
  // Walk the path; with k - 1 edges and two endpoints it is connected iff the
  // walk reaches all k vertices.
  std::vector<std::size_t> path{start};
  std::size_t prev = detail::kNone;
  std::size_t cur = start;
  while (path.size() < k) {
    std::size_t next = detail::kNone;
    for (std::size_t w : g.neighbors(cur)) {
      if (view.in_nbhd[w] && w != prev) next = w;
    }
    if (next == detail::kNone) {
      rep.status = CheckStatus::NotApplicable;
      return rep;
    }
    prev = cur;
    cur = next;
    path.push_back(cur);
  }
  rep.checked = 1;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const std::size_t a = view.ray_of[path[i - 1]];
    const std::size_t b = view.ray_of[path[i]];
    const std::size_t diff = a > b ? a - b : b - a;
    if (diff != 1 && diff != k - 1) {
      rep.fail("path neighbors " + ps.label(path[i - 1]) + ", " + ps.label(path[i]) + " around " +
               ps.label(p) + " are on non-consecutive rays");
    }
  }
  return rep;
}

/**
 * A point q outside N(p) + p that sees all of N(p) is the second point of its
 * ray; one that is not a second point and sees all but one neighbor r lies on
 * r's ray.
 */
template <class T>
CheckReport second_point_predicates(std::size_t p, const PointSet<T>& ps, const VisibilityGraph& g) {
  CheckReport rep;
  const auto view = detail::local_view(p, ps);
  const std::size_t k = view.nbhd.size();
  std::vector<char> seen(ps.size(), 0);
  for (std::size_t q = 0; q < ps.size(); ++q) {
    if (q == p || view.in_nbhd[q]) continue;
    const std::size_t s = detail::degree_into(g, q, view.in_nbhd);
    if (s == k) {
      ++rep.checked;
      if (view.position[q] != 1) {
        rep.fail(ps.label(q) + " sees all of N(" + ps.label(p) + ") but is point #" +
                 std::to_string(view.position[q] + 1) + " on its ray");
      }
    } else if (s + 1 == k && view.position[q] != 1) {
      ++rep.checked;
      for (std::size_t w : g.neighbors(q)) seen[w] = 1;
      std::size_t r = detail::kNone;
      for (std::size_t w : view.nbhd) {
        if (!seen[w]) r = w;
      }
      for (std::size_t w : g.neighbors(q)) seen[w] = 0;
      if (r == detail::kNone || view.ray_of[r] != view.ray_of[q]) {
        rep.fail(ps.label(q) + " misses only " + (r == detail::kNone ? std::string("?") : ps.label(r)) +
                 " of N(" + ps.label(p) + ") but is not on its ray");
      }
    }
  }
  return rep;
}

template <class T>
CheckReport check_empty_halfspace(const std::string& p, const PointSet<T>& ps) {
  return check_empty_halfspace(ps.index_of(p), ps, visibility_graph(ps));
}
template <class T>
CheckReport check_path_ray_order(const std::string& p, const PointSet<T>& ps) {
  return check_path_ray_order(ps.index_of(p), ps, visibility_graph(ps));
}
template <class T>
CheckReport second_point_predicates(const std::string& p, const PointSet<T>& ps) {
  return second_point_predicates(ps.index_of(p), ps, visibility_graph(ps));
}

/// Summary of the three local predicates over every vertex of a point set.
struct StructuralSummary {
  std::size_t vertices = 0;
  std::size_t halfspace_checked = 0;
  std::size_t path_checked = 0;
  std::size_t second_point_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

template <class T>
StructuralSummary check_all_structure(const PointSet<T>& ps, const VisibilityGraph& g) {
  StructuralSummary s;
  s.vertices = ps.size();
  std::vector<CheckReport> h(ps.size()), pr(ps.size()), sp(ps.size());
  detail::parallel_for(
      ps.size(),
      [&](std::size_t p) {
        h[p] = check_empty_halfspace(p, ps, g);
        pr[p] = check_path_ray_order(p, ps, g);
        sp[p] = second_point_predicates(p, ps, g);
      },
      8);
  for (std::size_t p = 0; p < ps.size(); ++p) {
    s.halfspace_checked += h[p].checked;
    s.path_checked += pr[p].status == CheckStatus::Pass ? 1 : 0;
    s.second_point_checked += sp[p].checked;
    for (const auto* rep : {&h[p], &pr[p], &sp[p]}) {
      for (const auto& w : rep->witnesses) s.failures.push_back(w);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::size_t> label_order(const std::vector<std::string>& labels) {
  std::vector<std::size_t> idx(labels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  return idx;
}

}  // namespace detail

/// Reads "label x y" lines; '#' starts a comment.
template <class T>
PointSet<T> read_point_set(std::istream& in) {
  PointSet<T> ps;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string label, xs, ys, extra;
    if (!(ls >> label >> xs >> ys) || (ls >> extra)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'label x y'");
    }
    try {
      ps.add(label, ProjPoint<T>(parse_scalar<T>(xs), parse_scalar<T>(ys)));
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ps;
}

/// Writes points sorted by label.
template <class T>
void write_point_set(std::ostream& out, const PointSet<T>& ps) {
  for (std::size_t i : detail::label_order(ps.labels())) {
    out << ps.label(i) << ' ' << ps.point(i).x().to_string() << ' ' << ps.point(i).y().to_string() << '\n';
  }
}

/// Header "n m", then one "u v" line per edge (u < v), lexicographic.
inline void write_graph(std::ostream& out, const VisibilityGraph& g) {
  const auto edges = g.edges();
  out << g.size() << ' ' << edges.size() << '\n';
  for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
}

/**
 * Reads the graph format. Vertices are the labels appearing in edges, sorted;
 * if the header announces more vertices, isolated ones are named "_iso<k>".
 */
inline VisibilityGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::pair<std::size_t, std::size_t>> header;
  std::vector<std::pair<std::string, std::string>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected two fields");
    }
    if (!header) {
      try {
        header = std::make_pair(static_cast<std::size_t>(std::stoul(a)), static_cast<std::size_t>(std::stoul(b)));
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": expected header 'n m'");
      }
      continue;
    }
    if (a == b) throw ParseError("line " + std::to_string(lineno) + ": self-loop");
    edges.emplace_back(a, b);
  }
  if (!header) throw ParseError("missing graph header");
  std::vector<std::string> labels;
  for (const auto& [a, b] : edges) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() > header->first) throw ParseError("more vertices in edges than header announces");
  for (std::size_t k = 0; labels.size() < header->first; ++k) labels.push_back("_iso" + std::to_string(k));
  VisibilityGraph g(labels);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  if (g.edge_count() != header->second) throw ParseError("edge count does not match header");
  return g;
}

}  // namespace pvg
