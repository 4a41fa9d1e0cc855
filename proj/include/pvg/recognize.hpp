#pragma once

// Desk-scale oracles: grid-search PVG recognition for tiny graphs, realization
// checking, and incidence-pattern search.
//
// Grid bound k means coordinates in {0, ..., k}, i.e. a bounding box of side k.

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pvg/fan.hpp"
#include "pvg/parallel.hpp"
#include "pvg/pvg_core.hpp"

namespace pvg {

class SearchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RecognizeCaps {
  std::size_t max_vertices = 9;
  long max_grid = 16;
  std::size_t max_pattern_points = 12;
};

struct GridPoint {
  long x = 0;
  long y = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct RealizationQuery {
  VisibilityGraph target;
  long k = 5;
  std::optional<long> k_y;        // separate height bound; defaults to k
  bool symmetry_breaking = true;  // first vertex pinned, second with x >= 0
  std::vector<std::vector<std::size_t>> rows;  // vertex groups kept on one horizontal line
  std::vector<std::size_t> order;              // placement order; empty means degree-descending
  bool deterministic = true;
  RecognizeCaps caps;
};

enum class SearchStatus { Found, Exhausted };

inline const char* to_string(SearchStatus s) { return s == SearchStatus::Found ? "FOUND" : "EXHAUSTED"; }

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t prunes = 0;
  std::uint64_t solutions = 0;

  SearchStats& operator+=(const SearchStats& o) {
    nodes += o.nodes;
    prunes += o.prunes;
    solutions += o.solutions;
    return *this;
  }
};

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<PointSet<Rational>> realization;
  SearchStats stats;
};

// ---------------------------------------------------------------------------
// Isomorphism and realization checks
// ---------------------------------------------------------------------------

namespace detail {

/// Color refinement over the disjoint union, so colors are comparable across graphs.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colors(const VisibilityGraph& a,
                                                                                   const VisibilityGraph& b) {
  const std::size_t na = a.size();
  const std::size_t n = na + b.size();
  auto nbrs = [&](std::size_t v) -> const std::vector<std::size_t>& {
    return v < na ? a.neighbors(v) : b.neighbors(v - na);
  };
  auto shift = [&](std::size_t v) { return v < na ? std::size_t{0} : na; };
  std::vector<std::size_t> color(n);
  for (std::size_t v = 0; v < n; ++v) color[v] = nbrs(v).size();
  std::size_t classes = 0;
  for (;;) {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> sig;
      for (std::size_t u : nbrs(v)) sig.push_back(color[u + shift(v)]);
      std::sort(sig.begin(), sig.end());
      next[v] = ids.emplace(std::make_pair(color[v], std::move(sig)), ids.size()).first->second;
    }
    color = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {std::vector<std::size_t>(color.begin(), color.begin() + static_cast<long>(na)),
          std::vector<std::size_t>(color.begin() + static_cast<long>(na), color.end())};
}

}  // namespace detail

/// Vertex map a -> b preserving adjacency, if one exists.
inline std::optional<std::vector<std::size_t>> find_isomorphism(const VisibilityGraph& a, const VisibilityGraph& b) {
  const std::size_t n = a.size();
  if (b.size() != n || a.edge_count() != b.edge_count()) return std::nullopt;
  const auto [ca, cb] = detail::refine_colors(a, b);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::map<std::size_t, std::size_t> class_size;
  for (std::size_t c : ca) ++class_size[c];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t u, std::size_t v) { return class_size[ca[u]] < class_size[ca[v]]; });
  std::vector<std::size_t> map(n, detail::kNone);
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t)> extend = [&](std::size_t d) {
    if (d == n) return true;
    const std::size_t u = order[d];
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v] || cb[v] != ca[u]) continue;
      bool ok = true;
      for (std::size_t e = 0; e < d && ok; ++e) {
        const std::size_t w = order[e];
        ok = a.adjacent(u, w) == b.adjacent(v, map[w]);
      }
      if (!ok) continue;
      map[u] = v;
      used[v] = 1;
      if (extend(d + 1)) return true;
      used[v] = 0;
    }
    map[u] = detail::kNone;
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return map;
}

/// All adjacency-preserving permutations of `g` (at most `limit`).
inline std::vector<std::vector<std::size_t>> automorphisms(const VisibilityGraph& g, std::size_t limit = 1000000) {
  const std::size_t n = g.size();
  const auto colors = detail::refine_colors(g, g).first;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> map(n, detail::kNone);
  std::vector<char> used(n, 0);
  std::function<void(std::size_t)> extend = [&](std::size_t u) {
    if (out.size() >= limit) return;
    if (u == n) {
      out.push_back(map);
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v] || colors[v] != colors[u]) continue;
      bool ok = true;
      for (std::size_t w = 0; w < u && ok; ++w) ok = g.adjacent(u, w) == g.adjacent(v, map[w]);
      if (!ok) continue;
      map[u] = v;
      used[v] = 1;
      extend(u + 1);
      used[v] = 0;
    }
  };
  extend(0);
  return out;
}

struct RealizationReport {
  bool ok = true;
  std::string message;
};

/**
 * Does `ps` realize `g`? Labeled mode compares under shared labels and names
 * the first wrong pair with its blocker; unlabeled mode checks isomorphism.
 */
template <class T>
RealizationReport check_realization(const PointSet<T>& ps, const VisibilityGraph& g, bool labeled) {
  if (ps.size() != g.size()) {
    throw SearchError("check_realization: " + std::to_string(ps.size()) + " points for " + std::to_string(g.size()) +
                      " vertices");
  }
  const VisibilityGraph h = visibility_graph(ps);
  RealizationReport rep;
  if (!labeled) {
    if (!find_isomorphism(g, h)) {
      rep.ok = false;
      rep.message = "not isomorphic: visibility graph has " + std::to_string(h.edge_count()) + " edges, target has " +
                    std::to_string(g.edge_count());
    }
    return rep;
  }
  std::vector<std::size_t> at(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) at[v] = ps.index_of(g.label(v));
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v = u + 1; v < g.size(); ++v) {
      const bool want = g.adjacent(u, v);
      if (want == h.adjacent(at[u], at[v])) continue;
      rep.ok = false;
      if (want) {
        std::string blocker;
        for (std::size_t w = 0; w < ps.size() && blocker.empty(); ++w) {
          if (on_open_segment(ps.point(at[u]), ps.point(at[v]), ps.point(w))) blocker = ps.label(w);
        }
        rep.message = "edge " + g.label(u) + "-" + g.label(v) + " is blocked by " + blocker;
      } else {
        rep.message = "non-edge " + g.label(u) + "-" + g.label(v) + " has no blocker";
      }
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

namespace detail {

inline long cross(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline bool strictly_between(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  if (cross(a, b, c) != 0) return false;
  const long dot = (c.x - a.x) * (b.x - a.x) + (c.y - a.y) * (b.y - a.y);
  const long len = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
  return dot > 0 && dot < len;
}

/// Labeled backtracking over grid cells. Edges can only be destroyed by later
/// points, so a blocked edge prunes at once, while a visible non-edge prunes
/// only when no lattice cell on it is left for a future point.
class GridSearch {
 public:
  using Visit = std::function<bool(const std::vector<GridPoint>&)>;

  GridSearch(const RealizationQuery& q, std::vector<std::size_t> order)
      : g_(q.target), order_(std::move(order)), n_(q.target.size()), kx_(q.k), ky_(q.k_y.value_or(q.k)),
        pin_(q.symmetry_breaking), pos_(n_), placed_(n_, 0), row_of_(n_, kNone) {
    for (std::size_t r = 0; r < q.rows.size(); ++r) {
      for (std::size_t v : q.rows[r]) row_of_.at(v) = r;
    }
    row_y_.assign(q.rows.size(), std::nullopt);
    row_count_.assign(q.rows.size(), 0);
  }

  /// Candidate cells for the vertex placed at `depth`, given the current partial placement.
  std::vector<GridPoint> candidates(std::size_t depth) const {
    std::vector<GridPoint> out;
    const std::size_t v = order_[depth];
    if (pin_ && depth == 0) return {GridPoint{0, 0}};
    const long x0 = pin_ ? -kx_ : 0, x1 = kx_;
    long y0 = pin_ ? -ky_ : 0, y1 = ky_;
    if (row_of_[v] != kNone && row_y_[row_of_[v]]) y0 = y1 = *row_y_[row_of_[v]];
    for (long x = (pin_ && depth == 1) ? 0 : x0; x <= x1; ++x) {
      if (depth > 0 && (std::max(maxx_, x) - std::min(minx_, x) > kx_)) continue;
      for (long y = y0; y <= y1; ++y) {
        if (depth > 0 && (std::max(maxy_, y) - std::min(miny_, y) > ky_)) continue;
        out.push_back({x, y});
      }
    }
    return out;
  }

  bool feasible(std::size_t depth, const GridPoint& c) const {
    const std::size_t v = order_[depth];
    const std::size_t remaining = n_ - depth - 1;
    for (std::size_t e = 0; e < depth; ++e) {
      if (pos_[order_[e]] == c) return false;
    }
    for (std::size_t e = 0; e < depth; ++e) {
      const std::size_t u = order_[e];
      bool blocked = false;
      for (std::size_t f = 0; f < depth && !blocked; ++f) {
        if (f != e) blocked = strictly_between(pos_[u], c, pos_[order_[f]]);
      }
      if (g_.adjacent(u, v)) {
        if (blocked) return false;
      } else if (!blocked) {
        if (remaining == 0 || std::gcd(std::abs(c.x - pos_[u].x), std::abs(c.y - pos_[u].y)) < 2) return false;
      }
      // The new point must not sit inside an existing sightline.
      for (std::size_t f = e + 1; f < depth; ++f) {
        const std::size_t w = order_[f];
        if (g_.adjacent(u, w) && strictly_between(pos_[u], pos_[w], c)) return false;
      }
    }
    return true;
  }

  bool complete_ok() const {
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = u + 1; v < n_; ++v) {
        bool blocked = false;
        for (std::size_t w = 0; w < n_ && !blocked; ++w) {
          if (w != u && w != v) blocked = strictly_between(pos_[u], pos_[v], pos_[w]);
        }
        if (g_.adjacent(u, v) == blocked) return false;
      }
    }
    return true;
  }

  /// Runs from `depth`; returns false once `visit` asks to stop.
  bool run(std::size_t depth, const Visit& visit) {
    if (depth == n_) {
      if (!complete_ok()) {
        ++stats.prunes;
        return true;
      }
      ++stats.solutions;
      return visit(normalized());
    }
    for (const auto& c : candidates(depth)) {
      if (!descend(depth, c, visit)) return false;
    }
    return true;
  }

  /// Places one vertex without recursing; false if infeasible.
  bool seed(std::size_t depth, const GridPoint& c) {
    if (!feasible(depth, c)) return false;
    place(depth, order_[depth], c);
    return true;
  }

  void cancel_below(const std::atomic<std::size_t>* best, std::size_t branch) {
    best_ = best;
    branch_ = branch;
  }

  bool descend(std::size_t depth, const GridPoint& c, const Visit& visit) {
    if (best_ && best_->load(std::memory_order_relaxed) < branch_) return false;
    ++stats.nodes;
    if (!feasible(depth, c)) {
      ++stats.prunes;
      return true;
    }
    const std::size_t v = order_[depth];
    const auto saved = std::array<long, 4>{minx_, maxx_, miny_, maxy_};
    place(depth, v, c);
    const bool go_on = run(depth + 1, visit);
    unplace(v);
    minx_ = saved[0], maxx_ = saved[1], miny_ = saved[2], maxy_ = saved[3];
    return go_on;
  }

  std::vector<GridPoint> normalized() const {
    std::vector<GridPoint> out(pos_);
    for (auto& p : out) p = {p.x - minx_, p.y - miny_};
    return out;
  }

  SearchStats stats;

 private:
  void place(std::size_t depth, std::size_t v, const GridPoint& c) {
    pos_[v] = c;
    placed_[v] = 1;
    if (depth == 0) {
      minx_ = maxx_ = c.x;
      miny_ = maxy_ = c.y;
    } else {
      minx_ = std::min(minx_, c.x), maxx_ = std::max(maxx_, c.x);
      miny_ = std::min(miny_, c.y), maxy_ = std::max(maxy_, c.y);
    }
    if (row_of_[v] != kNone) {
      row_y_[row_of_[v]] = c.y;
      ++row_count_[row_of_[v]];
    }
  }

  void unplace(std::size_t v) {
    placed_[v] = 0;
    if (row_of_[v] != kNone && --row_count_[row_of_[v]] == 0) row_y_[row_of_[v]] = std::nullopt;
  }

  const VisibilityGraph& g_;
  std::vector<std::size_t> order_;
  std::size_t n_;
  long kx_, ky_;
  bool pin_;
  std::vector<GridPoint> pos_;
  std::vector<char> placed_;
  std::vector<std::size_t> row_of_;
  std::vector<std::optional<long>> row_y_;
  std::vector<std::size_t> row_count_;
  long minx_ = 0, maxx_ = 0, miny_ = 0, maxy_ = 0;
  const std::atomic<std::size_t>* best_ = nullptr;
  std::size_t branch_ = 0;
};

inline std::vector<std::size_t> placement_order(const RealizationQuery& q) {
  const std::size_t n = q.target.size();
  if (!q.order.empty()) {
    auto sorted = q.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i || sorted.size() != n) throw SearchError("placement order must be a permutation of vertices");
    }
    return q.order;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return q.target.degree(a) > q.target.degree(b); });
  return order;
}

inline void check_query(const RealizationQuery& q) {
  if (q.k < 1 || q.k_y.value_or(q.k) < 1) throw SearchError("grid bound must be at least 1");
  if (q.k > q.caps.max_grid || q.k_y.value_or(q.k) > q.caps.max_grid) {
    throw SearchError("grid bound exceeds cap " + std::to_string(q.caps.max_grid));
  }
  if (q.target.size() > q.caps.max_vertices) {
    throw SearchError("graph has " + std::to_string(q.target.size()) + " vertices, cap is " +
                      std::to_string(q.caps.max_vertices));
  }
}

}  // namespace detail

/// Integer cells as a labeled point set over the target's labels.
inline PointSet<Rational> to_point_set(const VisibilityGraph& g, const std::vector<GridPoint>& cells) {
  PointSet<Rational> ps;
  for (std::size_t v = 0; v < g.size(); ++v) {
    ps.add(g.label(v), ProjPoint<Rational>(Rational(cells[v].x), Rational(cells[v].y)));
  }
  return ps;
}

/// Every realization (up to the symmetry breaking) in search order; `visit` returns false to stop.
inline SearchStats enumerate_realizations(const RealizationQuery& q,
                                          const std::function<bool(const std::vector<GridPoint>&)>& visit) {
  detail::check_query(q);
  detail::GridSearch s(q, detail::placement_order(q));
  if (q.target.size() > 0) s.run(0, visit);
  return s.stats;
}

inline SearchResult recognize_on_grid(const RealizationQuery& q) {
  detail::check_query(q);
  const auto order = detail::placement_order(q);
  SearchResult res;
  const std::size_t n = q.target.size();
  if (n == 0) {
    res.status = SearchStatus::Found;
    res.realization = PointSet<Rational>();
    return res;
  }
  std::optional<std::vector<GridPoint>> found;
  auto first = [&](const std::vector<GridPoint>& cells) {
    found = cells;
    return false;
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (q.deterministic || hw == 1 || n < 3) {
    detail::GridSearch s(q, order);
    s.run(0, first);
    res.stats = s.stats;
  } else {
    // Split over the first two placements; the lowest branch with a hit wins.
    std::vector<std::pair<GridPoint, GridPoint>> work;
    detail::GridSearch root(q, order);
    for (const auto& c0 : root.candidates(0)) {
      detail::GridSearch t(q, order);
      if (!t.seed(0, c0)) continue;
      for (const auto& c1 : t.candidates(1)) work.emplace_back(c0, c1);
    }
    std::atomic<std::size_t> best{work.size()};
    std::vector<std::optional<std::vector<GridPoint>>> hits(work.size());
    std::vector<SearchStats> stats(work.size());
    detail::parallel_for(
        work.size(),
        [&](std::size_t i) {
          if (best.load() < i) return;
          detail::GridSearch t(q, order);
          t.seed(0, work[i].first);
          t.cancel_below(&best, i);
          t.descend(1, work[i].second, [&](const std::vector<GridPoint>& cells) {
            hits[i] = cells;
            std::size_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            return false;
          });
          stats[i] = t.stats;
        },
        1);
    for (const auto& st : stats) res.stats += st;
    for (const auto& h : hits) {
      if (h) {
        found = h;
        break;
      }
    }
  }
  if (found) {
    res.status = SearchStatus::Found;
    res.realization = to_point_set(q.target, *found);
    const auto rep = check_realization(*res.realization, q.target, true);
    if (!rep.ok) throw std::logic_error("grid search produced an invalid realization: " + rep.message);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Incidence patterns
// ---------------------------------------------------------------------------

struct IncidencePattern {
  std::size_t points = 0;
  std::vector<std::vector<std::size_t>> lines;
  std::vector<std::array<std::size_t, 3>> forbidden;  // triples that must not be collinear

  /// Forbids every triple not contained in a listed line.
  static IncidencePattern exact(std::size_t points, std::vector<std::vector<std::size_t>> lines) {
    IncidencePattern p{points, std::move(lines), {}};
    std::vector<std::vector<char>> on(p.lines.size(), std::vector<char>(points, 0));
    for (std::size_t l = 0; l < p.lines.size(); ++l) {
      for (std::size_t i : p.lines[l]) on[l].at(i) = 1;
    }
    for (std::size_t a = 0; a < points; ++a) {
      for (std::size_t b = a + 1; b < points; ++b) {
        for (std::size_t c = b + 1; c < points; ++c) {
          bool together = false;
          for (std::size_t l = 0; l < p.lines.size() && !together; ++l) together = on[l][a] && on[l][b] && on[l][c];
          if (!together) p.forbidden.push_back({a, b, c});
        }
      }
    }
    return p;
  }
};

/// Nine points and nine lines of the Perles configuration, all other triples forbidden.
inline IncidencePattern perles_pattern() {
  const auto cfg = perles_configuration();
  return IncidencePattern::exact(cfg.points.size(), cfg.lines);
}

/// Six pairwise meets of four lines in general position.
inline IncidencePattern complete_quadrilateral_pattern() {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) id[{i, j}] = id.size();
  }
  std::vector<std::vector<std::size_t>> lines(4);
  for (const auto& [ij, k] : id) {
    lines[ij.first].push_back(k);
    lines[ij.second].push_back(k);
  }
  return IncidencePattern::exact(6, lines);
}

namespace detail {

class PatternSearch {
 public:
  PatternSearch(const IncidencePattern& p, long k) : p_(p), k_(k), pos_(p.points), placed_(p.points, 0) {
    lines_of_.resize(p.points);
    for (std::size_t l = 0; l < p.lines.size(); ++l) {
      for (std::size_t i : p.lines[l]) lines_of_.at(i).push_back(l);
    }
    forbidden_of_.resize(p.points);
    for (std::size_t t = 0; t < p.forbidden.size(); ++t) {
      for (std::size_t i : p.forbidden[t]) forbidden_of_.at(i).push_back(t);
    }
    order_ = greedy_order();
  }

  std::optional<std::vector<GridPoint>> run() {
    if (p_.points == 0) return std::vector<GridPoint>{};
    if (step(0)) return pos_;
    return std::nullopt;
  }

  SearchStats stats;

 private:
  // Next point: most lines already pinned by two placed points, then most lines touched.
  std::vector<std::size_t> greedy_order() const {
    std::vector<std::size_t> order;
    std::vector<char> in(p_.points, 0);
    std::vector<std::size_t> count(p_.lines.size(), 0);
    for (std::size_t d = 0; d < p_.points; ++d) {
      std::size_t best = kNone;
      std::pair<std::size_t, std::size_t> best_key{0, 0};
      for (std::size_t i = 0; i < p_.points; ++i) {
        if (in[i]) continue;
        std::pair<std::size_t, std::size_t> key{0, 0};
        for (std::size_t l : lines_of_[i]) {
          key.first += count[l] >= 2 ? 1 : 0;
          key.second += count[l] >= 1 ? 1 : 0;
        }
        if (best == kNone || key > best_key) best = i, best_key = key;
      }
      in[best] = 1;
      order.push_back(best);
      for (std::size_t l : lines_of_[best]) ++count[l];
    }
    return order;
  }

  bool fits(std::size_t i, const GridPoint& c) const {
    for (std::size_t j = 0; j < p_.points; ++j) {
      if (placed_[j] && pos_[j] == c) return false;
    }
    for (std::size_t l : lines_of_[i]) {
      std::size_t a = kNone, b = kNone;
      for (std::size_t j : p_.lines[l]) {
        if (j == i || !placed_[j]) continue;
        if (a == kNone) {
          a = j;
        } else {
          b = j;
          break;
        }
      }
      if (b != kNone && cross(pos_[a], pos_[b], c) != 0) return false;
    }
    for (std::size_t t : forbidden_of_[i]) {
      const auto& f = p_.forbidden[t];
      std::size_t others[2], m = 0;
      for (std::size_t j : f) {
        if (j != i) others[m++] = j;
      }
      if (placed_[others[0]] && placed_[others[1]] && cross(pos_[others[0]], pos_[others[1]], c) == 0) return false;
    }
    return true;
  }

  bool step(std::size_t d) {
    if (d == order_.size()) return true;
    const std::size_t i = order_[d];
    for (long x = 0; x <= k_; ++x) {
      for (long y = 0; y <= k_; ++y) {
        ++stats.nodes;
        const GridPoint c{x, y};
        if (!fits(i, c)) {
          ++stats.prunes;
          continue;
        }
        pos_[i] = c;
        placed_[i] = 1;
        if (step(d + 1)) return true;
        placed_[i] = 0;
      }
    }
    return false;
  }

  const IncidencePattern& p_;
  long k_;
  std::vector<GridPoint> pos_;
  std::vector<char> placed_;
  std::vector<std::vector<std::size_t>> lines_of_;
  std::vector<std::vector<std::size_t>> forbidden_of_;
  std::vector<std::size_t> order_;
};

}  // namespace detail

/// Exact check of a placement against the pattern.
template <class T>
bool pattern_holds(const IncidencePattern& p, const std::vector<ProjPoint<T>>& pts) {
  if (pts.size() != p.points) return false;
  for (const auto& l : p.lines) {
    for (std::size_t m = 2; m < l.size(); ++m) {
      if (!collinear(pts[l[0]], pts[l[1]], pts[l[m]])) return false;
    }
  }
  for (const auto& f : p.forbidden) {
    if (collinear(pts[f[0]], pts[f[1]], pts[f[2]])) return false;
  }
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (pts[a] == pts[b]) return false;
    }
  }
  return true;
}

/// Places the pattern on {0..k}^2; labels are P1, P2, ...
inline SearchResult search_incidence_pattern(const IncidencePattern& p, long k, const RecognizeCaps& caps = {}) {
  if (k < 1) throw SearchError("grid bound must be at least 1");
  if (k > caps.max_grid) throw SearchError("grid bound exceeds cap " + std::to_string(caps.max_grid));
  if (p.points > caps.max_pattern_points) {
    throw SearchError("pattern has " + std::to_string(p.points) + " points, cap is " +
                      std::to_string(caps.max_pattern_points));
  }
  for (const auto& l : p.lines) {
    for (std::size_t i : l) {
      if (i >= p.points) throw SearchError("pattern line refers to point " + std::to_string(i));
    }
  }
  detail::PatternSearch s(p, k);
  SearchResult res;
  const auto found = s.run();
  res.stats = s.stats;
  if (found) {
    res.status = SearchStatus::Found;
    res.stats.solutions = 1;
    PointSet<Rational> ps;
    std::vector<ProjPoint<Rational>> pts;
    for (std::size_t i = 0; i < p.points; ++i) {
      pts.emplace_back(Rational((*found)[i].x), Rational((*found)[i].y));
      ps.add("P" + std::to_string(i + 1), pts.back());
    }
    if (!pattern_holds(p, pts)) throw std::logic_error("pattern search produced an invalid placement");
    res.realization = std::move(ps);
  }
  return res;
}

}  // namespace pvg
