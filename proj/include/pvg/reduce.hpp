#pragma once

/**
 * @file reduce.hpp
 * @brief Compiles a system of constraints x_i + x_j = x_k and x_i * x_j = x_k
 * with a rational witness into a generalized-fan point set whose visibility
 * graph encodes the system, together with a vertical-ordering certificate.
 */

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pvg/fan.hpp"
#include "pvg/vonstaudt.hpp"

namespace pvg {

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ShorConstraint {
  GadgetKind kind = GadgetKind::Add;
  std::size_t i = 0, j = 0, k = 0;  // 1-based
  std::size_t line = 0;
};

struct ShorSystem {
  std::size_t n = 0;
  std::vector<ShorConstraint> constraints;
};

/// values[v - 1] is x_v.
using Witness = std::vector<Rational>;

/// "VARS n" then "ADD i j k" / "MUL i j k" lines with 1 <= i <= j < k <= n.
inline ShorSystem parse_system(std::string_view text) {
  ShorSystem sys;
  bool have_vars = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    auto fail = [&](const std::string& why) { throw ParseError("line " + std::to_string(lineno) + ": " + why); };
    std::istringstream ls(s);
    std::string tag, extra;
    ls >> tag;
    if (tag == "VARS") {
      long n = 0;
      if (have_vars) fail("repeated VARS");
      if (!(ls >> n) || (ls >> extra) || n < 1) fail("expected 'VARS n' with n >= 1");
      sys.n = static_cast<std::size_t>(n);
      have_vars = true;
      continue;
    }
    if (tag != "ADD" && tag != "MUL") fail("unknown keyword '" + tag + "'");
    if (!have_vars) fail("constraint before VARS");
    long i = 0, j = 0, k = 0;
    if (!(ls >> i >> j >> k) || (ls >> extra)) fail("expected '" + tag + " i j k'");
    const long n = static_cast<long>(sys.n);
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n) fail("index out of range 1.." + std::to_string(n));
    if (i > j) fail("requires i <= j");
    if (j >= k) fail("requires j < k");
    sys.constraints.push_back({tag == "ADD" ? GadgetKind::Add : GadgetKind::Mul, static_cast<std::size_t>(i),
                               static_cast<std::size_t>(j), static_cast<std::size_t>(k), lineno});
  }
  if (!have_vars) throw ParseError("missing 'VARS n'");
  return sys;
}

inline std::string format_system(const ShorSystem& sys) {
  std::ostringstream os;
  os << "VARS " << sys.n << '\n';
  for (const auto& c : sys.constraints) os << to_string(c.kind) << ' ' << c.i << ' ' << c.j << ' ' << c.k << '\n';
  return os.str();
}

/// "x_i = value" lines; every variable must be given exactly once.
inline Witness parse_witness(std::string_view text, std::size_t n) {
  std::vector<std::optional<Rational>> vals(n);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    auto fail = [&](const std::string& why) { throw ParseError("line " + std::to_string(lineno) + ": " + why); };
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected 'x_i = value'");
    std::string lhs = detail::strip_comment(s.substr(0, eq));
    const std::string rhs = detail::strip_comment(s.substr(eq + 1));
    if (lhs.rfind("x_", 0) != 0 || lhs.size() < 3) fail("expected a variable 'x_i'");
    std::size_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoul(lhs.substr(2), &used);
      if (used != lhs.size() - 2) fail("bad variable index");
    } catch (const std::logic_error&) {
      fail("bad variable index");
    }
    if (v < 1 || v > n) fail("variable index out of range");
    if (vals[v - 1]) fail("variable x_" + std::to_string(v) + " given twice");
    try {
      vals[v - 1] = Rational::parse(rhs);
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  Witness w;
  for (std::size_t v = 0; v < n; ++v) {
    if (!vals[v]) throw ParseError("missing value for x_" + std::to_string(v + 1));
    w.push_back(*vals[v]);
  }
  return w;
}

inline std::string format_witness(const Witness& w) {
  std::ostringstream os;
  for (std::size_t v = 0; v < w.size(); ++v) os << "x_" << v + 1 << " = " << w[v].to_string() << '\n';
  return os.str();
}

/// First violated witness condition, if any.
inline std::optional<std::string> check_witness(const ShorSystem& sys, const Witness& w) {
  if (w.size() != sys.n) return "witness has " + std::to_string(w.size()) + " values for " + std::to_string(sys.n) + " variables";
  if (sys.n >= 1 && !(w[0] == Rational(1))) return "x_1 must be 1";
  for (std::size_t v = 1; v < w.size(); ++v) {
    if (!(w[v - 1] < w[v])) return "values must increase: x_" + std::to_string(v) + " >= x_" + std::to_string(v + 1);
  }
  for (const auto& c : sys.constraints) {
    const Rational& a = w[c.i - 1];
    const Rational& b = w[c.j - 1];
    const Rational got = c.kind == GadgetKind::Add ? a + b : a * b;
    if (!(got == w[c.k - 1])) {
      return std::string(to_string(c.kind)) + " " + std::to_string(c.i) + " " + std::to_string(c.j) + " " +
             std::to_string(c.k) + " fails: " + got.to_string() + " != " + w[c.k - 1].to_string();
    }
  }
  return std::nullopt;
}

struct CertificateGroup {
  std::string name;
  std::string relation;  // "level": equal heights; "band": a height range
  std::string equation;
  std::vector<std::string> labels;
};

/// Groups listed from top to bottom; each lies strictly above the next.
struct OrderingCertificate {
  std::vector<CertificateGroup> groups;
};

struct ReduceParams {
  std::size_t bundle_size = 2;
  std::size_t extension_count = 2;
  bool faithful = false;
  std::uint64_t seed = 1;
  std::size_t max_attempts = 20;
};

struct ReductionOutput {
  ShorSystem system;
  Witness witness;
  ConstructionOutput<Rational> construction;
  OrderingCertificate certificate;
  std::vector<std::size_t> order;  // gadget position -> constraint index (0-based)
};

namespace detail {

inline std::string gadget_prefix(std::size_t constraint) { return "g" + std::to_string(constraint + 1); }

inline std::optional<std::string> certificate_violation(const OrderingCertificate& cert, const PointSet<Rational>& ps,
                                                        const ProjMap<Rational>& to_canonical) {
  std::vector<std::pair<Rational, Rational>> ranges;
  for (const auto& g : cert.groups) {
    if (g.labels.empty()) return "certificate group " + g.name + " is empty";
    std::optional<Rational> lo, hi;
    for (const auto& l : g.labels) {
      if (!ps.contains(l)) return "certificate names unknown point '" + l + "'";
      const auto p = to_canonical.apply(ps.point(ps.index_of(l)));
      if (!p.is_affine()) return "certificate point '" + l + "' maps to infinity";
      if (!lo || p.y() < *lo) lo = p.y();
      if (!hi || *hi < p.y()) hi = p.y();
    }
    if (g.relation == "level" && !(*lo == *hi)) return "group " + g.name + " is not at a single height";
    ranges.emplace_back(*lo, *hi);
  }
  for (std::size_t k = 0; k + 1 < ranges.size(); ++k) {
    if (!(ranges[k + 1].second < ranges[k].first)) {
      return "group " + cert.groups[k].name + " is not above group " + cert.groups[k + 1].name;
    }
  }
  return std::nullopt;
}

inline bool tolerated_line(const ConstructionOutput<Rational>& out, const std::vector<std::size_t>& line,
                           const std::vector<std::string>& mul_prefixes) {
  for (const auto& prefix : mul_prefixes) {
    bool all = true;
    for (std::size_t i : line) {
      bool on = false;
      for (const auto& r : out.roles[i]) on = on || r.rfind(prefix, 0) == 0;
      all = all && on;
    }
    if (all) return true;
  }
  for (std::size_t i : line) {
    if (!out.has_role(i, "s1") && !out.has_role(i, "s2") && !out.has_role(i, "s3")) return false;
  }
  return true;
}

}  // namespace detail

/**
 * Builds the instance: variables on l, gadgets placed inductively on the
 * anchor line (additions first), then one generalized fan with a ray per
 * gadget point and a bundle between consecutive crossing groups.
 */
inline ReductionOutput compile(const ShorSystem& sys, const Witness& w, const ReduceParams& params = {}) {
  using T = Rational;
  if (auto bad = check_witness(sys, w)) throw ReductionError("witness rejected: " + *bad);
  if (sys.constraints.empty()) throw ReductionError("system has no constraints");
  std::vector<std::size_t> order;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < sys.constraints.size(); ++c) {
      if ((sys.constraints[c].kind == GadgetKind::Add) == (pass == 0)) order.push_back(c);
    }
  }
  for (std::size_t c : order) {
    const auto& con = sys.constraints[c];
    if (con.kind == GadgetKind::Mul && w[con.i - 1] == T(1)) {
      throw ReductionError("MUL " + std::to_string(con.i) + " " + std::to_string(con.j) + " " + std::to_string(con.k) +
                           " multiplies by 1; the gadget degenerates");
    }
  }
  const auto frame = LineCoordinateFrame<T>::canonical();
  std::vector<ProjPoint<T>> vars;
  for (const auto& v : w) vars.push_back(locate(frame, v));

  std::string last_failure;
  std::set<std::string> previous_signatures;
  for (std::size_t attempt = 0; attempt < params.max_attempts; ++attempt) {
    const std::uint64_t seed = params.seed + 7919ULL * attempt;
    detail::DrawRng rng(detail::fnv1a(format_system(sys)) ^ seed);
    std::vector<GadgetInstance<T>> gadgets;
    for (std::size_t c : order) {
      const auto& con = sys.constraints[c];
      const auto& x = vars[con.i - 1];
      const auto& y = vars[con.j - 1];
      const T jitter(rng.fraction(97));
      const T spread = (T(1) + T(rng.fraction(89))) / T(2);
      const auto pa = place_anchors(gadgets, con.kind, x, y, vars, jitter, spread);
      auto g = con.kind == GadgetKind::Add ? add_gadget(frame, x, y, pa.a, pa.b) : mul_gadget(frame, x, y, pa.a, pa.b);
      if (!(g.at("z") == vars[con.k - 1])) throw ReductionError("internal: gadget output misses x_" + std::to_string(con.k));
      gadgets.push_back(std::move(g));
    }

    GenFanSpec<T> spec;
    spec.height = T(1);
    spec.bundle_size = params.bundle_size;
    spec.extension_count = params.extension_count;
    spec.faithful = params.faithful;
    spec.seed = seed;
    std::vector<std::vector<std::size_t>> seg_owner;  // segment -> gadget position
    std::vector<std::pair<ProjPoint<T>, ProjPoint<T>>> segs;
    for (std::size_t t = 0; t < gadgets.size(); ++t) {
      const auto& g = gadgets[t];
      for (const auto& [lo, hi] : g.segments()) {
        spec.segments.emplace_back(g.at(lo), g.at(hi));
        spec.names.push_back(detail::gadget_prefix(order[t]) + "." + lo + "-" + hi);
        segs.emplace_back(g.at(lo), g.at(hi));
        seg_owner.push_back({t});
      }
    }
    // Interior points (c, d, e) and cross-gadget crossing groups I_2, ..., I_l.
    std::vector<ProjPoint<T>> interior;
    for (const auto& g : gadgets) {
      for (const char* r : {"c", "d", "e"}) {
        if (std::find(interior.begin(), interior.end(), g.at(r)) == interior.end()) interior.push_back(g.at(r));
        if (std::find(spec.plain_rays.begin(), spec.plain_rays.end(), g.at(r).y()) == spec.plain_rays.end()) {
          spec.plain_rays.push_back(g.at(r).y());
        }
      }
    }
    std::vector<std::vector<ProjPoint<T>>> bands(gadgets.size());
    for (std::size_t s = 0; s < segs.size(); ++s) {
      for (std::size_t r = s + 1; r < segs.size(); ++r) {
        const std::size_t ts = seg_owner[s][0], tr = seg_owner[r][0];
        if (ts == tr) continue;
        const auto hit = segment_intersection(Segment<T>(segs[s].first, segs[s].second),
                                              Segment<T>(segs[r].first, segs[r].second));
        if (const auto* p = std::get_if<ProjPoint<T>>(&hit)) {
          auto& band = bands[std::max(ts, tr)];
          if (std::find(band.begin(), band.end(), *p) == band.end()) band.push_back(*p);
        }
      }
    }
    std::vector<std::vector<ProjPoint<T>>> blocks{interior};
    for (std::size_t t = 1; t < bands.size(); ++t) {
      if (!bands[t].empty()) blocks.push_back(bands[t]);
    }
    auto lowest = [](const std::vector<ProjPoint<T>>& b) {
      T m = b.front().y();
      for (const auto& p : b) m = p.y() < m ? p.y() : m;
      return m;
    };
    auto highest = [](const std::vector<ProjPoint<T>>& b) {
      T m = b.front().y();
      for (const auto& p : b) m = m < p.y() ? p.y() : m;
      return m;
    };
    for (std::size_t k = 0; k + 1 < blocks.size(); ++k) {
      const T lo = highest(blocks[k + 1]), hi = lowest(blocks[k]);
      if (!(lo < hi)) throw ReductionError("internal: crossing groups interleave");
      spec.bundle_heights.push_back((lo + hi) / T(2));
    }
    spec.rays_for_singletons = true;
    spec.declared_groups = blocks;
    spec.marked_points.emplace_back("zero", frame.zero);
    for (std::size_t v = 0; v < vars.size(); ++v) spec.marked_points.emplace_back("x" + std::to_string(v + 1), vars[v]);

    ConstructionOutput<T> out;
    try {
      out = build_generalized_fan(spec);
    } catch (const GeometryError& e) {
      last_failure = e.what();
      continue;
    }
    std::vector<std::string> mul_prefixes;
    for (std::size_t c : order) {
      if (sys.constraints[c].kind == GadgetKind::Mul) mul_prefixes.push_back(detail::gadget_prefix(c) + ".");
    }
    // A line that survives re-perturbation with the same role pattern is forced
    // by the witness values and is kept; any other untolerated line triggers a retry.
    std::set<std::string> signatures;
    std::string first_bad;
    std::size_t structural = 0;
    for (auto& g : out.incidental) {
      std::vector<std::size_t> line;
      for (const auto& l : g.members) line.push_back(out.points.index_of(l));
      if (detail::tolerated_line(out, line, mul_prefixes)) continue;
      std::vector<std::string> parts;
      std::string shown;
      for (std::size_t i : line) {
        auto roles = out.roles[i];
        std::sort(roles.begin(), roles.end());
        std::string part;
        for (const auto& r : roles) part += (part.empty() ? "" : ",") + r;
        parts.push_back(part);
        shown += " " + out.points.label(i) + "(" + part + ")";
      }
      std::sort(parts.begin(), parts.end());
      std::string sig;
      for (const auto& part : parts) sig += part + ";";
      signatures.insert(sig);
      if (previous_signatures.count(sig) != 0) {
        ++structural;
        g.kind = "structural";
      } else if (first_bad.empty()) {
        first_bad = "accidental collinearity:" + shown;
      }
    }
    previous_signatures = std::move(signatures);
    if (!first_bad.empty()) {
      last_failure = first_bad;
      continue;
    }

    const ProjMap<T>& map = *out.frame_map;
    auto label_of = [&](const ProjPoint<T>& p) {
      const auto idx = out.points.find_point(map.apply(p));
      if (!idx) throw ReductionError("internal: point " + p.to_string() + " missing from the output");
      return out.points.label(*idx);
    };
    OrderingCertificate cert;
    CertificateGroup linf{"linf", "level", "1", {}};
    for (const auto& g : gadgets) {
      for (const char* r : {"a", "b", "f"}) {
        if (!g.has(r)) continue;
        const auto l = label_of(g.at(r));
        if (std::find(linf.labels.begin(), linf.labels.end(), l) == linf.labels.end()) linf.labels.push_back(l);
      }
    }
    cert.groups.push_back(std::move(linf));
    for (std::size_t t = gadgets.size(); t-- > 0;) {
      const auto& g = gadgets[t];
      const std::string name = detail::gadget_prefix(order[t]);
      if (g.kind == GadgetKind::Mul) {
        for (const char* r : {"e", "d", "c"}) cert.groups.push_back({name + "." + r, "level", "2", {label_of(g.at(r))}});
      } else {
        cert.groups.push_back({name + ".e", "level", "3", {label_of(g.at("e"))}});
        cert.groups.push_back({name + ".cd", "level", "3", {label_of(g.at("c")), label_of(g.at("d"))}});
      }
    }
    for (std::size_t k = 1; k < blocks.size(); ++k) {
      CertificateGroup band{"I" + std::to_string(k + 1), "band", "4", {}};
      for (const auto& p : blocks[k]) band.labels.push_back(label_of(p));
      std::sort(band.labels.begin(), band.labels.end());
      cert.groups.push_back(std::move(band));
    }
    CertificateGroup ell{"l", "level", "5", {label_of(frame.zero)}};
    for (const auto& v : vars) ell.labels.push_back(label_of(v));
    cert.groups.push_back(std::move(ell));
    if (auto bad = detail::certificate_violation(cert, out.points, map.inverse())) {
      throw ReductionError("internal: certificate fails: " + *bad);
    }

    out.kind = "reduction";
    std::string ord;
    for (std::size_t c : order) ord += (ord.empty() ? "" : ",") + std::to_string(c + 1);
    out.set_meta("constraints", std::to_string(sys.constraints.size()));
    out.set_meta("gadget_order", ord);
    out.set_meta("reduce_attempts", std::to_string(attempt + 1));
    out.set_meta("structural_collinearities", std::to_string(structural));
    out.set_meta("points", std::to_string(out.points.size()));
    out.set_meta("edges", std::to_string(out.graph.edge_count()));
    return {sys, w, std::move(out), std::move(cert), std::move(order)};
  }
  throw ReductionError("audit retries exhausted; last failure: " + last_failure);
}

struct VerifyReport {
  bool ok = true;
  std::string stage;    // collinearity, graph, witness, certificate
  std::string message;  // first discrepancy
};

/**
 * Recomputes everything from coordinates: declared collinearities, the
 * visibility graph, the witness read back through the cross-ratio frame, and
 * the ordering certificate.
 */
inline VerifyReport verify_output(const ReductionOutput& r) {
  const auto& out = r.construction;
  auto fail = [](std::string stage, std::string msg) { return VerifyReport{false, std::move(stage), std::move(msg)}; };
  if (auto bad = check_declared_collinear(out)) return fail("collinearity", *bad);
  const auto g = visibility_graph(out.points);
  if (!(g == out.graph)) {
    const auto a = g.edges(), b = out.graph.edges();
    std::vector<std::pair<std::string, std::string>> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    if (diff.empty()) return fail("graph", "vertex sets differ");
    const bool missing = std::binary_search(a.begin(), a.end(), diff.front());
    return fail("graph", "edge " + diff.front().first + " " + diff.front().second +
                             (missing ? " is visible but absent from the graph" : " is in the graph but blocked"));
  }
  if (auto bad = check_witness(r.system, r.witness)) return fail("witness", *bad);
  if (!out.frame_map) return fail("witness", "no frame map recorded");
  const auto frame = LineCoordinateFrame<Rational>::canonical().transformed(*out.frame_map);
  for (std::size_t v = 0; v < r.witness.size(); ++v) {
    const std::string role = "x" + std::to_string(v + 1);
    std::optional<std::size_t> idx;
    for (std::size_t i = 0; i < out.points.size() && !idx; ++i) {
      if (out.has_role(i, role)) idx = i;
    }
    if (!idx) return fail("witness", "no point carries role " + role);
    Rational got;
    try {
      got = value(frame, out.points.point(*idx));
    } catch (const GeometryError& e) {
      return fail("witness", role + ": " + e.what());
    }
    if (!(got == r.witness[v])) {
      return fail("witness", "x_" + std::to_string(v + 1) + " reads back as " + got.to_string() + ", witness says " +
                                 r.witness[v].to_string());
    }
  }
  if (auto bad = detail::certificate_violation(r.certificate, out.points, out.frame_map->inverse())) {
    return fail("certificate", *bad);
  }
  return {};
}

inline void write_certificate(std::ostream& os, const OrderingCertificate& c) {
  for (const auto& g : c.groups) {
    os << "GROUP " << g.name << ' ' << g.relation << ' ' << g.equation;
    for (const auto& l : g.labels) os << ' ' << l;
    os << '\n';
  }
}

inline OrderingCertificate read_certificate(std::istream& in) {
  OrderingCertificate c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string tag;
    CertificateGroup g;
    if (!(ls >> tag >> g.name >> g.relation >> g.equation) || tag != "GROUP" ||
        (g.relation != "level" && g.relation != "band")) {
      throw ParseError("certificate line " + std::to_string(lineno) + ": expected 'GROUP name level|band eq labels...'");
    }
    std::string l;
    while (ls >> l) g.labels.push_back(l);
    c.groups.push_back(std::move(g));
  }
  return c;
}

/// Writes points.txt, graph.txt, provenance.txt, certificate.txt, system.txt, witness.txt.
inline void write_reduction(const std::filesystem::path& dir, const ReductionOutput& r) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("points.txt");
    write_point_set(f, r.construction.points);
  }
  {
    auto f = open("graph.txt");
    write_graph(f, r.construction.graph);
  }
  {
    auto f = open("provenance.txt");
    write_provenance(f, r.construction);
  }
  {
    auto f = open("certificate.txt");
    write_certificate(f, r.certificate);
  }
  {
    auto f = open("system.txt");
    f << format_system(r.system);
  }
  {
    auto f = open("witness.txt");
    f << format_witness(r.witness);
  }
}

/// Graph over the given labels with the edges of a graph file.
inline VisibilityGraph read_graph_over(std::istream& in, const std::vector<std::string>& labels) {
  const auto file = read_graph(in);
  if (file.size() != labels.size()) {
    throw ParseError("graph has " + std::to_string(file.size()) + " vertices, point set has " +
                     std::to_string(labels.size()));
  }
  VisibilityGraph g(labels);
  for (const auto& [u, v] : file.edges()) {
    if (!g.has_vertex(u) || !g.has_vertex(v)) throw ParseError("graph edge " + u + " " + v + " names an unknown point");
    g.add_edge(u, v);
  }
  return g;
}

inline ReductionOutput read_reduction(const std::filesystem::path& dir) {
  auto open = [&](const char* name) {
    std::ifstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + (dir / name).string());
    return f;
  };
  auto slurp = [&](const char* name) {
    auto f = open(name);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  ReductionOutput r;
  {
    auto f = open("points.txt");
    r.construction.points = read_point_set<Rational>(f);
  }
  {
    auto f = open("graph.txt");
    r.construction.graph = read_graph_over(f, r.construction.points.labels());
  }
  {
    auto f = open("provenance.txt");
    read_provenance(f, r.construction);
  }
  {
    auto f = open("certificate.txt");
    r.certificate = read_certificate(f);
  }
  r.system = parse_system(slurp("system.txt"));
  r.witness = parse_witness(slurp("witness.txt"), r.system.n);
  return r;
}

}  // namespace pvg
