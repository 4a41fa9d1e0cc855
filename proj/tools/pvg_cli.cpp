// pvg: command-line front end. Exit codes: 0 success or pass, 1 fail report,
// 2 usage error or unreadable input.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pvg/fan.hpp"
#include "pvg/pvg_core.hpp"
#include "pvg/recognize.hpp"
#include "pvg/reduce.hpp"
#include "pvg/svg.hpp"
#include "pvg/vonstaudt.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pvg;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Report with exit code 1 and a message.
struct FailReport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

bool looks_quadratic(const std::string& text) { return text.find("sqrt(") != std::string::npos; }

std::vector<std::vector<std::string>> records(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string f;
    while (ls >> f) fields.push_back(f);
    if (!fields.empty()) out.push_back(std::move(fields));
  }
  return out;
}

/// "[name] x1 y1 x2 y2" per line.
std::pair<std::vector<Segment<Rational>>, std::vector<std::string>> read_segments(const std::string& path) {
  std::vector<Segment<Rational>> segs;
  std::vector<std::string> names;
  std::size_t k = 0;
  for (const auto& r : records(read_text(path))) {
    ++k;
    if (r.size() != 4 && r.size() != 5) throw ParseError("segment record " + std::to_string(k) + ": expected [name] x1 y1 x2 y2");
    const std::size_t o = r.size() - 4;
    names.push_back(o ? r[0] : "S" + std::to_string(k));
    segs.emplace_back(ProjPoint<Rational>(Rational::parse(r[o]), Rational::parse(r[o + 1])),
                      ProjPoint<Rational>(Rational::parse(r[o + 2]), Rational::parse(r[o + 3])));
  }
  return {segs, names};
}

template <class T>
void print_construction_summary(const ConstructionOutput<T>& c, const fs::path& dir, bool as_json) {
  if (as_json) {
    json j;
    j["kind"] = c.kind;
    j["points"] = c.points.size();
    j["edges"] = c.graph.edge_count();
    j["declared"] = c.declared.size();
    j["incidental"] = c.incidental.size();
    json meta = json::object();
    for (const auto& [k, v] : c.meta) meta[k] = v;
    j["meta"] = meta;
    j["output"] = dir.string();
    std::cout << j.dump() << '\n';
  } else {
    std::cout << c.kind << ": " << c.points.size() << " points, " << c.graph.edge_count() << " edges, "
              << c.declared.size() << " declared groups -> " << dir.string() << '\n';
  }
}

bool faithful_mode(const std::string& mode) {
  if (mode == "faithful") return true;
  if (mode == "scaled") return false;
  throw UsageError("--mode must be faithful or scaled");
}

// ---------------------------------------------------------------------------

template <class T>
int compute_as(const std::string& text, const std::string& out, bool as_json) {
  std::istringstream in(text);
  const auto ps = read_point_set<T>(in);
  const auto g = visibility_graph(ps);
  std::ostringstream gs;
  write_graph(gs, g);
  if (as_json) {
    if (!out.empty()) write_text(out, gs.str());
    json j;
    j["points"] = ps.size();
    j["edges"] = g.edge_count();
    std::cout << j.dump() << '\n';
  } else {
    write_text(out, gs.str());
  }
  return 0;
}

ConstructionOutput<Rational> gadget_construction(const GadgetInstance<Rational>& g) {
  ConstructionOutput<Rational> c;
  c.kind = std::string("gadget-") + (g.kind == GadgetKind::Add ? "add" : "mul");
  std::map<std::string, std::string> label_of;
  auto add = [&](const std::string& role, const std::string& label, const ProjPoint<Rational>& p) {
    if (!p.is_affine()) return;
    if (const auto i = c.points.find_point(p)) {
      label_of[role] = c.points.label(*i);
      c.roles[*i].push_back(role);
      return;
    }
    c.points.add(label, p);
    c.roles.push_back({role});
    label_of[role] = label;
  };
  add("0", "zero", g.frame.zero);
  add("1", "one", g.frame.one);
  for (const auto& [role, p] : g.points) add(role, role, p);
  for (const auto& grp : g.groups) {
    CollinearGroup cg{grp.name, "sightline", {}};
    for (const auto& r : grp.roles) {
      const auto it = label_of.find(r);
      if (it == label_of.end()) continue;
      if (std::find(cg.members.begin(), cg.members.end(), it->second) == cg.members.end()) {
        cg.members.push_back(it->second);
      }
    }
    if (cg.members.size() >= 2) c.declared.push_back(std::move(cg));
  }
  c.graph = visibility_graph(c.points);
  c.set_meta("value_z", value(g.frame, g.at("z")).to_string());
  c.set_meta("degenerate", g.degenerate ? "yes" : "no");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point visibility graphs: exact computation, constructions, reductions and recognition"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  bool as_json = false;
  std::string out;
  std::string mode = "scaled";

  auto add_common = [&](CLI::App* sc, bool with_out, bool out_required) {
    sc->add_option("--seed", seed, "Seed for deterministic placement")->capture_default_str();
    sc->add_flag("--json", as_json, "Machine-readable report on stdout");
    if (with_out) {
      auto* o = sc->add_option("-o,--output", out, "Output path");
      if (out_required) o->required();
    }
  };

  std::string input;
  auto* compute = app.add_subcommand("compute", "Visibility graph of a point file");
  compute->add_option("points", input, "Point file: label x y per line")->required();
  add_common(compute, true, false);

  bool allow_multi = false;
  auto* fan = app.add_subcommand("fan", "Fan over segments between x = 0 and y = 0");
  fan->add_option("segments", input, "Segment file: [name] x1 y1 x2 y2 per line")->required();
  fan->add_flag("--allow-multiple-crossings", allow_multi, "Permit three or more segments through a point");
  add_common(fan, true, true);

  std::string height = "1";
  std::size_t bundle = 2, extension = 2;
  bool singleton_rays = false;
  auto* genfan = app.add_subcommand("genfan", "Generalized fan over segments between y = 0 and y = height");
  genfan->add_option("segments", input, "Segment file: [name] x1 y1 x2 y2 per line")->required();
  genfan->add_option("--height", height, "Height of the upper line")->capture_default_str();
  genfan->add_option("--bundle", bundle, "Bundle size B (scaled mode)")->capture_default_str();
  genfan->add_option("--extension", extension, "Extension count E (scaled mode)")->capture_default_str();
  genfan->add_option("--mode", mode, "faithful | scaled")->capture_default_str();
  genfan->add_flag("--singleton-rays", singleton_rays, "Use one plain ray for single crossings");
  add_common(genfan, true, true);

  long rows = 0, cols = 0;
  auto* grid = app.add_subcommand("grid", "Integer grid with r rows and q columns");
  grid->add_option("rows", rows)->required();
  grid->add_option("columns", cols)->required();
  add_common(grid, true, true);

  auto* perles = app.add_subcommand("perles", "Perles configuration in a fan, exact over Q(sqrt 5)");
  add_common(perles, true, true);

  auto* arrangement = app.add_subcommand("arrangement", "Fan fixing a line arrangement");
  arrangement->add_option("lines", input, "Line file: [name] a b c per line (a x + b y + c = 0)")->required();
  add_common(arrangement, true, true);

  std::string gkind, gx, gy;
  auto* gadget = app.add_subcommand("gadget", "Addition or multiplication gadget on the line y = 0");
  gadget->add_option("kind", gkind, "add | mul")->required()->check(CLI::IsMember({"add", "mul"}));
  gadget->add_option("x", gx)->required();
  gadget->add_option("y", gy)->required();
  add_common(gadget, true, true);

  std::string witness;
  std::size_t attempts = 20;
  auto* reduce = app.add_subcommand("reduce", "Compile a Shor normal form system with a witness");
  reduce->add_option("system", input, "System file: VARS n, then ADD/MUL i j k lines")->required();
  reduce->add_option("--witness", witness, "Witness file: x_i = value lines")->required();
  reduce->add_option("--bundle", bundle, "Bundle size B (scaled mode)")->capture_default_str();
  reduce->add_option("--extension", extension, "Extension count E (scaled mode)")->capture_default_str();
  reduce->add_option("--mode", mode, "faithful | scaled")->capture_default_str();
  reduce->add_option("--attempts", attempts, "Placement retries")->capture_default_str();
  add_common(reduce, true, true);

  auto* verify = app.add_subcommand("verify", "Re-check a reduction output directory");
  verify->add_option("dir", input)->required();
  add_common(verify, false, false);

  long k = 5;
  std::size_t max_vertices = 9;
  bool parallel = false;
  std::string pattern;
  auto* recognize = app.add_subcommand("recognize", "Grid search for a realization of a graph or incidence pattern");
  recognize->add_option("graph", input, "Graph file: header n m, then u v per edge");
  recognize->add_option("--grid", k, "Coordinates in 0..k")->capture_default_str();
  recognize->add_option("--max-vertices", max_vertices, "Vertex cap")->capture_default_str();
  recognize->add_option("--pattern", pattern, "Incidence pattern instead of a graph: perles | quadrilateral")
      ->check(CLI::IsMember({"perles", "quadrilateral"}));
  recognize->add_flag("--parallel", parallel, "Split the search across threads (statistics may vary)");
  add_common(recognize, true, false);

  double scale = 1.0;
  bool no_labels = false;
  int digits = 30;
  auto* render = app.add_subcommand("render", "SVG of a construction directory");
  render->add_option("dir", input)->required();
  render->add_option("--stroke", scale, "Stroke width multiplier")->capture_default_str();
  render->add_flag("--no-labels", no_labels);
  render->add_option("--digits", digits, "Significant digits of coordinates")->capture_default_str();
  add_common(render, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compute) {
      const auto text = read_text(input);
      return looks_quadratic(text) ? compute_as<QuadExt>(text, out, as_json) : compute_as<Rational>(text, out, as_json);
    }
    if (*fan) {
      FanSpec<Rational> spec;
      std::tie(spec.segments, spec.names) = read_segments(input);
      spec.allow_multiple_crossings = allow_multi;
      spec.seed = seed;
      const auto c = build_fan(spec);
      write_construction(out, c);
      print_construction_summary(c, out, as_json);
      return 0;
    }
    if (*genfan) {
      GenFanSpec<Rational> spec;
      std::tie(spec.segments, spec.names) = read_segments(input);
      spec.height = Rational::parse(height);
      spec.bundle_size = bundle;
      spec.extension_count = extension;
      spec.faithful = faithful_mode(mode);
      spec.rays_for_singletons = singleton_rays;
      spec.seed = seed;
      const auto c = build_generalized_fan(spec);
      write_construction(out, c);
      print_construction_summary(c, out, as_json);
      return 0;
    }
    if (*grid) {
      const auto c = build_grid(rows, cols);
      write_construction(out, c);
      print_construction_summary(c, out, as_json);
      return 0;
    }
    if (*perles) {
      const auto c = build_perles_fan(seed);
      if (!perles_incidence_ok(perles_configuration())) throw FailReport("Perles incidence audit failed");
      write_construction(out, c);
      print_construction_summary(c, out, as_json);
      return 0;
    }
    if (*arrangement) {
      std::vector<ProjLine<Rational>> lines;
      std::vector<std::string> names;
      std::size_t i = 0;
      for (const auto& r : records(read_text(input))) {
        ++i;
        if (r.size() != 3 && r.size() != 4) throw ParseError("line record " + std::to_string(i) + ": expected [name] a b c");
        const std::size_t o = r.size() - 3;
        names.push_back(o ? r[0] : "L" + std::to_string(i));
        lines.emplace_back(Rational::parse(r[o]), Rational::parse(r[o + 1]), Rational::parse(r[o + 2]));
      }
      const auto c = build_arrangement_fan(lines, names, seed);
      write_construction(out, c);
      print_construction_summary(c, out, as_json);
      return 0;
    }
    if (*gadget) {
      const auto frame = LineCoordinateFrame<Rational>::canonical();
      const auto kind = gkind == "add" ? GadgetKind::Add : GadgetKind::Mul;
      const auto x = locate(frame, Rational::parse(gx));
      const auto y = locate(frame, Rational::parse(gy));
      const auto anchors = place_anchors({}, kind, x, y, {});
      const auto g = kind == GadgetKind::Add ? add_gadget(frame, x, y, anchors.a, anchors.b)
                                             : mul_gadget(frame, x, y, anchors.a, anchors.b);
      const auto c = gadget_construction(g);
      write_construction(out, c);
      const auto audit = audit_gadget(g);
      if (as_json) {
        json j;
        j["kind"] = to_string(kind);
        j["x"] = gx;
        j["y"] = gy;
        j["z"] = c.meta_value("value_z");
        j["audit"] = audit ? *audit : "pass";
        j["output"] = out;
        std::cout << j.dump() << '\n';
      } else {
        std::cout << to_string(kind) << ' ' << gx << ' ' << gy << " -> z = " << c.meta_value("value_z") << " ("
                  << (audit ? *audit : "audit pass") << ")\n";
      }
      return audit ? 1 : 0;
    }
    if (*reduce) {
      const auto sys = parse_system(read_text(input));
      const auto w = parse_witness(read_text(witness), sys.n);
      ReduceParams params;
      params.bundle_size = bundle;
      params.extension_count = extension;
      params.faithful = faithful_mode(mode);
      params.seed = seed;
      params.max_attempts = attempts;
      const auto r = compile(sys, w, params);
      write_reduction(out, r);
      print_construction_summary(r.construction, out, as_json);
      return 0;
    }
    if (*verify) {
      if (!fs::is_directory(input)) throw UsageError("not a directory: " + input);
      const auto r = read_reduction(input);
      const auto rep = verify_output(r);
      if (as_json) {
        json j;
        j["ok"] = rep.ok;
        j["stage"] = rep.stage;
        j["message"] = rep.message;
        std::cout << j.dump() << '\n';
      } else {
        std::cout << (rep.ok ? "PASS" : "FAIL " + rep.stage + ": " + rep.message) << '\n';
      }
      return rep.ok ? 0 : 1;
    }
    if (*recognize) {
      SearchResult res;
      RecognizeCaps caps;
      caps.max_vertices = max_vertices;
      if (!pattern.empty()) {
        if (!input.empty()) throw UsageError("give either a graph file or --pattern");
        res = search_incidence_pattern(pattern == "perles" ? perles_pattern() : complete_quadrilateral_pattern(), k,
                                       caps);
      } else {
        if (input.empty()) throw UsageError("recognize needs a graph file or --pattern");
        std::istringstream in(read_text(input));
        RealizationQuery q;
        q.target = read_graph(in);
        q.k = k;
        q.caps = caps;
        q.deterministic = !parallel;
        res = recognize_on_grid(q);
      }
      if (res.realization && !out.empty()) {
        std::ostringstream ps;
        write_point_set(ps, *res.realization);
        write_text(out, ps.str());
      }
      if (as_json) {
        json j;
        j["status"] = to_string(res.status);
        j["grid"] = k;
        j["nodes"] = res.stats.nodes;
        j["prunes"] = res.stats.prunes;
        std::cout << j.dump() << '\n';
      } else {
        std::cout << to_string(res.status) << " (grid " << k << ", " << res.stats.nodes << " nodes, "
                  << res.stats.prunes << " prunes)\n";
        if (res.realization && out.empty()) write_point_set(std::cout, *res.realization);
      }
      return res.status == SearchStatus::Found ? 0 : 1;
    }
    if (*render) {
      if (!fs::is_directory(input)) throw UsageError("not a directory: " + input);
      SvgOptions opt;
      opt.stroke = scale;
      opt.labels = !no_labels;
      opt.digits = digits;
      const auto text = read_text((fs::path(input) / "points.txt").string());
      const std::string svg = looks_quadratic(text) ? render_svg(read_construction<QuadExt>(input), opt)
                                                    : render_svg(read_construction<Rational>(input), opt);
      write_text(out, svg);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SearchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const FailReport& e) {
    std::cerr << "fail: " << e.what() << '\n';
    return 1;
  } catch (const GeometryError& e) {
    std::cerr << "fail: " << e.what() << '\n';
    return 1;
  } catch (const ReductionError& e) {
    std::cerr << "fail: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
