#pragma once

// Static SVG figures of constructions. Coordinates are scaled exactly and only
// then turned into decimals; nothing here feeds back into geometry.

#include <sstream>
#include <string>
#include <vector>

#include "pvg/fan.hpp"

namespace pvg {

struct SvgOptions {
  long size = 800;     // drawing area side in px
  long margin = 40;
  double stroke = 1.0;  // stroke width multiplier
  bool labels = true;
  int digits = 30;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string style_for(const std::string& kind, double w) {
  std::ostringstream s;
  if (kind == "ray") {
    s << "fill=\"none\" stroke=\"#4a6fa5\" stroke-width=\"" << w << "\" stroke-dasharray=\"6 4\"";
  } else if (kind == "bundle") {
    s << "fill=\"none\" stroke=\"#9aa5b1\" stroke-opacity=\"0.45\" stroke-width=\"" << 4 * w << "\"";
  } else if (kind == "extension") {
    s << "fill=\"none\" stroke=\"#b07d3a\" stroke-width=\"" << w << "\" stroke-opacity=\"0.7\"";
  } else if (kind == "boundary" || kind == "aux") {
    s << "fill=\"none\" stroke=\"#555555\" stroke-width=\"" << w << "\"";
  } else if (kind == "structural" || kind == "incidental") {
    s << "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"" << w << "\" stroke-dasharray=\"2 3\"";
  } else {
    s << "fill=\"none\" stroke=\"#222222\" stroke-width=\"" << 1.5 * w << "\"";
  }
  return s.str();
}

}  // namespace detail

/// Points as circles, declared groups as polylines, rays dashed, bundles shaded.
template <class T>
std::string render_svg(const ConstructionOutput<T>& c, const SvgOptions& opt = {}) {
  const long full = opt.size + 2 * opt.margin;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << full << "\" height=\"" << full << "\" viewBox=\"0 0 "
      << full << ' ' << full << "\">\n";
  const auto& ps = c.points;
  if (ps.empty()) {
    out << "</svg>\n";
    return out.str();
  }
  for (const auto& p : ps.points()) {
    if (!p.is_affine()) throw GeometryError("render_svg: point at infinity");
  }
  T minx = ps.point(0).x(), maxx = minx, miny = ps.point(0).y(), maxy = miny;
  for (const auto& p : ps.points()) {
    if (p.x() < minx) minx = p.x();
    if (maxx < p.x()) maxx = p.x();
    if (p.y() < miny) miny = p.y();
    if (maxy < p.y()) maxy = p.y();
  }
  T span = maxx - minx;
  if (span < maxy - miny) span = maxy - miny;
  if (sign(span) == 0) span = T(1);
  const T scale = T(opt.size) / span;
  std::vector<std::string> xs(ps.size()), ys(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    xs[i] = (T(opt.margin) + (ps.point(i).x() - minx) * scale).to_decimal(opt.digits);
    ys[i] = (T(opt.margin) + (maxy - ps.point(i).y()) * scale).to_decimal(opt.digits);
  }
  auto polyline = [&](const CollinearGroup& g, const std::string& kind) {
    out << "  <polyline class=\"" << detail::xml_escape(kind) << "\" data-name=\"" << detail::xml_escape(g.name)
        << "\" points=\"";
    for (std::size_t k = 0; k < g.members.size(); ++k) {
      const std::size_t i = ps.index_of(g.members[k]);
      out << (k ? " " : "") << xs[i] << ',' << ys[i];
    }
    out << "\" " << detail::style_for(kind, opt.stroke) << "/>\n";
  };
  out << "  <g id=\"groups\">\n";
  for (const auto& g : c.declared) {
    if (g.members.size() >= 2) polyline(g, g.kind);
  }
  for (const auto& g : c.incidental) {
    if (g.members.size() >= 2) polyline(g, "incidental");
  }
  out << "  </g>\n  <g id=\"points\">\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out << "    <circle cx=\"" << xs[i] << "\" cy=\"" << ys[i] << "\" r=\"" << 3 * opt.stroke
        << "\" fill=\"#111111\"><title>" << detail::xml_escape(ps.label(i)) << "</title></circle>\n";
  }
  out << "  </g>\n";
  if (opt.labels) {
    out << "  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
      out << "    <text x=\"" << xs[i] << "\" y=\"" << ys[i] << "\" dx=\"4\" dy=\"-4\">"
          << detail::xml_escape(ps.label(i)) << "</text>\n";
    }
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pvg
