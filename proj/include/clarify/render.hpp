#pragma once

// Color formatting and SVG previews of colored layouts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "clarify/collision.hpp"
#include "clarify/colorspace.hpp"
#include "clarify/error.hpp"

namespace clarify {

/// "#rrggbb" (lowercase) from sRGB in [0, 1]; each channel is scaled by 255
/// and rounded half-up.
inline std::string rgb_hex(const Vec<3>& rgb) {
  char buf[8];
  int ch[3];
  for (std::size_t k = 0; k < 3; ++k) {
    const double v = std::clamp(rgb[k], 0.0, 1.0) * 255.0;
    ch[k] = std::min(255, static_cast<int>(std::floor(v + 0.5)));
  }
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", ch[0], ch[1], ch[2]);
  return buf;
}

/// Displayable sRGB for a point of a space with the given tag.
template <std::size_t D>
Vec<3> to_display_rgb(const Vec<D>& p, SpaceTag tag) {
  if constexpr (D == 3) {
    if (tag == SpaceTag::Lab) return lab_to_rgb({std::clamp(p[0], 0.0, 100.0), p[1], p[2]});
    return {std::clamp(p[0], 0.0, 1.0), std::clamp(p[1], 0.0, 1.0), std::clamp(p[2], 0.0, 1.0)};
  } else {
    const double g = std::clamp(p[0], 0.0, 1.0);
    return {g, g, g};
  }
}

template <std::size_t D>
std::string color_hex(const Vec<D>& p, SpaceTag tag) {
  return rgb_hex(to_display_rgb<D>(p, tag));
}

enum class LineStyle { Solid, DashedLong, DashedShort };

/// Gray level to line style: darker thirds are solid, the middle third long
/// dashes, the lightest third short dashes.
inline LineStyle line_style_for_gray(double gray) {
  if (gray < 1.0 / 3.0) return LineStyle::Solid;
  if (gray < 2.0 / 3.0) return LineStyle::DashedLong;
  return LineStyle::DashedShort;
}

struct EdgeStyle {
  std::string color = "#000000";
  std::optional<double> gray;  // set for gray-scale colorings
};

struct SvgOptions {
  bool dash_styles = false;
  double node_radius = 6.0;
  double margin = 20.0;
  double stroke_width = 1.5;
};

namespace svg_detail {

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace svg_detail

/// Nodes as labelled circles, edges as stroked paths. Layout y grows
/// upwards (Graphviz convention) and is flipped for SVG.
inline std::string emit_svg(const LayoutGraph& g, std::span<const EdgeStyle> styles, const SvgOptions& opt = {}) {
  using svg_detail::num;
  if (styles.size() != g.edges.size()) throw PreconditionError("need exactly one style per edge");
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  auto grow = [&](Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  };
  for (const auto& n : g.nodes) grow(n.pos);
  for (const auto& e : g.edges)
    for (Point2 p : e.geometry.points()) grow(p);
  if (g.nodes.empty()) min_x = min_y = max_x = max_y = 0.0;
  const double pad = opt.margin + opt.node_radius;
  const double width = max_x - min_x + 2 * pad;
  const double height = max_y - min_y + 2 * pad;
  auto sx = [&](double x) { return x - min_x + pad; };
  auto sy = [&](double y) { return max_y - y + pad; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g id=\"edges\" fill=\"none\">\n";
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& pts = g.edges[k].geometry.points();
    os << "<path d=\"M " << num(sx(pts[0].x)) << " " << num(sy(pts[0].y));
    for (std::size_t i = 1; i < pts.size(); ++i) os << " L " << num(sx(pts[i].x)) << " " << num(sy(pts[i].y));
    os << "\" stroke=\"" << styles[k].color << "\" stroke-width=\"" << num(opt.stroke_width) << "\"";
    if (opt.dash_styles && styles[k].gray) {
      switch (line_style_for_gray(*styles[k].gray)) {
        case LineStyle::Solid: break;
        case LineStyle::DashedLong: os << " stroke-dasharray=\"8,4\""; break;
        case LineStyle::DashedShort: os << " stroke-dasharray=\"3,3\""; break;
      }
    }
    os << "/>\n";
  }
  os << "</g>\n<g id=\"nodes\">\n";
  for (const auto& n : g.nodes) {
    os << "<circle cx=\"" << num(sx(n.pos.x)) << "\" cy=\"" << num(sy(n.pos.y)) << "\" r=\"" << num(opt.node_radius)
       << "\" fill=\"white\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(sx(n.pos.x)) << "\" y=\"" << num(sy(n.pos.y))
       << "\" font-size=\"8\" text-anchor=\"middle\" dominant-baseline=\"central\">"
       << svg_detail::escape(n.label.value_or(n.id)) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace clarify
