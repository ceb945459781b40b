#pragma once

// User palettes turned into discrete LAB spaces: the palette colors are
// joined by a path in LAB (palette order or a shortest open tour) and the
// path is resampled at equal arc length.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clarify/colorspace.hpp"
#include "clarify/error.hpp"

namespace clarify {

/// Open-path visiting order. Exact (Held-Karp) for up to 10 points,
/// nearest neighbour followed by 2-opt beyond that. The returned order
/// starts at the smaller of its two end indices.
inline std::vector<std::size_t> tsp_order(const std::vector<Vec<3>>& pts) {
  const std::size_t k = pts.size();
  if (k < 2) throw PreconditionError("path ordering needs at least two points");
  auto d = [&](std::size_t a, std::size_t b) { return color_distance(pts[a], pts[b]); };
  std::vector<std::size_t> order;

  if (k <= 10) {
    const std::size_t full = (std::size_t{1} << k) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost((full + 1) * k, inf);
    std::vector<std::size_t> prev((full + 1) * k, k);
    auto at = [k](std::size_t mask, std::size_t j) { return mask * k + j; };
    for (std::size_t j = 0; j < k; ++j) cost[at(std::size_t{1} << j, j)] = 0.0;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      for (std::size_t j = 0; j < k; ++j) {
        const double c = cost[at(mask, j)];
        if (!(mask >> j & 1) || c == inf) continue;
        for (std::size_t n = 0; n < k; ++n) {
          if (mask >> n & 1) continue;
          const std::size_t next = mask | (std::size_t{1} << n);
          const double nc = c + d(j, n);
          if (nc < cost[at(next, n)]) {
            cost[at(next, n)] = nc;
            prev[at(next, n)] = j;
          }
        }
      }
    }
    std::size_t end = 0;
    for (std::size_t j = 1; j < k; ++j)
      if (cost[at(full, j)] < cost[at(full, end)]) end = j;
    std::size_t mask = full;
    for (std::size_t j = end; j < k;) {
      order.push_back(j);
      const std::size_t p = prev[at(mask, j)];
      mask &= ~(std::size_t{1} << j);
      j = p;
    }
    std::reverse(order.begin(), order.end());
  } else {
    std::vector<bool> used(k, false);
    order.push_back(0);
    used[0] = true;
    for (std::size_t step = 1; step < k; ++step) {
      const std::size_t cur = order.back();
      std::size_t best = k;
      for (std::size_t n = 0; n < k; ++n)
        if (!used[n] && (best == k || d(cur, n) < d(cur, best))) best = n;
      used[best] = true;
      order.push_back(best);
    }
    // 2-opt on an open path: reversing order[i..j] changes only the edges
    // entering i and leaving j.
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i + 1 < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          double before = 0.0, after = 0.0;
          if (i > 0) {
            before += d(order[i - 1], order[i]);
            after += d(order[i - 1], order[j]);
          }
          if (j + 1 < k) {
            before += d(order[j], order[j + 1]);
            after += d(order[i], order[j + 1]);
          }
          if (after < before - 1e-12) {
            std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            improved = true;
          }
        }
      }
    }
  }
  if (order.front() > order.back()) std::reverse(order.begin(), order.end());
  return order;
}

inline double path_length(const std::vector<Vec<3>>& pts, const std::vector<std::size_t>& order) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) total += color_distance(pts[order[i]], pts[order[i + 1]]);
  return total;
}

enum class PaletteOrdering { Natural, Tsp };

/// K LAB points at equal arc length along the path through the palette
/// colors (given as sRGB). The first and last path colors are exact
/// endpoints of the sequence.
inline std::vector<Vec<3>> interpolate_palette_points(const std::vector<Vec<3>>& palette_rgb,
                                                      std::size_t sample_count = 10000,
                                                      PaletteOrdering ordering = PaletteOrdering::Natural) {
  if (palette_rgb.size() < 2) throw PreconditionError("palette needs at least two colors");
  if (sample_count < palette_rgb.size()) throw PreconditionError("need at least as many samples as colors");
  std::vector<Vec<3>> lab;
  lab.reserve(palette_rgb.size());
  for (const auto& c : palette_rgb) lab.push_back(rgb_to_lab(c));
  std::vector<std::size_t> order(lab.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (ordering == PaletteOrdering::Tsp) order = tsp_order(lab);

  std::vector<Vec<3>> path;
  for (std::size_t i : order) path.push_back(lab[i]);
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < path.size(); ++i)
    cumulative.push_back(cumulative.back() + color_distance(path[i - 1], path[i]));
  const double total = cumulative.back();
  if (!(total > 0.0)) throw PreconditionError("palette colors are all identical");

  std::vector<Vec<3>> out;
  out.reserve(sample_count);
  std::size_t seg = 0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    if (s + 1 == sample_count) {
      out.push_back(path.back());
      break;
    }
    const double target = total * static_cast<double>(s) / static_cast<double>(sample_count - 1);
    while (seg + 2 < path.size() && cumulative[seg + 1] <= target) ++seg;
    const double span = cumulative[seg + 1] - cumulative[seg];
    const double t = span > 0.0 ? (target - cumulative[seg]) / span : 0.0;
    Vec<3> p;
    for (std::size_t c = 0; c < 3; ++c) p[c] = path[seg][c] + t * (path[seg + 1][c] - path[seg][c]);
    out.push_back(p);
  }
  return out;
}

inline ColorSpace<3> interpolate_palette(const std::vector<Vec<3>>& palette_rgb, std::size_t sample_count = 10000,
                                         PaletteOrdering ordering = PaletteOrdering::Natural) {
  return ColorSpace<3>::samples(interpolate_palette_points(palette_rgb, sample_count, ordering), SpaceTag::Lab);
}

/// Parses "#rrggbb" (leading '#' optional) into sRGB in [0, 1].
inline Vec<3> parse_hex_color(std::string_view text) {
  if (!text.empty() && text.front() == '#') text.remove_prefix(1);
  if (text.size() != 6) throw ParseError("color '" + std::string(text) + "' is not #rrggbb");
  Vec<3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) {
    int v = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      const char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(text[2 * c + k])));
      int digit = 0;
      if (ch >= '0' && ch <= '9') digit = ch - '0';
      else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
      else throw ParseError("color '" + std::string(text) + "' has a non-hex digit");
      v = v * 16 + digit;
    }
    rgb[c] = v / 255.0;
  }
  return rgb;
}

/// One color per non-blank line; '#' followed by non-hex text starts a comment.
inline std::vector<Vec<3>> parse_palette_text(std::istream& in) {
  std::vector<Vec<3>> colors;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok.size() != 7 && tok.front() == '#') continue;
    try {
      colors.push_back(parse_hex_color(tok));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return colors;
}

namespace palette_detail {

inline const std::map<std::string, std::vector<std::string>>& builtin_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"accent_8", {"#7fc97f", "#beaed4", "#fdc086", "#ffff99", "#386cb0", "#f0027f", "#bf5b17", "#666666"}},
      {"dark2_8", {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"}},
      {"pastel1_9",
       {"#fbb4ae", "#b3cde3", "#ccebc5", "#decbe4", "#fed9a6", "#ffffcc", "#e5d8bd", "#fddaec", "#f2f2f2"}},
      {"set1_9",
       {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf", "#999999"}},
  };
  return table;
}

inline std::string normalize_name(std::string_view name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  constexpr std::string_view prefix = "colorbrewer_";
  if (s.starts_with(prefix)) s.erase(0, prefix.size());
  return s;
}

}  // namespace palette_detail

inline std::vector<std::string> builtin_palette_names() {
  std::vector<std::string> names;
  for (const auto& [name, colors] : palette_detail::builtin_table()) names.push_back(name);
  return names;
}

/// Built-in ColorBrewer palette by name ("Dark2_8", "ColorBrewer_dark2_8", ...).
inline std::vector<Vec<3>> builtin_palette(std::string_view name) {
  const auto& table = palette_detail::builtin_table();
  auto it = table.find(palette_detail::normalize_name(name));
  if (it == table.end()) throw ConfigError("unknown palette '" + std::string(name) + "'");
  std::vector<Vec<3>> out;
  for (const auto& hex : it->second) out.push_back(parse_hex_color(hex));
  return out;
}

/// A built-in palette name, or else a path to a palette text file.
inline std::vector<Vec<3>> load_palette(const std::string& name_or_path) {
  const auto& table = palette_detail::builtin_table();
  if (table.count(palette_detail::normalize_name(name_or_path))) return builtin_palette(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ConfigError("'" + name_or_path + "' is neither a built-in palette nor a readable file");
  auto colors = parse_palette_text(in);
  if (colors.size() < 2) throw ConfigError("palette file '" + name_or_path + "' has fewer than two colors");
  return colors;
}

}  // namespace clarify
