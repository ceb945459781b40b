#pragma once

// End-to-end driver: parse, detect collisions (or build the map dual),
// construct the color space, optimize and emit.

#include <chrono>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "clarify/collision.hpp"
#include "clarify/colorspace.hpp"
#include "clarify/dot.hpp"
#include "clarify/error.hpp"
#include "clarify/gamut.hpp"
#include "clarify/optimizer.hpp"
#include "clarify/palette.hpp"
#include "clarify/render.hpp"
#include "clarify/spatial_index.hpp"

namespace clarify {

/// Map adjacency, one region per line: "region: neighbour neighbour ...".
/// Blank lines and lines starting with '#' are skipped. Adjacency is
/// symmetrized.
inline RegionAdjacency parse_map_adjacency(std::string_view text) {
  RegionAdjacency regions;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'region: neighbours...'", lineno);
    std::istringstream head(line.substr(0, colon));
    std::string name, extra;
    if (!(head >> name) || (head >> extra)) throw ParseError("region name must be a single token", lineno);
    const std::size_t r = regions.add_region(name);
    std::istringstream rest(line.substr(colon + 1));
    std::string nb;
    while (rest >> nb) regions.connect(r, regions.add_region(nb));
  }
  if (regions.names.empty()) throw ParseError("map has no regions");
  return regions;
}

enum class SchemeKind { Rgb, Lab, Gray, Palette };
enum class OutputFormat { Dot, Svg, Json };

struct PipelineConfig {
  SchemeKind scheme = SchemeKind::Rgb;
  std::string palette;                                // Palette scheme: built-in name or file path
  std::optional<std::pair<double, double>> lightness;  // Lab scheme only
  GeomConfig geom;
  double epsilon = 1e-2;
  std::optional<int> random_starts;  // unset: 10 for small dual graphs, else 1
  std::uint64_t seed = 1;
  OutputFormat output = OutputFormat::Dot;
  bool dash_styles = false;
  bool map_mode = false;
  std::optional<std::filesystem::path> cache_dir;  // unset: default_cache_dir()

  void validate() const {
    geom.validate();
    if (lightness && scheme != SchemeKind::Lab) throw ConfigError("--lightness applies only to the lab color scheme");
    if (scheme == SchemeKind::Palette && palette.empty()) throw ConfigError("palette scheme needs a name or file");
    if (dash_styles && scheme != SchemeKind::Gray) throw ConfigError("--dash-styles applies only to the gray color scheme");
    if (map_mode && output == OutputFormat::Svg) throw ConfigError("SVG output needs a layout; use dot or json in map mode");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (random_starts && *random_starts < 1) throw ConfigError("random starts must be at least 1");
  }
};

inline constexpr std::size_t kSmallDualGraph = 200;

inline std::string scheme_name(const PipelineConfig& cfg) {
  switch (cfg.scheme) {
    case SchemeKind::Rgb: return "rgb";
    case SchemeKind::Lab: return "lab";
    case SchemeKind::Gray: return "gray";
    case SchemeKind::Palette: return "palette:" + cfg.palette;
  }
  return "";
}

struct PipelineResult {
  std::string output;
  nlohmann::json report;
};

namespace pipeline_detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

struct Parsed {
  std::optional<DotDocument> doc;
  LayoutGraph layout;
  RegionAdjacency regions;
  std::vector<std::string> item_names;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
};

template <std::size_t D>
PipelineResult color_and_emit(const PipelineConfig& cfg, const Parsed& in, const DualCollisionGraph& dual,
                              const ColorSpace<D>& space, nlohmann::json report, Clock::time_point t_space) {
  const Octree<D> tree(space);
  report["timings_ms"]["colorspace"] = ms_since(t_space);

  OptimizerConfig opt;
  opt.epsilon = cfg.epsilon;
  opt.seed = cfg.seed;
  opt.random_starts = cfg.random_starts.value_or(dual.node_count() <= kSmallDualGraph ? 10 : 1);
  const auto t_opt = Clock::now();
  const ColorAssignment<D> assignment = clarify<D>(dual, tree, opt);
  report["timings_ms"]["optimize"] = ms_since(t_opt);

  const auto t_emit = Clock::now();
  std::vector<std::string> hex;
  nlohmann::json colors = nlohmann::json::array();
  for (std::size_t k = 0; k < assignment.colors.size(); ++k) {
    hex.push_back(color_hex<D>(assignment.colors[k], space.tag()));
    colors.push_back({{"id", k},
                      {"name", in.item_names[k]},
                      {"color", hex.back()},
                      {"coords", std::vector<double>(assignment.colors[k].begin(), assignment.colors[k].end())}});
  }
  report["random_starts"] = opt.random_starts;
  report["mindist"] = number_or_null(assignment.mindist);
  report["sumdist"] = assignment.sumdist;
  report["warnings"] = assignment.warnings;
  report["colors"] = std::move(colors);

  PipelineResult result;
  switch (cfg.output) {
    case OutputFormat::Dot:
      if (in.doc) {
        result.output = emit_colored_dot(*in.doc, hex);
      } else {
        DotDocument map_doc;
        map_doc.name = "map";
        for (std::size_t k = 0; k < in.regions.names.size(); ++k)
          map_doc.nodes.push_back({in.regions.names[k], {{"style", "filled"}, {"fillcolor", hex[k]}}, 0});
        for (std::size_t a = 0; a < in.regions.names.size(); ++a)
          for (std::size_t b : in.regions.neighbors[a])
            if (a < b) map_doc.edges.push_back({in.regions.names[a], in.regions.names[b], {}, 0});
        result.output = emit_colored_dot(map_doc, std::vector<std::string>(map_doc.edges.size(), "#000000"));
      }
      break;
    case OutputFormat::Svg: {
      std::vector<EdgeStyle> styles;
      for (std::size_t k = 0; k < hex.size(); ++k) {
        EdgeStyle s{hex[k], std::nullopt};
        if (space.tag() == SpaceTag::Gray) s.gray = assignment.colors[k][0];
        styles.push_back(std::move(s));
      }
      SvgOptions svg;
      svg.dash_styles = cfg.dash_styles;
      result.output = emit_svg(in.layout, styles, svg);
      break;
    }
    case OutputFormat::Json: break;
  }
  report["timings_ms"]["emit"] = ms_since(t_emit);
  if (cfg.output == OutputFormat::Json) result.output = report.dump(2) + "\n";
  result.report = std::move(report);
  return result;
}

}  // namespace pipeline_detail

/// Runs the whole pipeline on input text (a positioned DOT graph, or a map
/// adjacency list in map mode).
inline PipelineResult run_pipeline(const PipelineConfig& cfg, std::string_view input) {
  using namespace pipeline_detail;
  cfg.validate();
  nlohmann::json report;
  report["schema_version"] = 1;
  report["mode"] = cfg.map_mode ? "map" : "layout";
  report["color_scheme"] = scheme_name(cfg);
  report["epsilon"] = cfg.epsilon;
  report["seed"] = cfg.seed;

  Parsed in;
  auto t0 = Clock::now();
  if (cfg.map_mode) {
    in.regions = parse_map_adjacency(input);
    in.item_names = in.regions.names;
    in.node_count = in.regions.names.size();
    for (const auto& nb : in.regions.neighbors) in.edge_count += nb.size();
    in.edge_count /= 2;
  } else {
    in.doc = parse_dot(input);
    in.layout = to_layout(*in.doc, cfg.geom.spline_flatten_tol);
    for (const auto& e : in.doc->edges) in.item_names.push_back(e.tail + (in.doc->directed ? "->" : "--") + e.head);
    in.node_count = in.layout.nodes.size();
    in.edge_count = in.layout.edges.size();
  }
  report["timings_ms"]["parse"] = ms_since(t0);

  t0 = Clock::now();
  const DualCollisionGraph dual = cfg.map_mode ? build_map_dual(in.regions) : build_collision_graph(in.layout, cfg.geom);
  report["timings_ms"]["collision"] = ms_since(t0);

  nlohmann::json kinds = {{"C1", 0}, {"C2", 0}, {"C3", 0}, {"C4", 0}, {"map", 0}};
  for (const auto& e : dual.edges()) kinds[kind_name(e.kind)] = kinds[kind_name(e.kind)].get<int>() + 1;
  report["nodes"] = in.node_count;
  report["edges"] = in.edge_count;
  report["dual_edges"] = dual.edges().size();
  report["components"] = dual.multi_node_component_count();
  report["singletons"] = dual.components().size() - dual.multi_node_component_count();
  report["collisions"] = kinds;

  t0 = Clock::now();
  const auto cache = cfg.cache_dir ? *cfg.cache_dir : default_cache_dir();
  switch (cfg.scheme) {
    case SchemeKind::Rgb: return color_and_emit<3>(cfg, in, dual, make_rgb_box(), std::move(report), t0);
    case SchemeKind::Gray: return color_and_emit<1>(cfg, in, dual, make_gray(), std::move(report), t0);
    case SchemeKind::Lab: {
      GamutSampleConfig g;
      if (cfg.lightness) std::tie(g.l_min, g.l_max) = *cfg.lightness;
      return color_and_emit<3>(cfg, in, dual, sample_lab_gamut(g, cache), std::move(report), t0);
    }
    case SchemeKind::Palette:
      return color_and_emit<3>(cfg, in, dual, interpolate_palette(load_palette(cfg.palette), 10000, PaletteOrdering::Tsp),
                               std::move(report), t0);
  }
  throw ConfigError("unknown color scheme");
}

}  // namespace clarify
