// Command-line front end: color the edges of a laid-out graph so that
// visually colliding edges get clearly different colors.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "clarify/pipeline.hpp"

namespace {

clarify::SchemeKind parse_scheme(const std::string& text, std::string& palette) {
  using clarify::SchemeKind;
  if (text == "rgb") return SchemeKind::Rgb;
  if (text == "lab") return SchemeKind::Lab;
  if (text == "gray" || text == "grey") return SchemeKind::Gray;
  if (text.rfind("palette:", 0) == 0) {
    palette = text.substr(8);
    return SchemeKind::Palette;
  }
  // bare built-in palette names, e.g. ColorBrewer_dark2_8
  palette = text;
  return SchemeKind::Palette;
}

std::pair<double, double> parse_lightness(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw clarify::ConfigError("--lightness expects MIN,MAX");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw clarify::ConfigError("--lightness expects two numbers, got '" + text + "'");
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw clarify::ConfigError("cannot open input '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color graph edges so that colliding edges are easy to tell apart"};
  clarify::PipelineConfig cfg;

  std::string input;
  std::string scheme = "rgb";
  std::string lightness;
  std::string output = "dot";
  int random_starts = 0;

  app.add_option("--input", input, "Positioned DOT file, or a map adjacency list with --map-mode ('-' for stdin)")
      ->required();
  app.add_option("--color-scheme", scheme, "rgb | lab | gray | palette:<name-or-file>")->capture_default_str();
  app.add_option("--lightness", lightness, "MIN,MAX lightness range for the lab scheme");
  app.add_option("--epsilon", cfg.epsilon, "Branch-and-bound cell width threshold")->capture_default_str();
  app.add_option("--random-starts", random_starts, "Restarts per component (default: 10 for small graphs, else 1)");
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--small-angle", cfg.geom.small_angle_deg, "Crossing / shared-node angle threshold (degrees)")
      ->capture_default_str();
  app.add_option("--straight-angle", cfg.geom.straight_angle_deg, "Near-straight shared-node angle (degrees)")
      ->capture_default_str();
  app.add_flag("--no-c3", "Ignore edges meeting at a node at a near-straight angle");
  app.add_option("--near-dist-frac", cfg.geom.near_dist_frac, "Closeness threshold as a fraction of edge length")
      ->capture_default_str();
  app.add_option("--parallel-angle", cfg.geom.parallel_angle_deg, "Near-parallel angle threshold (degrees)")
      ->capture_default_str();
  app.add_option("--output", output, "dot | svg | json")->check(CLI::IsMember({"dot", "svg", "json"}))->capture_default_str();
  app.add_flag("--dash-styles", cfg.dash_styles, "Gray scheme: render gray levels as solid / dashed strokes");
  app.add_flag("--map-mode", cfg.map_mode, "Input is a region adjacency list ('region: neighbour ...')");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.scheme = parse_scheme(scheme, cfg.palette);
    if (!lightness.empty()) cfg.lightness = parse_lightness(lightness);
    if (app.count("--random-starts")) cfg.random_starts = random_starts;
    cfg.geom.enable_c3 = app.count("--no-c3") == 0;
    cfg.output = output == "svg" ? clarify::OutputFormat::Svg
                 : output == "json" ? clarify::OutputFormat::Json
                                    : clarify::OutputFormat::Dot;
    const auto result = clarify::run_pipeline(cfg, read_input(input));
    std::cout << result.output;
    for (const auto& w : result.report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  } catch (const clarify::Error& e) {
    std::cerr << "clarify: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "clarify: internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
