#pragma once

// The part of LAB reachable from sRGB, approximated by grid points that
// survive a LAB -> RGB -> LAB round trip. Computing the full grid takes a
// few seconds, so the unfiltered set is cached on disk.
//
// Cache layout (little-endian):
//   bytes 0..7   magic "CLRGAMUT"
//   bytes 8..11  uint32 format version
//   bytes 12..19 uint64 point count N
//   then N triples of float32 (L, a, b)
// A JSON sidecar "<file>.json" records the sampling parameters; the cache
// is rebuilt whenever they differ from the request.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clarify/colorspace.hpp"
#include "clarify/error.hpp"

namespace clarify {

struct GamutSampleConfig {
  double step = 1.0;
  double roundtrip_tol = 0.02;
  double l_min = 0.0;
  double l_max = 100.0;

  void validate() const {
    if (!(step > 0.0)) throw ConfigError("gamut sampling step must be positive");
    if (!(roundtrip_tol > 0.0)) throw ConfigError("round-trip tolerance must be positive");
    if (!(0.0 <= l_min && l_min <= l_max && l_max <= 100.0))
      throw ConfigError("lightness range needs 0 <= min <= max <= 100");
  }
};

inline constexpr double kLabAMin = -128.0;
inline constexpr double kLabAMax = 128.0;

namespace gamut_detail {

inline std::vector<double> grid_axis(double lo, double hi, double step) {
  std::vector<double> axis;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) axis.push_back(lo + static_cast<double>(k) * step);
  return axis;
}

inline bool lightness_in_range(double l, const GamutSampleConfig& cfg) {
  return l >= cfg.l_min && l <= cfg.l_max;
}

inline constexpr char kMagic[8] = {'C', 'L', 'R', 'G', 'A', 'M', 'U', 'T'};
inline constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little, "cache writer assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_le(std::istream& is, T& value) {
  static_assert(std::endian::native == std::endian::little, "cache reader assumes a little-endian host");
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

inline nlohmann::json sidecar_for(const GamutSampleConfig& cfg, std::size_t count) {
  return {{"format", "clarify-lab-gamut"},
          {"version", kVersion},
          {"step", cfg.step},
          {"roundtrip_tol", cfg.roundtrip_tol},
          {"count", count}};
}

}  // namespace gamut_detail

/// Grid points of [0,100] x [-128,128]^2 at `step` spacing that round-trip
/// within roundtrip_tol, ignoring the lightness filter.
inline std::vector<Vec<3>> sample_lab_gamut_grid(double step, double roundtrip_tol) {
  const auto ls = gamut_detail::grid_axis(0.0, 100.0, step);
  const auto ab = gamut_detail::grid_axis(kLabAMin, kLabAMax, step);
  std::vector<Vec<3>> out;
  for (double l : ls)
    for (double a : ab)
      for (double b : ab) {
        const Vec<3> lab{l, a, b};
        if (lab_roundtrip_error(lab) <= roundtrip_tol) out.push_back(lab);
      }
  return out;
}

inline std::size_t lab_grid_size(double step) {
  return gamut_detail::grid_axis(0.0, 100.0, step).size() *
         gamut_detail::grid_axis(kLabAMin, kLabAMax, step).size() *
         gamut_detail::grid_axis(kLabAMin, kLabAMax, step).size();
}

inline std::vector<Vec<3>> filter_lightness(const std::vector<Vec<3>>& pts, const GamutSampleConfig& cfg) {
  std::vector<Vec<3>> out;
  out.reserve(pts.size());
  for (const auto& p : pts)
    if (gamut_detail::lightness_in_range(p[0], cfg)) out.push_back(p);
  return out;
}

inline void write_gamut_cache(const std::filesystem::path& file, const GamutSampleConfig& cfg,
                              const std::vector<Vec<3>>& pts) {
  namespace fs = std::filesystem;
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  // temp-then-rename so concurrent readers never see a partial file
  const fs::path tmp = file.string() + ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write gamut cache " + tmp.string());
    os.write(gamut_detail::kMagic, sizeof(gamut_detail::kMagic));
    gamut_detail::write_le<std::uint32_t>(os, gamut_detail::kVersion);
    gamut_detail::write_le<std::uint64_t>(os, pts.size());
    for (const auto& p : pts)
      for (double c : p) gamut_detail::write_le<float>(os, static_cast<float>(c));
    if (!os) throw Error("failed writing gamut cache " + tmp.string());
  }
  const fs::path side_tmp = tmp.string() + ".json";
  {
    std::ofstream js(side_tmp, std::ios::trunc);
    js << gamut_detail::sidecar_for(cfg, pts.size()).dump(2) << "\n";
    if (!js) throw Error("failed writing gamut cache sidecar");
  }
  fs::rename(tmp, file);
  fs::rename(side_tmp, file.string() + ".json");
}

/// Loads a cache written for the same step and tolerance, or nothing.
inline std::optional<std::vector<Vec<3>>> read_gamut_cache(const std::filesystem::path& file,
                                                           const GamutSampleConfig& cfg) {
  std::ifstream js(file.string() + ".json");
  if (!js) return std::nullopt;
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  const std::size_t count = side.value("count", std::size_t{0});
  if (side != gamut_detail::sidecar_for(cfg, count)) return std::nullopt;

  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  if (!is.read(magic, sizeof(magic)) || !std::equal(magic, magic + 8, gamut_detail::kMagic))
    return std::nullopt;
  if (!gamut_detail::read_le(is, version) || version != gamut_detail::kVersion) return std::nullopt;
  if (!gamut_detail::read_le(is, n) || n != count) return std::nullopt;
  std::vector<Vec<3>> pts(n);
  for (auto& p : pts) {
    for (double& c : p) {
      float f = 0.0f;
      if (!gamut_detail::read_le(is, f)) return std::nullopt;
      c = f;
    }
  }
  return pts;
}

/// Cache directory: $CLARIFY_CACHE_DIR, else $XDG_CACHE_HOME/clarify, else
/// ~/.cache/clarify, else the system temp directory.
inline std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("CLARIFY_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return std::filesystem::path(xdg) / "clarify";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "clarify";
  return std::filesystem::temp_directory_path() / "clarify";
}

inline std::filesystem::path gamut_cache_file(const std::filesystem::path& dir, const GamutSampleConfig& cfg) {
  std::ostringstream name;
  name << "lab_gamut_step" << cfg.step << "_tol" << cfg.roundtrip_tol << ".bin";
  return dir / name.str();
}

/// Sampled LAB gamut restricted to [l_min, l_max], as a discrete LAB space.
/// With a cache directory the unfiltered grid is read from, or written to,
/// disk.
inline ColorSpace<3> sample_lab_gamut(const GamutSampleConfig& cfg,
                                      const std::optional<std::filesystem::path>& cache_dir = std::nullopt) {
  cfg.validate();
  std::vector<Vec<3>> grid;
  if (cache_dir) {
    const auto file = gamut_cache_file(*cache_dir, cfg);
    if (auto cached = read_gamut_cache(file, cfg)) {
      grid = std::move(*cached);
    } else {
      grid = sample_lab_gamut_grid(cfg.step, cfg.roundtrip_tol);
      try {
        write_gamut_cache(file, cfg, grid);
      } catch (const std::exception&) {
        // unwritable cache directory: keep going with the in-memory set
      }
    }
  } else {
    grid = sample_lab_gamut_grid(cfg.step, cfg.roundtrip_tol);
  }
  auto pts = filter_lightness(grid, cfg);
  if (pts.empty()) throw ConfigError("lightness range leaves no gamut samples");
  return ColorSpace<3>::samples(std::move(pts), SpaceTag::Lab);
}

}  // namespace clarify
