#pragma once

// Color spaces the optimizer can search: continuous axis-aligned boxes
// (RGB cube, gray interval) and finite sample sets (sampled LAB gamut,
// interpolated palettes). Colors are points in a d-dimensional Euclidean
// space; distance is plain Euclidean in the space's own coordinates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "clarify/error.hpp"

namespace clarify {

template <std::size_t D>
using Vec = std::array<double, D>;

template <std::size_t D>
double squared_distance(const Vec<D>& a, const Vec<D>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < D; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

template <std::size_t D>
double color_distance(const Vec<D>& a, const Vec<D>& b) {
  return std::sqrt(squared_distance(a, b));
}

/// How a space's coordinates map to displayable color.
enum class SpaceTag {
  Rgb,   // coordinates are sRGB intensities in [0, 1]
  Lab,   // coordinates are CIE L*a*b*
  Gray,  // single intensity in [0, 1], 0 = black
  Generic,
};

template <std::size_t D>
class ColorSpace {
 public:
  using Point = Vec<D>;

  static ColorSpace box(Point lower, Point upper, SpaceTag tag = SpaceTag::Generic) {
    for (std::size_t k = 0; k < D; ++k) {
      if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || !(lower[k] < upper[k]))
        throw PreconditionError("color box needs lower < upper on every axis");
    }
    ColorSpace s;
    s.tag_ = tag;
    s.storage_ = Box{lower, upper};
    return s;
  }

  /// Finite sample set. Duplicates are dropped, keeping first occurrences
  /// in input order.
  static ColorSpace samples(std::vector<Point> points, SpaceTag tag = SpaceTag::Generic) {
    if (points.empty()) throw PreconditionError("discrete color space needs at least one sample");
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    std::vector<bool> keep(points.size(), true);
    for (std::size_t k = 1; k < order.size(); ++k)
      if (points[order[k]] == points[order[k - 1]]) keep[order[k]] = false;
    std::vector<Point> unique;
    unique.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (double c : points[i])
        if (!std::isfinite(c)) throw PreconditionError("sample has a non-finite coordinate");
      if (keep[i]) unique.push_back(points[i]);
    }
    ColorSpace s;
    s.tag_ = tag;
    s.storage_ = Samples{std::make_shared<const std::vector<Point>>(std::move(unique))};
    return s;
  }

  static constexpr std::size_t dimension() { return D; }
  SpaceTag tag() const { return tag_; }
  bool is_discrete() const { return std::holds_alternative<Samples>(storage_); }

  const Point& lower() const { return std::get<Box>(storage_).lower; }
  const Point& upper() const { return std::get<Box>(storage_).upper; }

  std::span<const Point> points() const { return *std::get<Samples>(storage_).points; }
  std::size_t size() const { return is_discrete() ? points().size() : 0; }

  bool contains(const Point& p) const {
    if (is_discrete()) {
      const auto pts = points();
      return std::find(pts.begin(), pts.end(), p) != pts.end();
    }
    for (std::size_t k = 0; k < D; ++k)
      if (!(p[k] >= lower()[k] && p[k] <= upper()[k])) return false;
    return true;
  }

  Point clamp(Point p) const {
    for (std::size_t k = 0; k < D; ++k) p[k] = std::clamp(p[k], lower()[k], upper()[k]);
    return p;
  }

  /// Answer when there is nothing to stay away from: the lower corner, or
  /// the first sample.
  Point default_point() const { return is_discrete() ? points().front() : lower(); }

  /// The point nearest the coordinate origin (black in every built-in
  /// space). Ties go to the lowest sample index.
  Point darkest_point() const {
    if (!is_discrete()) return clamp(Point{});
    const auto pts = points();
    std::size_t best = 0;
    double best_d = squared_distance(pts[0], Point{});
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double d = squared_distance(pts[i], Point{});
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return pts[best];
  }

 private:
  struct Box {
    Point lower;
    Point upper;
  };
  struct Samples {
    std::shared_ptr<const std::vector<Point>> points;
  };

  ColorSpace() = default;

  SpaceTag tag_ = SpaceTag::Generic;
  std::variant<Box, Samples> storage_;
};

/// RGB cube [0, max]^3. Capping intensity keeps edges readable on white.
inline ColorSpace<3> make_rgb_box(double max_intensity = 0.7) {
  if (!(max_intensity > 0.0 && max_intensity <= 1.0))
    throw PreconditionError("RGB box intensity must lie in (0, 1]");
  return ColorSpace<3>::box({0.0, 0.0, 0.0}, {max_intensity, max_intensity, max_intensity},
                            SpaceTag::Rgb);
}

inline ColorSpace<1> make_gray(double lo = 0.0, double hi = 1.0) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw PreconditionError("gray range needs 0 <= lo < hi <= 1");
  return ColorSpace<1>::box({lo}, {hi}, SpaceTag::Gray);
}

// sRGB (IEC 61966-2-1) with a D65 reference white.
namespace lab_detail {

inline constexpr double kXn = 0.95047;
inline constexpr double kYn = 1.0;
inline constexpr double kZn = 1.08883;
inline constexpr double kDelta = 6.0 / 29.0;

inline double srgb_decode(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_encode(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

inline double lab_f_inv(double t) {
  return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

}  // namespace lab_detail

inline Vec<3> rgb_to_lab(const Vec<3>& rgb) {
  using namespace lab_detail;
  for (double c : rgb)
    if (!(c >= 0.0 && c <= 1.0)) throw PreconditionError("RGB component outside [0, 1]");
  const double r = srgb_decode(rgb[0]);
  const double g = srgb_decode(rgb[1]);
  const double b = srgb_decode(rgb[2]);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / kXn);
  const double fy = lab_f(y / kYn);
  const double fz = lab_f(z / kZn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

/// LAB to sRGB. Colors outside the RGB gamut are clamped per channel.
inline Vec<3> lab_to_rgb(const Vec<3>& lab) {
  using namespace lab_detail;
  if (!(lab[0] >= 0.0 && lab[0] <= 100.0)) throw PreconditionError("L outside [0, 100]");
  const double fy = (lab[0] + 16.0) / 116.0;
  const double fx = fy + lab[1] / 500.0;
  const double fz = fy - lab[2] / 200.0;
  const double x = kXn * lab_f_inv(fx);
  const double y = kYn * lab_f_inv(fy);
  const double z = kZn * lab_f_inv(fz);
  // inverse of the sRGB primaries matrix above
  const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  return {std::clamp(srgb_encode(std::max(r, 0.0)), 0.0, 1.0),
          std::clamp(srgb_encode(std::max(g, 0.0)), 0.0, 1.0),
          std::clamp(srgb_encode(std::max(b, 0.0)), 0.0, 1.0)};
}

inline double lab_roundtrip_error(const Vec<3>& lab) {
  return color_distance(lab, rgb_to_lab(lab_to_rgb(lab)));
}

}  // namespace clarify
