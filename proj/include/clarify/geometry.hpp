#pragma once

// Planar predicates and measures used to decide whether two drawn edges
// are visually ambiguous.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clarify/error.hpp"

namespace clarify {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Segment {
  Point2 a;
  Point2 b;

  Point2 direction() const { return b - a; }
  double length() const { return distance(a, b); }
};

/// Thresholds for the four collision conditions plus spline flattening.
/// Angles are in degrees; near_dist_frac is relative to the longer edge.
struct GeomConfig {
  double small_angle_deg = 15.0;
  double straight_angle_deg = 165.0;
  double near_dist_frac = 0.01;
  double parallel_angle_deg = 1.0;
  bool enable_c3 = true;
  double spline_flatten_tol = 0.25;

  void validate() const {
    if (!(small_angle_deg > 0.0 && small_angle_deg < 90.0))
      throw ConfigError("small angle must lie in (0, 90) degrees");
    if (!(straight_angle_deg > 90.0 && straight_angle_deg < 180.0))
      throw ConfigError("straight angle must lie in (90, 180) degrees");
    if (!(near_dist_frac > 0.0 && near_dist_frac < 1.0))
      throw ConfigError("near distance fraction must lie in (0, 1)");
    if (!(parallel_angle_deg > 0.0 && parallel_angle_deg < small_angle_deg))
      throw ConfigError("parallel angle must lie in (0, small angle)");
    if (!(spline_flatten_tol > 0.0))
      throw ConfigError("spline flattening tolerance must be positive");
  }
};

namespace detail {

inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// Parametric slack at segment ends; coordinates are drawing units, not exact.
inline constexpr double kParamTol = 1e-9;

inline void require_positive_length(const Segment& s) {
  if (!(s.length() > 0.0))
    throw PreconditionError("degenerate (zero-length) segment");
}

// Unsigned angle between two vectors in degrees, in [0, 180].
inline double vector_angle_deg(Point2 u, Point2 v) {
  return std::atan2(std::abs(cross(u, v)), dot(u, v)) * kRadToDeg;
}

inline double point_segment_distance(Point2 p, const Segment& s) {
  const Point2 d = s.direction();
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - s.a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, s.a + t * d);
}

}  // namespace detail

/// Interior crossing point of two segments. Endpoint touches, T-junctions and
/// collinear overlaps are not crossings.
inline std::optional<Point2> segment_intersection(const Segment& s1, const Segment& s2) {
  detail::require_positive_length(s1);
  detail::require_positive_length(s2);
  const Point2 r = s1.direction();
  const Point2 s = s2.direction();
  const double denom = cross(r, s);
  if (std::abs(denom) <= 1e-12 * norm(r) * norm(s)) return std::nullopt;
  const Point2 qp = s2.a - s1.a;
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  constexpr double lo = detail::kParamTol;
  constexpr double hi = 1.0 - detail::kParamTol;
  if (t > lo && t < hi && u > lo && u < hi) return s1.a + t * r;
  return std::nullopt;
}

/// Acute angle between the supporting lines, in [0, 90] degrees.
inline double crossing_angle(const Segment& s1, const Segment& s2) {
  detail::require_positive_length(s1);
  detail::require_positive_length(s2);
  const double a = detail::vector_angle_deg(s1.direction(), s2.direction());
  return std::min(a, 180.0 - a);
}

/// Angle between rays shared->tip_a and shared->tip_b, in [0, 180] degrees.
inline double incident_angle(Point2 shared, Point2 tip_a, Point2 tip_b) {
  if (tip_a == shared || tip_b == shared)
    throw PreconditionError("incident ray has zero length");
  return detail::vector_angle_deg(tip_a - shared, tip_b - shared);
}

inline double segment_distance(const Segment& s1, const Segment& s2) {
  if (segment_intersection(s1, s2)) return 0.0;
  return std::min({detail::point_segment_distance(s1.a, s2),
                   detail::point_segment_distance(s1.b, s2),
                   detail::point_segment_distance(s2.a, s1),
                   detail::point_segment_distance(s2.b, s1)});
}

/// Ordered vertex chain. Consecutive vertices are distinct.
class Polyline {
 public:
  Polyline() = default;

  explicit Polyline(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw PreconditionError("polyline needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!is_finite(points_[i])) throw PreconditionError("polyline has a non-finite coordinate");
      if (i > 0 && points_[i] == points_[i - 1])
        throw PreconditionError("polyline has repeated consecutive points");
    }
  }

  static Polyline straight(Point2 a, Point2 b) { return Polyline({a, b}); }

  const std::vector<Point2>& points() const { return points_; }
  std::size_t segment_count() const { return points_.empty() ? 0 : points_.size() - 1; }
  Segment segment(std::size_t i) const { return {points_[i], points_[i + 1]}; }
  Point2 front() const { return points_.front(); }
  Point2 back() const { return points_.back(); }

  double length() const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) total += distance(points_[i], points_[i + 1]);
    return total;
  }

  /// First sub-segment leaving the start (at_start) or the end of the chain,
  /// oriented away from that end.
  Segment leaving_segment(bool at_start) const {
    if (at_start) return {points_[0], points_[1]};
    const std::size_t n = points_.size();
    return {points_[n - 1], points_[n - 2]};
  }

 private:
  std::vector<Point2> points_;
};

namespace detail {

inline Point2 cubic_point(const Point2 (&c)[4], double t) {
  const double s = 1.0 - t;
  return (s * s * s) * c[0] + (3.0 * s * s * t) * c[1] + (3.0 * s * t * t) * c[2] +
         (t * t * t) * c[3];
}

// The curve lies in the hull of its control points, so once both inner
// controls sit within tol of the chord the chord is within tol of the curve.
inline void flatten_cubic(const Point2 (&c)[4], double tol, int depth, std::vector<Point2>& out) {
  const Segment chord{c[0], c[3]};
  const double dev = chord.length() > 0.0
                         ? std::max(point_segment_distance(c[1], chord),
                                    point_segment_distance(c[2], chord))
                         : std::max(distance(c[0], c[1]), distance(c[0], c[2]));
  if (dev <= tol || depth >= 24) {
    out.push_back(c[3]);
    return;
  }
  // de Casteljau split at t = 1/2
  const Point2 p01 = 0.5 * (c[0] + c[1]);
  const Point2 p12 = 0.5 * (c[1] + c[2]);
  const Point2 p23 = 0.5 * (c[2] + c[3]);
  const Point2 p012 = 0.5 * (p01 + p12);
  const Point2 p123 = 0.5 * (p12 + p23);
  const Point2 mid = 0.5 * (p012 + p123);
  const Point2 left[4] = {c[0], p01, p012, mid};
  const Point2 right[4] = {mid, p123, p23, c[3]};
  flatten_cubic(left, tol, depth + 1, out);
  flatten_cubic(right, tol, depth + 1, out);
}

// Drops repeated vertices and interior vertices lying on the straight path
// between their neighbours.
inline std::vector<Point2> simplify_chain(const std::vector<Point2>& in) {
  std::vector<Point2> pts;
  for (const Point2& p : in)
    if (pts.empty() || !(p == pts.back())) pts.push_back(p);
  if (pts.size() < 3) return pts;
  std::vector<Point2> out{pts.front()};
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Point2 prev = out.back();
    const Point2 next = pts[i + 1];
    const Segment span{prev, next};
    const double scale = std::max(span.length(), 1.0);
    const bool between = dot(pts[i] - prev, next - pts[i]) >= 0.0;
    if (span.length() > 0.0 && between && point_segment_distance(pts[i], span) <= 1e-9 * scale)
      continue;
    out.push_back(pts[i]);
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace detail

/// Control data of a piecewise cubic Bezier chain, as found in Graphviz
/// edge `pos` attributes: 3n+1 control points plus optional arrow endpoints.
struct SplineControl {
  std::vector<Point2> controls;
  std::optional<Point2> start_arrow;
  std::optional<Point2> end_arrow;
};

inline Polyline flatten_polyline(const SplineControl& spline, double tol) {
  const auto& c = spline.controls;
  if (c.size() < 4 || (c.size() - 1) % 3 != 0)
    throw ParseError("spline needs 3n+1 control points, got " + std::to_string(c.size()));
  if (!(tol > 0.0)) throw PreconditionError("flattening tolerance must be positive");
  std::vector<Point2> raw;
  if (spline.start_arrow) raw.push_back(*spline.start_arrow);
  raw.push_back(c.front());
  for (std::size_t i = 0; i + 3 < c.size(); i += 3) {
    const Point2 piece[4] = {c[i], c[i + 1], c[i + 2], c[i + 3]};
    detail::flatten_cubic(piece, tol, 0, raw);
  }
  if (spline.end_arrow) raw.push_back(*spline.end_arrow);
  for (const Point2& p : raw)
    if (!is_finite(p)) throw ParseError("spline has a non-finite coordinate");
  std::vector<Point2> pts = detail::simplify_chain(raw);
  if (pts.size() < 2) throw ParseError("degenerate spline: all control points coincide");
  return Polyline(std::move(pts));
}

}  // namespace clarify
