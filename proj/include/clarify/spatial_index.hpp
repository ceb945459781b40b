#pragma once

// Hierarchical cube decomposition of a color space (binary tree in 1-D,
// quadtree in 2-D, octree in 3-D). Continuous spaces are decomposed on the
// fly; discrete spaces get a tree built once, with each cell owning a
// contiguous range of a permuted sample index array.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "clarify/colorspace.hpp"
#include "clarify/error.hpp"

namespace clarify {

template <std::size_t D>
inline constexpr std::size_t kChildCount = std::size_t{1} << D;

template <std::size_t D>
struct SpatialCell {
  Vec<D> center{};
  double half_width = 0.0;
  // Sample range [begin, end) in the owning index order (discrete spaces).
  std::size_t begin = 0;
  std::size_t end = 0;
  // Node id inside a built Octree, or -1 for cells made on the fly.
  std::int64_t node = -1;

  std::size_t sample_count() const { return end - begin; }
};

/// Smallest cube containing the box, or all the samples.
template <std::size_t D>
SpatialCell<D> root_cell(const ColorSpace<D>& space) {
  Vec<D> lo, hi;
  if (space.is_discrete()) {
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& p : space.points())
      for (std::size_t k = 0; k < D; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
  } else {
    lo = space.lower();
    hi = space.upper();
  }
  SpatialCell<D> cell;
  for (std::size_t k = 0; k < D; ++k) {
    cell.center[k] = 0.5 * (lo[k] + hi[k]);
    cell.half_width = std::max(cell.half_width, 0.5 * (hi[k] - lo[k]));
  }
  if (!(cell.half_width > 0.0)) cell.half_width = 0.5;  // a single sample
  cell.end = space.size();
  return cell;
}

/// Child `index` of a cell: bit k of the index selects the upper half on axis k.
template <std::size_t D>
SpatialCell<D> child_cell(const SpatialCell<D>& cell, std::size_t index) {
  SpatialCell<D> c;
  c.half_width = 0.5 * cell.half_width;
  for (std::size_t k = 0; k < D; ++k)
    c.center[k] = cell.center[k] + ((index >> k & 1) ? c.half_width : -c.half_width);
  return c;
}

template <std::size_t D>
std::array<SpatialCell<D>, kChildCount<D>> subdivide(const SpatialCell<D>& cell) {
  if (!(cell.half_width > 0.0)) throw PreconditionError("cannot subdivide a cell of zero width");
  std::array<SpatialCell<D>, kChildCount<D>> out;
  for (std::size_t i = 0; i < kChildCount<D>; ++i) out[i] = child_cell(cell, i);
  return out;
}

/// Which child a point falls in. Points on a splitting plane go to the
/// lower side.
template <std::size_t D>
std::size_t child_index(const SpatialCell<D>& cell, const Vec<D>& p) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < D; ++k)
    if (p[k] > cell.center[k]) idx |= std::size_t{1} << k;
  return idx;
}

/// Subdivides a discrete cell, stably partitioning order[begin, end) so each
/// child owns a contiguous sub-range.
template <std::size_t D>
std::array<SpatialCell<D>, kChildCount<D>> subdivide(const SpatialCell<D>& cell, std::span<const Vec<D>> points,
                                                     std::span<std::uint32_t> order) {
  auto out = subdivide(cell);
  std::array<std::vector<std::uint32_t>, kChildCount<D>> buckets;
  for (std::size_t i = cell.begin; i < cell.end; ++i) buckets[child_index(cell, points[order[i]])].push_back(order[i]);
  std::size_t pos = cell.begin;
  for (std::size_t c = 0; c < kChildCount<D>; ++c) {
    out[c].begin = pos;
    for (std::uint32_t s : buckets[c]) order[pos++] = s;
    out[c].end = pos;
  }
  return out;
}

/// Whether the closed cell meets the box (continuous) or owns a sample
/// (discrete).
template <std::size_t D>
bool cell_is_live(const SpatialCell<D>& cell, const ColorSpace<D>& space) {
  if (space.is_discrete()) return cell.sample_count() > 0;
  for (std::size_t k = 0; k < D; ++k) {
    if (cell.center[k] - cell.half_width > space.upper()[k]) return false;
    if (cell.center[k] + cell.half_width < space.lower()[k]) return false;
  }
  return true;
}

/// Index of the sample in order[cell.begin, cell.end) nearest the center,
/// ties going to the lowest sample index.
template <std::size_t D>
std::uint32_t nearest_sample(const SpatialCell<D>& cell, std::span<const Vec<D>> points,
                             std::span<const std::uint32_t> order) {
  if (cell.sample_count() == 0) throw PreconditionError("cell holds no samples");
  std::uint32_t best = order[cell.begin];
  double best_d = squared_distance(points[best], cell.center);
  for (std::size_t i = cell.begin + 1; i < cell.end; ++i) {
    const std::uint32_t s = order[i];
    const double d = squared_distance(points[s], cell.center);
    if (d < best_d || (d == best_d && s < best)) {
      best = s;
      best_d = d;
    }
  }
  return best;
}

/// Decomposition of one color space. For discrete spaces the tree is
/// refined until cells hold at most `leaf_size` samples.
template <std::size_t D>
class Octree {
 public:
  explicit Octree(ColorSpace<D> space, std::size_t leaf_size = 8) : space_(std::move(space)), leaf_size_(leaf_size) {
    if (leaf_size_ == 0) throw PreconditionError("leaf size must be positive");
    root_ = root_cell(space_);
    if (space_.is_discrete()) build();
  }

  const ColorSpace<D>& space() const { return space_; }
  const SpatialCell<D>& root() const { return root_; }
  std::size_t leaf_size() const { return leaf_size_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Discrete cells that are not split further; their samples are checked
  /// one by one.
  bool is_leaf(const SpatialCell<D>& cell) const {
    return space_.is_discrete() && nodes_[static_cast<std::size_t>(cell.node)].child_count == 0;
  }

  /// Children of a cell: all 2^D for continuous spaces, the non-empty ones
  /// for discrete spaces.
  std::vector<SpatialCell<D>> children(const SpatialCell<D>& cell) const {
    if (!space_.is_discrete()) {
      auto arr = subdivide(cell);
      return {arr.begin(), arr.end()};
    }
    const Node& n = nodes_[static_cast<std::size_t>(cell.node)];
    std::vector<SpatialCell<D>> out;
    out.reserve(n.child_count);
    for (std::uint32_t c = 0; c < n.child_count; ++c) out.push_back(nodes_[n.first_child + c].cell);
    return out;
  }

  bool is_live(const SpatialCell<D>& cell) const { return cell_is_live(cell, space_); }

  /// The point a live cell is scored by: the center pulled into the box, or
  /// the sample nearest the center.
  Vec<D> candidate_point(const SpatialCell<D>& cell) const {
    if (!space_.is_discrete()) return space_.clamp(cell.center);
    return space_.points()[candidate_index(cell)];
  }

  std::uint32_t candidate_index(const SpatialCell<D>& cell) const {
    return nodes_[static_cast<std::size_t>(cell.node)].candidate;
  }

  /// Sample indices owned by a discrete cell.
  std::span<const std::uint32_t> samples(const SpatialCell<D>& cell) const {
    return std::span<const std::uint32_t>(order_).subspan(cell.begin, cell.sample_count());
  }

 private:
  struct Node {
    SpatialCell<D> cell;
    std::uint32_t first_child = 0;
    std::uint32_t child_count = 0;
    std::uint32_t candidate = 0;
  };

  void build() {
    const auto pts = space_.points();
    if (pts.size() > std::numeric_limits<std::uint32_t>::max()) throw PreconditionError("too many samples");
    order_.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order_[i] = static_cast<std::uint32_t>(i);
    root_.node = 0;
    nodes_.push_back({root_, 0, 0, nearest_sample<D>(root_, pts, order_)});
    const double min_width = root_.half_width * 1e-12;
    // Breadth-first so siblings are stored next to each other.
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      const SpatialCell<D> cell = nodes_[id].cell;
      if (cell.sample_count() <= leaf_size_ || cell.half_width < min_width) continue;
      const auto kids = subdivide<D>(cell, pts, order_);
      const auto first = static_cast<std::uint32_t>(nodes_.size());
      std::uint32_t count = 0;
      for (SpatialCell<D> kid : kids) {
        if (kid.sample_count() == 0) continue;
        kid.node = static_cast<std::int64_t>(nodes_.size());
        nodes_.push_back({kid, 0, 0, nearest_sample<D>(kid, pts, order_)});
        ++count;
      }
      nodes_[id].first_child = first;
      nodes_[id].child_count = count;
    }
  }

  ColorSpace<D> space_;
  std::size_t leaf_size_;
  SpatialCell<D> root_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

}  // namespace clarify
