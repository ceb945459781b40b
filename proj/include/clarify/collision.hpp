#pragma once

// Dual collision graph: one vertex per drawn edge, one weighted link per
// pair of edges that would be confused if drawn in the same color.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "clarify/error.hpp"
#include "clarify/geometry.hpp"

namespace clarify {

struct LayoutNode {
  std::string id;
  Point2 pos;
  std::optional<std::string> label;
};

struct LayoutEdge {
  std::size_t tail = 0;
  std::size_t head = 0;
  Polyline geometry;
};

/// A drawn graph. Edge ids are positions in `edges`.
struct LayoutGraph {
  std::vector<LayoutNode> nodes;
  std::vector<LayoutEdge> edges;

  std::size_t add_node(std::string id, Point2 pos, std::optional<std::string> label = {}) {
    if (!is_finite(pos)) throw PreconditionError("node '" + id + "' has a non-finite position");
    nodes.push_back({std::move(id), pos, std::move(label)});
    return nodes.size() - 1;
  }

  /// Straight edge between two existing nodes.
  std::size_t add_edge(std::size_t tail, std::size_t head) {
    check_endpoints(tail, head);
    if (nodes[tail].pos == nodes[head].pos)
      throw PreconditionError("straight edge '" + nodes[tail].id + "' -- '" + nodes[head].id +
                              "' has zero length");
    edges.push_back({tail, head, Polyline::straight(nodes[tail].pos, nodes[head].pos)});
    return edges.size() - 1;
  }

  std::size_t add_edge(std::size_t tail, std::size_t head, Polyline geometry) {
    check_endpoints(tail, head);
    edges.push_back({tail, head, std::move(geometry)});
    return edges.size() - 1;
  }

 private:
  void check_endpoints(std::size_t tail, std::size_t head) const {
    if (tail >= nodes.size() || head >= nodes.size())
      throw PreconditionError("edge references a missing node");
  }
};

// Collision kinds. Angles in degrees.
struct SmallAngleCrossing {
  double angle;
};
struct SharedSmallAngle {
  double angle;
};
struct SharedStraightAngle {
  double angle;
};
struct NearParallel {
  double distance;
  double angle;
};
/// Map regions joined by a shortest adjacency path of `hops` steps.
struct RegionDistance {
  int hops;
};

using CollisionKind =
    std::variant<SmallAngleCrossing, SharedSmallAngle, SharedStraightAngle, NearParallel, RegionDistance>;

inline const char* kind_name(const CollisionKind& k) {
  constexpr const char* names[] = {"C1", "C2", "C3", "C4", "map"};
  return names[k.index()];
}

/// Which ends of two polylines meet at a common node.
struct SharedEnd {
  bool first_at_start;
  bool second_at_start;
};

/// Most severe collision between two edge drawings, if any. Edges that share
/// a node are judged only by the angle at that node; edges that do not are
/// judged by crossings and by closeness combined with parallelism.
inline std::optional<CollisionKind> check_pair(const Polyline& e1, const Polyline& e2,
                                               std::span<const SharedEnd> shared,
                                               const GeomConfig& cfg) {
  if (!shared.empty()) {
    double smallest = std::numeric_limits<double>::infinity();
    double largest = -1.0;
    for (const SharedEnd& s : shared) {
      const Segment a = e1.leaving_segment(s.first_at_start);
      const Segment b = e2.leaving_segment(s.second_at_start);
      const double angle = detail::vector_angle_deg(a.direction(), b.direction());
      smallest = std::min(smallest, angle);
      largest = std::max(largest, angle);
    }
    if (smallest < cfg.small_angle_deg) return SharedSmallAngle{smallest};
    if (cfg.enable_c3 && largest > cfg.straight_angle_deg) return SharedStraightAngle{largest};
    return std::nullopt;
  }

  std::optional<double> crossing;
  for (std::size_t i = 0; i < e1.segment_count(); ++i) {
    for (std::size_t j = 0; j < e2.segment_count(); ++j) {
      const Segment a = e1.segment(i);
      const Segment b = e2.segment(j);
      if (!segment_intersection(a, b)) continue;
      const double angle = crossing_angle(a, b);
      if (!crossing || angle < *crossing) crossing = angle;
    }
  }
  if (crossing && *crossing < cfg.small_angle_deg) return SmallAngleCrossing{*crossing};

  const double near = cfg.near_dist_frac * std::max(e1.length(), e2.length());
  std::optional<NearParallel> best;
  for (std::size_t i = 0; i < e1.segment_count(); ++i) {
    for (std::size_t j = 0; j < e2.segment_count(); ++j) {
      const Segment a = e1.segment(i);
      const Segment b = e2.segment(j);
      const double dist = segment_distance(a, b);
      if (!(dist < near)) continue;
      const double angle = crossing_angle(a, b);
      if (!(angle < cfg.parallel_angle_deg)) continue;
      if (!best || dist < best->distance) best = NearParallel{dist, angle};
    }
  }
  if (best) return *best;
  return std::nullopt;
}

/// Shared ends of two layout edges (two entries for parallel multi-edges).
inline std::vector<SharedEnd> shared_ends(const LayoutEdge& a, const LayoutEdge& b) {
  std::vector<SharedEnd> out;
  const std::size_t ea[2] = {a.tail, a.head};
  const std::size_t eb[2] = {b.tail, b.head};
  for (int i = 0; i < 2; ++i) {
    if (i == 1 && a.tail == a.head) break;
    for (int j = 0; j < 2; ++j) {
      if (j == 1 && b.tail == b.head) break;
      if (ea[i] == eb[j]) out.push_back({i == 0, j == 0});
    }
  }
  return out;
}

struct DualEdge {
  std::size_t i;  // i < j
  std::size_t j;
  double weight;
  CollisionKind kind;
};

/// One vertex per original edge; vertex k stands for edge k.
class DualCollisionGraph {
 public:
  DualCollisionGraph() = default;

  DualCollisionGraph(std::size_t node_count, std::vector<DualEdge> edges)
      : node_count_(node_count), edges_(std::move(edges)), adjacency_(node_count) {
    std::sort(edges_.begin(), edges_.end(),
              [](const DualEdge& a, const DualEdge& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const DualEdge& e = edges_[k];
      if (e.i >= node_count_ || e.j >= node_count_) throw PreconditionError("dual edge endpoint out of range");
      if (e.i >= e.j) throw PreconditionError("dual edge must satisfy i < j (no self-loops)");
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw PreconditionError("dual edge weight must be positive and finite");
      if (k > 0 && edges_[k - 1].i == e.i && edges_[k - 1].j == e.j)
        throw PreconditionError("duplicate dual edge");
      adjacency_[e.i].push_back({e.j, e.weight});
      adjacency_[e.j].push_back({e.i, e.weight});
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
    compute_components();
  }

  struct Neighbor {
    std::size_t node;
    double weight;
    friend auto operator<=>(const Neighbor&, const Neighbor&) = default;
  };

  std::size_t node_count() const { return node_count_; }
  const std::vector<DualEdge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(std::size_t v) const { return adjacency_[v]; }

  /// Connected components, multi-vertex ones first (ordered by smallest
  /// member), then singletons in ascending order. Members are ascending.
  const std::vector<std::vector<std::size_t>>& components() const { return components_; }

  std::size_t multi_node_component_count() const {
    return static_cast<std::size_t>(std::count_if(components_.begin(), components_.end(),
                                                  [](const auto& c) { return c.size() > 1; }));
  }

 private:
  void compute_components() {
    std::vector<bool> seen(node_count_, false);
    std::vector<std::vector<std::size_t>> multi, single;
    for (std::size_t s = 0; s < node_count_; ++s) {
      if (seen[s]) continue;
      std::vector<std::size_t> comp;
      std::vector<std::size_t> stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (const Neighbor& n : adjacency_[v]) {
          if (!seen[n.node]) {
            seen[n.node] = true;
            stack.push_back(n.node);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      (comp.size() > 1 ? multi : single).push_back(std::move(comp));
    }
    components_ = std::move(multi);
    components_.insert(components_.end(), single.begin(), single.end());
  }

  std::size_t node_count_ = 0;
  std::vector<DualEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<std::size_t>> components_;
};

inline std::vector<std::vector<std::size_t>> components(const DualCollisionGraph& dual) {
  return dual.components();
}

/// Naive all-pairs scan. Every colliding pair gets weight 1.
inline DualCollisionGraph build_collision_graph(const LayoutGraph& g, const GeomConfig& cfg) {
  cfg.validate();
  std::vector<DualEdge> dual;
  const std::size_t n = g.edges.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::vector<SharedEnd> shared = shared_ends(g.edges[a], g.edges[b]);
      if (auto kind = check_pair(g.edges[a].geometry, g.edges[b].geometry, shared, cfg))
        dual.push_back({a, b, 1.0, *kind});
    }
  }
  return DualCollisionGraph(n, std::move(dual));
}

/// Region adjacency for map coloring; neighbor lists are symmetric.
struct RegionAdjacency {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> neighbors;

  std::size_t add_region(const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(name);
    neighbors.emplace_back();
    return names.size() - 1;
  }

  void connect(std::size_t a, std::size_t b) {
    if (a == b) return;
    if (std::find(neighbors[a].begin(), neighbors[a].end(), b) == neighbors[a].end()) {
      neighbors[a].push_back(b);
      neighbors[b].push_back(a);
    }
  }
};

/// Complete dual over each adjacency component with w_ij = 1 / hops(i, j).
/// Regions in different components are left unconstrained.
inline DualCollisionGraph build_map_dual(const RegionAdjacency& regions) {
  const std::size_t k = regions.names.size();
  if (k == 0) throw PreconditionError("map needs at least one region");
  std::vector<DualEdge> dual;
  std::vector<int> hops(k);
  for (std::size_t src = 0; src < k; ++src) {
    std::fill(hops.begin(), hops.end(), -1);
    hops[src] = 0;
    std::queue<std::size_t> q;
    q.push(src);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t u : regions.neighbors[v]) {
        if (hops[u] < 0) {
          hops[u] = hops[v] + 1;
          q.push(u);
        }
      }
    }
    for (std::size_t dst = src + 1; dst < k; ++dst)
      if (hops[dst] > 0) dual.push_back({src, dst, 1.0 / hops[dst], RegionDistance{hops[dst]}});
  }
  return DualCollisionGraph(k, std::move(dual));
}

}  // namespace clarify
