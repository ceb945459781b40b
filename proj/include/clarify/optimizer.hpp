#pragma once

// MaxMin coloring of a dual collision graph:
//
//   maximize over c: min over dual edges {i,j} of w_ij * |c(i) - c(j)|
//
// solved by repeatedly re-embedding one vertex at a time at the point of
// the color space farthest (weighted) from its neighbours' current colors.
// The single-vertex problem is solved to within sqrt(d) * epsilon by a
// branch-and-bound search over the space's cube decomposition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "clarify/collision.hpp"
#include "clarify/colorspace.hpp"
#include "clarify/error.hpp"
#include "clarify/spatial_index.hpp"

namespace clarify {

template <std::size_t D>
struct WeightedPoint {
  Vec<D> point;
  double weight = 1.0;
};

template <std::size_t D>
using WeightedColorSet = std::vector<WeightedPoint<D>>;

/// min over the set of w * |x - y|; +inf for an empty set.
template <std::size_t D>
double point_set_distance(const Vec<D>& x, std::span<const WeightedPoint<D>> set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& wp : set) best = std::min(best, wp.weight * color_distance(x, wp.point));
  return best;
}

template <std::size_t D>
double point_set_distance(const Vec<D>& x, const WeightedColorSet<D>& set) {
  return point_set_distance<D>(x, std::span<const WeightedPoint<D>>(set));
}

struct EmbedOptions {
  // Off only for testing: refines every live cell down to epsilon.
  bool prune = true;
};

template <std::size_t D>
struct EmbedResult {
  Vec<D> point{};
  double distance = 0.0;
};

namespace optimizer_detail {

// dist(., C) is Lipschitz with constant max weight; the sqrt(d) * w(t)
// half-diagonal bound is scaled by it when weights exceed 1.
template <std::size_t D>
double lipschitz_factor(std::span<const WeightedPoint<D>> set) {
  double l = 1.0;
  for (const auto& wp : set) l = std::max(l, wp.weight);
  return l;
}

// Float slack on the pruning test so rounding never discards a tie.
inline double prune_slack(double best) { return 1e-12 * (1.0 + std::abs(best)); }

template <std::size_t D>
EmbedResult<D> embed_continuous(std::span<const WeightedPoint<D>> targets, const Octree<D>& tree, double epsilon,
                                EmbedOptions opt) {
  const double reach = lipschitz_factor(targets) * std::sqrt(static_cast<double>(D));
  const SpatialCell<D> root = tree.root();
  EmbedResult<D> best{tree.candidate_point(root), 0.0};
  best.distance = point_set_distance(best.point, targets);

  std::deque<SpatialCell<D>> queue{root};
  while (!queue.empty()) {
    const SpatialCell<D> s = queue.front();
    if (s.half_width < epsilon) break;
    queue.pop_front();
    for (const SpatialCell<D>& t : subdivide(s)) {
      if (!tree.is_live(t)) continue;
      const double at_center = point_set_distance(t.center, targets);
      if (opt.prune && at_center + reach * t.half_width < best.distance - prune_slack(best.distance)) continue;
      const Vec<D> cand = tree.candidate_point(t);
      const double value = cand == t.center ? at_center : point_set_distance(cand, targets);
      if (value > best.distance) best = {cand, value};
      queue.push_back(t);
    }
  }
  // Final cells are also scored at their box-clamped vertices, so optima on
  // box corners and faces are hit exactly. Every pruned cell scores below
  // dist* everywhere, so this keeps pruned and unpruned runs equal.
  for (const SpatialCell<D>& s : queue) {
    for (std::size_t corner = 0; corner < kChildCount<D>; ++corner) {
      Vec<D> v = s.center;
      for (std::size_t k = 0; k < D; ++k) v[k] += (corner >> k & 1) ? s.half_width : -s.half_width;
      v = tree.space().clamp(v);
      const double value = point_set_distance(v, targets);
      if (value > best.distance) best = {v, value};
    }
  }
  return best;
}

// Discrete spaces are searched exactly: cells are refined down to the
// tree's leaves and leaf samples are scored one by one. Ties between equal
// distances go to the lowest sample index.
template <std::size_t D>
EmbedResult<D> embed_discrete(std::span<const WeightedPoint<D>> targets, const Octree<D>& tree, EmbedOptions opt) {
  const auto pts = tree.space().points();
  const double reach = lipschitz_factor(targets) * std::sqrt(static_cast<double>(D));
  std::uint32_t best_idx = 0;
  double best_dist = -1.0;
  auto offer = [&](std::uint32_t idx) {
    const double d = point_set_distance(pts[idx], targets);
    if (d > best_dist || (d == best_dist && idx < best_idx)) {
      best_dist = d;
      best_idx = idx;
    }
  };
  auto scan_leaf = [&](const SpatialCell<D>& cell) {
    for (std::uint32_t idx : tree.samples(cell)) offer(idx);
  };

  const SpatialCell<D> root = tree.root();
  if (tree.is_leaf(root)) {
    scan_leaf(root);
    return {pts[best_idx], best_dist};
  }
  offer(tree.candidate_index(root));
  std::deque<SpatialCell<D>> queue{root};
  while (!queue.empty()) {
    const SpatialCell<D> s = queue.front();
    queue.pop_front();
    for (const SpatialCell<D>& t : tree.children(s)) {
      if (opt.prune) {
        const double bound = point_set_distance(t.center, targets) + reach * t.half_width;
        if (bound < best_dist - prune_slack(best_dist)) continue;
      }
      if (tree.is_leaf(t)) {
        scan_leaf(t);
        continue;
      }
      offer(tree.candidate_index(t));
      queue.push_back(t);
    }
  }
  return {pts[best_idx], best_dist};
}

}  // namespace optimizer_detail

/// Point of the space farthest from the weighted target set. Continuous
/// spaces: within sqrt(d) * epsilon (times the largest weight above 1) of
/// the optimum. Discrete spaces: the exact optimum, lowest index on ties.
/// An empty target set yields the space's default point.
template <std::size_t D>
EmbedResult<D> embed_one_node(std::span<const WeightedPoint<D>> targets, const Octree<D>& tree, double epsilon,
                              EmbedOptions opt = {}) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (targets.empty()) return {tree.space().default_point(), std::numeric_limits<double>::infinity()};
  if (tree.space().is_discrete()) return optimizer_detail::embed_discrete(targets, tree, opt);
  return optimizer_detail::embed_continuous(targets, tree, epsilon, opt);
}

template <std::size_t D>
EmbedResult<D> embed_one_node(const WeightedColorSet<D>& targets, const Octree<D>& tree, double epsilon,
                              EmbedOptions opt = {}) {
  return embed_one_node<D>(std::span<const WeightedPoint<D>>(targets), tree, epsilon, opt);
}

/// Builds a throwaway tree; prefer the Octree overload in loops.
template <std::size_t D>
EmbedResult<D> embed_one_node(const WeightedColorSet<D>& targets, const ColorSpace<D>& space, double epsilon,
                              EmbedOptions opt = {}) {
  const Octree<D> tree(space);
  return embed_one_node<D>(targets, tree, epsilon, opt);
}

struct OptimizerConfig {
  double epsilon = 1e-2;
  int random_starts = 1;
  std::uint64_t seed = 0;
  int max_outer_iterations = 100;

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (random_starts < 1) throw ConfigError("need at least one random start");
    if (max_outer_iterations < 1) throw ConfigError("need at least one outer iteration");
  }
};

/// Sweep quality, ordered lexicographically.
struct Objective {
  double mindist = 0.0;
  double sumdist = 0.0;
};

namespace optimizer_detail {

inline bool nearly_equal(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace optimizer_detail

/// Strict lexicographic improvement; equality is judged with relative
/// tolerance 1e-12.
inline bool improves(const Objective& now, const Objective& old) {
  using optimizer_detail::nearly_equal;
  if (!nearly_equal(now.mindist, old.mindist)) return now.mindist > old.mindist;
  return !nearly_equal(now.sumdist, old.sumdist) && now.sumdist > old.sumdist;
}

template <std::size_t D>
WeightedColorSet<D> neighbor_colors(const DualCollisionGraph& dual, std::size_t v, const std::vector<Vec<D>>& colors) {
  WeightedColorSet<D> out;
  out.reserve(dual.neighbors(v).size());
  for (const auto& n : dual.neighbors(v)) out.push_back({colors[n.node], n.weight});
  return out;
}

/// Objective of a full coloring: min over dual edges of w_ij |c(i)-c(j)|
/// (+inf without dual edges) and the sum over non-isolated vertices of
/// their weighted distance to the neighbour color set.
template <std::size_t D>
Objective evaluate_objective(const DualCollisionGraph& dual, const std::vector<Vec<D>>& colors,
                             std::span<const std::size_t> vertices) {
  Objective obj{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t v : vertices) {
    if (dual.neighbors(v).empty()) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& n : dual.neighbors(v)) {
      const double d = n.weight * color_distance(colors[v], colors[n.node]);
      nearest = std::min(nearest, d);
    }
    obj.mindist = std::min(obj.mindist, nearest);
    obj.sumdist += nearest;
  }
  return obj;
}

template <std::size_t D>
Objective evaluate_objective(const DualCollisionGraph& dual, const std::vector<Vec<D>>& colors) {
  std::vector<std::size_t> all(dual.node_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return evaluate_objective<D>(dual, colors, all);
}

template <std::size_t D>
struct ComponentResult {
  std::vector<std::size_t> vertices;  // ascending
  std::vector<Vec<D>> colors;         // aligned with vertices
  Objective objective;
  std::vector<Objective> sweeps;      // objective after every sweep
  bool hit_iteration_cap = false;
};

/// Uniform random point of the space.
template <std::size_t D>
Vec<D> random_point(const ColorSpace<D>& space, std::mt19937_64& rng) {
  if (space.is_discrete()) {
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    return space.points()[pick(rng)];
  }
  Vec<D> p;
  for (std::size_t k = 0; k < D; ++k) p[k] = std::uniform_real_distribution<double>(space.lower()[k], space.upper()[k])(rng);
  return space.clamp(p);
}

/// Seed for one restart of one component.
inline std::uint64_t derive_seed(std::uint64_t seed, std::size_t component, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(component), static_cast<std::uint32_t>(start)};
  std::array<std::uint32_t, 2> words;
  seq.generate(words.begin(), words.end());
  return (std::uint64_t{words[0]} << 32) | words[1];
}

/// One restart on one component: random colors, then sweeps in ascending
/// vertex order until a sweep fails to improve (mindist, sumdist). Returns
/// the best sweep seen, not the last one.
template <std::size_t D>
ComponentResult<D> clarify_component(const DualCollisionGraph& dual, std::span<const std::size_t> vertices,
                                     const Octree<D>& tree, const OptimizerConfig& cfg, std::uint64_t start_seed) {
  cfg.validate();
  if (vertices.empty()) throw PreconditionError("component has no vertices");
  const ColorSpace<D>& space = tree.space();
  ComponentResult<D> result;
  result.vertices.assign(vertices.begin(), vertices.end());

  std::vector<Vec<D>> colors(dual.node_count(), space.darkest_point());
  if (vertices.size() == 1 && dual.neighbors(vertices[0]).empty()) {
    result.colors = {colors[vertices[0]]};
    result.objective = {std::numeric_limits<double>::infinity(), 0.0};
    return result;
  }

  std::mt19937_64 rng(start_seed);
  for (std::size_t v : vertices) colors[v] = random_point(space, rng);

  Objective previous{0.0, 0.0};
  bool have_best = false;
  for (int iter = 0; iter < cfg.max_outer_iterations; ++iter) {
    for (std::size_t v : vertices) {
      const auto targets = neighbor_colors<D>(dual, v, colors);
      colors[v] = embed_one_node<D>(targets, tree, cfg.epsilon).point;
    }
    const Objective now = evaluate_objective<D>(dual, colors, vertices);
    result.sweeps.push_back(now);
    if (!have_best || improves(now, result.objective)) {
      have_best = true;
      result.objective = now;
      result.colors.clear();
      for (std::size_t v : vertices) result.colors.push_back(colors[v]);
    }
    if (!improves(now, previous)) return result;
    previous = now;
  }
  result.hit_iteration_cap = true;
  return result;
}

template <std::size_t D>
struct ColorAssignment {
  std::vector<Vec<D>> colors;  // one per dual vertex
  double mindist = std::numeric_limits<double>::infinity();
  double sumdist = 0.0;
  std::vector<std::string> warnings;
};

/// Colors every component independently, keeping the best of
/// cfg.random_starts restarts each. Isolated vertices get the darkest color.
template <std::size_t D>
ColorAssignment<D> clarify(const DualCollisionGraph& dual, const Octree<D>& tree, const OptimizerConfig& cfg) {
  cfg.validate();
  ColorAssignment<D> out;
  out.colors.assign(dual.node_count(), tree.space().darkest_point());
  const auto& comps = dual.components();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& comp = comps[ci];
    if (comp.size() < 2) continue;
    ComponentResult<D> best;
    for (int start = 0; start < cfg.random_starts; ++start) {
      auto r = clarify_component<D>(dual, comp, tree, cfg, derive_seed(cfg.seed, ci, start));
      if (start == 0 || improves(r.objective, best.objective)) best = std::move(r);
    }
    if (best.hit_iteration_cap)
      out.warnings.push_back("component " + std::to_string(ci) + " stopped at the outer iteration cap");
    for (std::size_t k = 0; k < comp.size(); ++k) out.colors[comp[k]] = best.colors[k];
    out.mindist = std::min(out.mindist, best.objective.mindist);
    out.sumdist += best.objective.sumdist;
  }
  return out;
}

template <std::size_t D>
ColorAssignment<D> clarify(const DualCollisionGraph& dual, const ColorSpace<D>& space, const OptimizerConfig& cfg) {
  const Octree<D> tree(space);
  return clarify<D>(dual, tree, cfg);
}

}  // namespace clarify
