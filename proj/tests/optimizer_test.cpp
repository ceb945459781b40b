#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "clarify/optimizer.hpp"

namespace clarify {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

TEST(PointSetDistance, Examples) {
  EXPECT_EQ(point_set_distance<3>({0, 0, 0}, WeightedColorSet<3>{{{1, 0, 0}, 1.0}}), 1.0);
  const WeightedColorSet<2> c{{{3, 4}, 0.5}, {{1, 0}, 2.0}};
  // direct evaluation: min(0.5 * 5, 2 * 1)
  EXPECT_DOUBLE_EQ(point_set_distance<2>({0, 0}, c), std::min(0.5 * 5.0, 2.0 * 1.0));
  EXPECT_EQ(point_set_distance<2>({0, 0}, WeightedColorSet<2>{}), kInf);
}

TEST(EmbedOneNode, SquareWithCenterTargetGoesToACorner) {
  const auto square = ColorSpace<2>::box({0, 0}, {1, 1});
  const WeightedColorSet<2> c{{{0.5, 0.5}, 1.0}};
  const auto r = embed_one_node<2>(c, square, 1e-3);
  // 101 x 101 grid oracle
  double grid_best = 0.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) grid_best = std::max(grid_best, point_set_distance<2>({i / 100.0, j / 100.0}, c));
  EXPECT_DOUBLE_EQ(grid_best, std::sqrt(0.5));
  EXPECT_GE(r.distance, grid_best - std::sqrt(2.0) * 1e-3);
  EXPECT_LE(r.distance, std::sqrt(0.5) + 1e-15);
  EXPECT_NEAR(std::abs(r.point[0] - 0.5), 0.5, 2e-3);
  EXPECT_NEAR(std::abs(r.point[1] - 0.5), 0.5, 2e-3);
  EXPECT_DOUBLE_EQ(r.distance, point_set_distance<2>(r.point, c));
}

TEST(EmbedOneNode, EmptyTargetsGiveDefaultPoint) {
  const auto r = embed_one_node<3>(WeightedColorSet<3>{}, make_rgb_box(), 1e-2);
  EXPECT_EQ(r.point, (Vec<3>{0, 0, 0}));
  EXPECT_EQ(r.distance, kInf);
  const auto s = ColorSpace<1>::samples({{0.3}, {0.1}});
  EXPECT_EQ(embed_one_node<1>(WeightedColorSet<1>{}, s, 1e-2).point[0], 0.3);
}

TEST(EmbedOneNode, DiscreteTieGoesToLowestIndex) {
  const auto s = ColorSpace<1>::samples({{0.0}, {0.25}, {0.5}, {0.75}, {1.0}});
  const WeightedColorSet<1> c{{{0.5}, 1.0}};
  // exhaustive over the five samples
  double best = -1;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = point_set_distance<1>(s.points()[i], c);
    if (d > best) best = d, best_i = i;
  }
  const auto r = embed_one_node<1>(c, s, 1e-2);
  EXPECT_EQ(best_i, 0u);
  EXPECT_EQ(r.point[0], 0.0);
  EXPECT_EQ(r.distance, 0.5);
  // reversed storage order flips the winner
  const auto rev = ColorSpace<1>::samples({{1.0}, {0.75}, {0.5}, {0.25}, {0.0}});
  EXPECT_EQ(embed_one_node<1>(c, rev, 1e-2).point[0], 1.0);
}

TEST(EmbedOneNode, WeightsAboveOneStayWithinBound) {
  // a heavy target pulls the answer away from it
  const auto box = make_rgb_box();
  const WeightedColorSet<3> c{{{0.0, 0.0, 0.0}, 5.0}, {{0.7, 0.7, 0.7}, 1.0}};
  const double eps = 1e-2;
  const auto r = embed_one_node<3>(c, box, eps);
  double grid_best = 0.0;
  const int n = 140;  // pitch 0.005 = eps / 2
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        grid_best = std::max(grid_best, point_set_distance<3>({0.7 * i / n, 0.7 * j / n, 0.7 * k / n}, c));
  EXPECT_GE(r.distance, grid_best - 5.0 * std::sqrt(3.0) * eps);
  EXPECT_TRUE(box.contains(r.point));
}

TEST(EmbedOneNode, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(embed_one_node<1>(WeightedColorSet<1>{{{0.5}, 1.0}}, make_gray(), 0.0), PreconditionError);
}

TEST(Improves, Lexicographic) {
  EXPECT_TRUE(improves({1.0, 0.0}, {0.5, 10.0}));
  EXPECT_FALSE(improves({0.5, 10.0}, {1.0, 0.0}));
  EXPECT_TRUE(improves({1.0, 2.0}, {1.0, 1.0}));
  EXPECT_FALSE(improves({1.0, 1.0}, {1.0, 1.0}));
  EXPECT_FALSE(improves({1.0 + 1e-15, 1.0}, {1.0, 1.0}));
}

DualCollisionGraph pair_graph() { return DualCollisionGraph(2, {{0, 1, 1.0, SmallAngleCrossing{1}}}); }

TEST(ClarifyComponent, TwoNodesReachOppositeCorners) {
  const Octree<3> tree(make_rgb_box());
  OptimizerConfig cfg;
  cfg.epsilon = 1e-2;
  const std::vector<std::size_t> comp{0, 1};
  const auto r = clarify_component<3>(pair_graph(), comp, tree, cfg, 1);
  // the exact optimum is the long diagonal; corner enumeration oracle
  double best_corner = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const Vec<3> p{0.7 * (a & 1), 0.7 * (a >> 1 & 1), 0.7 * (a >> 2 & 1)};
      const Vec<3> q{0.7 * (b & 1), 0.7 * (b >> 1 & 1), 0.7 * (b >> 2 & 1)};
      best_corner = std::max(best_corner, color_distance(p, q));
    }
  EXPECT_DOUBLE_EQ(best_corner, 0.7 * std::sqrt(3.0));
  EXPECT_GE(r.objective.mindist, best_corner - std::sqrt(3.0) * 1e-2);
  EXPECT_GE(r.objective.mindist, 1.195);
  EXPECT_LE(r.objective.mindist, best_corner + 1e-12);
  EXPECT_FALSE(r.hit_iteration_cap);
}

TEST(ClarifyComponent, SingletonGetsDarkestColor) {
  const DualCollisionGraph dual(1, {});
  const std::vector<std::size_t> comp{0};
  const auto r = clarify_component<3>(dual, comp, Octree<3>(make_rgb_box()), {}, 3);
  EXPECT_EQ(r.colors.front(), (Vec<3>{0, 0, 0}));
  EXPECT_EQ(r.objective.mindist, kInf);
}

TEST(ClarifyComponent, GrayTriangleSpreadsToEndsAndMiddle) {
  const DualCollisionGraph tri(3, {{0, 1, 1.0, SmallAngleCrossing{1}},
                                   {0, 2, 1.0, SmallAngleCrossing{1}},
                                   {1, 2, 1.0, SmallAngleCrossing{1}}});
  // brute force over the 101^3 grid of gray triples
  double oracle = 0.0;
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b)
      for (int c = 0; c <= 100; ++c) {
        const double m = std::min({std::abs(a - b), std::abs(a - c), std::abs(b - c)}) / 100.0;
        oracle = std::max(oracle, m);
      }
  EXPECT_DOUBLE_EQ(oracle, 0.5);

  OptimizerConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.random_starts = 10;
  cfg.seed = 4;
  const auto out = clarify<1>(tri, make_gray(), cfg);
  EXPECT_NEAR(out.mindist, oracle, 1e-2);
  std::vector<double> g{out.colors[0][0], out.colors[1][0], out.colors[2][0]};
  std::sort(g.begin(), g.end());
  EXPECT_NEAR(g[0], 0.0, 1e-2);
  EXPECT_NEAR(g[1], 0.5, 1e-2);
  EXPECT_NEAR(g[2], 1.0, 1e-2);
}

TEST(ClarifyComponent, BestSweepIsNeverWorseThanAnySweep) {
  std::mt19937_64 rng(77);
  const std::size_t n = 20;
  std::vector<DualEdge> edges;
  std::bernoulli_distribution coin(0.25);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j, 1.0, SmallAngleCrossing{1}});
  const DualCollisionGraph dual(n, edges);
  const Octree<3> tree(make_rgb_box());
  for (const auto& comp : dual.components()) {
    if (comp.size() < 2) continue;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto r = clarify_component<3>(dual, comp, tree, {}, s);
      ASSERT_FALSE(r.sweeps.empty());
      for (const auto& sweep : r.sweeps) EXPECT_FALSE(improves(sweep, r.objective));
      // the stored colors really achieve the reported objective
      std::vector<Vec<3>> colors(n, Vec<3>{});
      for (std::size_t k = 0; k < comp.size(); ++k) colors[comp[k]] = r.colors[k];
      const Objective check = evaluate_objective<3>(dual, colors, comp);
      EXPECT_EQ(check.mindist, r.objective.mindist);
      EXPECT_EQ(check.sumdist, r.objective.sumdist);
    }
  }
}

TEST(Clarify, NoDualEdgesGivesDefaultColors) {
  const DualCollisionGraph dual(3, {});
  const auto out = clarify<3>(dual, make_rgb_box(), {});
  for (const auto& c : out.colors) EXPECT_EQ(c, (Vec<3>{0, 0, 0}));
  EXPECT_EQ(out.mindist, kInf);
  EXPECT_TRUE(out.warnings.empty());
}

TEST(Clarify, IndependentComponentsEachReachTheDiagonal) {
  const DualCollisionGraph dual(4, {{0, 1, 1.0, SmallAngleCrossing{1}}, {2, 3, 1.0, SmallAngleCrossing{1}}});
  const auto out = clarify<3>(dual, make_rgb_box(), {});
  EXPECT_GE(color_distance(out.colors[0], out.colors[1]), 0.7 * std::sqrt(3.0) - std::sqrt(3.0) * 1e-2);
  EXPECT_GE(color_distance(out.colors[2], out.colors[3]), 0.7 * std::sqrt(3.0) - std::sqrt(3.0) * 1e-2);
}

DualCollisionGraph random_dual(std::uint64_t seed, std::size_t n, double p) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<DualEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j, 1.0, SmallAngleCrossing{1}});
  return DualCollisionGraph(n, edges);
}

TEST(Clarify, BestOfTenIsAtLeastEverySingleStart) {
  const auto dual = random_dual(2024, 20, 0.3);
  ASSERT_EQ(dual.multi_node_component_count(), 1u);
  const Octree<3> tree(make_rgb_box());
  OptimizerConfig ten;
  ten.random_starts = 10;
  ten.seed = 17;
  const auto best = clarify<3>(dual, tree, ten);
  const auto& comp = dual.components().front();
  for (int s = 0; s < 10; ++s) {
    const auto single = clarify_component<3>(dual, comp, tree, ten, derive_seed(ten.seed, 0, s));
    EXPECT_GE(best.mindist, single.objective.mindist);
  }
}

TEST(Clarify, DeterministicForFixedSeed) {
  const auto dual = random_dual(5, 30, 0.2);
  OptimizerConfig cfg;
  cfg.random_starts = 3;
  cfg.seed = 99;
  const auto a = clarify<3>(dual, make_rgb_box(), cfg);
  const auto b = clarify<3>(dual, make_rgb_box(), cfg);
  EXPECT_EQ(a.colors, b.colors);
  EXPECT_EQ(a.mindist, b.mindist);
  cfg.seed = 100;
  const auto c = clarify<3>(dual, make_rgb_box(), cfg);
  EXPECT_NE(a.colors, c.colors);
}

TEST(Clarify, IterationCapIsReportedAsWarning) {
  const auto dual = random_dual(8, 15, 0.4);
  OptimizerConfig cfg;
  cfg.max_outer_iterations = 1;
  const auto out = clarify<3>(dual, make_rgb_box(), cfg);
  ASSERT_FALSE(out.warnings.empty());
  EXPECT_NE(out.warnings.front().find("iteration cap"), std::string::npos);
}

TEST(Clarify, MapWeightsScaleTheObjective) {
  // path a - x - b: a and b are two hops apart, weight 1/2
  const DualCollisionGraph dual(3, {{0, 1, 1.0, RegionDistance{1}}, {0, 2, 0.5, RegionDistance{2}},
                                    {1, 2, 1.0, RegionDistance{1}}});
  OptimizerConfig cfg;
  cfg.random_starts = 5;
  const auto out = clarify<1>(dual, make_gray(), cfg);
  // optimum: a and b at the ends, x in the middle; every term is 0.5
  EXPECT_NEAR(out.mindist, 0.5, 1e-2);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  cfg.random_starts = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.epsilon = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace clarify
