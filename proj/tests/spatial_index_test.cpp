#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "clarify/spatial_index.hpp"

namespace clarify {
namespace {

TEST(RootCell, BoxesAndSamples) {
  const auto rgb = root_cell(make_rgb_box());
  for (double c : rgb.center) EXPECT_DOUBLE_EQ(c, 0.35);
  EXPECT_DOUBLE_EQ(rgb.half_width, 0.35);

  const auto gray = root_cell(make_gray());
  EXPECT_DOUBLE_EQ(gray.center[0], 0.5);
  EXPECT_DOUBLE_EQ(gray.half_width, 0.5);

  const auto two = root_cell(ColorSpace<3>::samples({{0, 0, 0}, {100, 0, 0}}));
  EXPECT_EQ(two.center, (Vec<3>{50, 0, 0}));
  EXPECT_EQ(two.half_width, 50.0);
  EXPECT_EQ(two.sample_count(), 2u);
}

TEST(RootCell, NonCubicBoxGetsCoveringCube) {
  const auto box = ColorSpace<2>::box({0, 0}, {4, 1});
  const auto cell = root_cell(box);
  EXPECT_EQ(cell.center, (Vec<2>{2, 0.5}));
  EXPECT_EQ(cell.half_width, 2.0);
}

TEST(Subdivide, ChildCountsAndGeometry) {
  const auto square = root_cell(ColorSpace<2>::box({0, 0}, {1, 1}));
  const auto quads = subdivide(square);
  ASSERT_EQ(quads.size(), 4u);
  for (const auto& q : quads) EXPECT_DOUBLE_EQ(q.half_width, 0.25);
  std::vector<Vec<2>> centers;
  for (const auto& q : quads) centers.push_back(q.center);
  std::sort(centers.begin(), centers.end());
  EXPECT_EQ(centers, (std::vector<Vec<2>>{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}}));
  EXPECT_EQ(subdivide(root_cell(make_rgb_box())).size(), 8u);
}

TEST(Subdivide, DiscreteChildrenPartitionTheSamples) {
  const std::vector<Vec<2>> pts{{0, 0}, {1, 1}, {0.2, 0.9}, {0.9, 0.1}, {0.5, 0.5}};
  const auto space = ColorSpace<2>::samples(pts);
  const auto root = root_cell(space);
  std::vector<std::uint32_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0u);
  const auto kids = subdivide<2>(root, space.points(), order);
  std::vector<std::uint32_t> seen;
  for (const auto& k : kids) {
    for (std::size_t i = k.begin; i < k.end; ++i) {
      seen.push_back(order[i]);
      // each sample lies in its child's closed cell
      for (std::size_t d = 0; d < 2; ++d)
        EXPECT_LE(std::abs(pts[order[i]][d] - k.center[d]), k.half_width + 1e-15);
    }
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::uint32_t>{0, 1, 2, 3, 4}));
}

TEST(CellIsLive, BoxesAndSamples) {
  const auto box = make_rgb_box();
  SpatialCell<3> inside{{0.3, 0.3, 0.3}, 0.1};
  SpatialCell<3> beyond{{0.9, 0.3, 0.3}, 0.1};
  SpatialCell<3> straddling{{0.75, 0.3, 0.3}, 0.1};
  EXPECT_TRUE(cell_is_live(inside, box));
  EXPECT_FALSE(cell_is_live(beyond, box));
  EXPECT_TRUE(cell_is_live(straddling, box));

  const auto disc = ColorSpace<1>::samples({{0.0}, {1.0}});
  SpatialCell<1> empty{{0.5}, 0.5, 1, 1};
  EXPECT_FALSE(cell_is_live(empty, disc));
}

TEST(CandidatePoint, ClampAndNearestSample) {
  const Octree<3> box(make_rgb_box());
  SpatialCell<3> inside{{0.3, 0.3, 0.3}, 0.1};
  EXPECT_EQ(box.candidate_point(inside), inside.center);
  SpatialCell<3> straddle{{0.75, 0.2, -0.02}, 0.1};
  EXPECT_EQ(box.candidate_point(straddle), (Vec<3>{0.7, 0.2, 0.0}));

  const std::vector<Vec<1>> pts{{0.0}, {1.0}};
  const std::vector<std::uint32_t> order{0, 1};
  SpatialCell<1> cell{{0.4}, 0.6, 0, 2};
  EXPECT_EQ(nearest_sample<1>(cell, pts, order), 0u);
  // exact tie goes to the lower index
  cell.center = {0.5};
  EXPECT_EQ(nearest_sample<1>(cell, pts, std::vector<std::uint32_t>{1, 0}), 0u);
}

TEST(Octree, DiscreteTreeCoversEverySampleOnceAndRespectsLeafSize) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Vec<3>> pts(5000);
  for (auto& p : pts) p = {u(rng), u(rng) - 50, u(rng) - 50};
  const Octree<3> tree(ColorSpace<3>::samples(pts), 8);
  std::vector<std::uint32_t> leaves;
  std::vector<SpatialCell<3>> stack{tree.root()};
  while (!stack.empty()) {
    const auto cell = stack.back();
    stack.pop_back();
    EXPECT_TRUE(tree.is_live(cell));
    const auto samples = tree.samples(cell);
    // the candidate is the sample nearest the center
    const auto cand = tree.candidate_point(cell);
    for (std::uint32_t s : samples) EXPECT_LE(squared_distance(cand, cell.center), squared_distance(pts[s], cell.center));
    if (tree.is_leaf(cell)) {
      EXPECT_LE(cell.sample_count(), 8u);
      leaves.insert(leaves.end(), samples.begin(), samples.end());
      continue;
    }
    std::size_t child_total = 0;
    for (const auto& kid : tree.children(cell)) {
      EXPECT_GT(kid.sample_count(), 0u);
      EXPECT_DOUBLE_EQ(kid.half_width, cell.half_width / 2);
      child_total += kid.sample_count();
      stack.push_back(kid);
    }
    EXPECT_EQ(child_total, cell.sample_count());
  }
  std::sort(leaves.begin(), leaves.end());
  std::vector<std::uint32_t> all(pts.size());
  std::iota(all.begin(), all.end(), 0u);
  EXPECT_EQ(leaves, all);
}

TEST(Octree, DuplicateHeavyDiscreteSpaceTerminates) {
  // distinct points that share coordinates on every axis but one
  std::vector<Vec<2>> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({0.0, i * 1e-9});
  pts.push_back({1.0, 1.0});
  const Octree<2> tree(ColorSpace<2>::samples(pts), 2);
  EXPECT_GT(tree.node_count(), 1u);
}

TEST(Octree, ContinuousChildrenAreAllOrthants) {
  const Octree<1> tree(make_gray());
  const auto kids = tree.children(tree.root());
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_DOUBLE_EQ(kids[0].center[0], 0.25);
  EXPECT_DOUBLE_EQ(kids[1].center[0], 0.75);
}

}  // namespace
}  // namespace clarify
