// Copyright 2026, The treeslam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "treeslam/map_quality.hpp"

namespace treeslam {
namespace {

using namespace testing;

FusedMap map_of(std::vector<Vec3> pts) {
  const std::vector<Frame> frames{make_frame(std::move(pts))};
  return build_map(frames, chain_from_steps({}));
}

/// Ground-truth map of the first n frames of a straight strip run.
struct Scene {
  std::vector<Frame> frames;
  Chain truth;
};

Scene strip_scene(std::uint64_t seed, int n, const ScanSpec &spec = {}) {
  const auto poses = simulate_path(std::vector<Vec3>{{15, 20, 0}, {165, 20, 0}}, 200);
  Scene s;
  for (int f = 0; f < n; ++f) s.frames.push_back(scan(site_forest(seed), poses[f], spec, 1000 * seed + f, f));
  s.truth = ground_truth_chain(std::span(poses).first(n));
  return s;
}

TEST(BuildMap, Cases) {
  const ScanPair s = scan_pair(1);
  const std::vector<Frame> one{s.p};
  const FusedMap m1 = build_map(one, chain_from_steps({}));
  EXPECT_EQ(m1.points, s.p.points);

  const std::vector<Frame> two{s.p, s.p};
  const FusedMap m2 = build_map(two, chain_from_steps(std::vector<RigidTransform>(1)));
  ASSERT_EQ(m2.points.size(), 2 * s.p.points.size());
  EXPECT_EQ(m2.frame_index.back(), 1);
  EXPECT_EQ(code_of([&] { build_map(two, chain_from_steps({})); }), ErrorCode::LengthMismatch);
}

TEST(BuildMap, GroundTruthPointsLieOnTrees) {
  const Scene sc = strip_scene(2, 20);
  const FusedMap m = build_map(sc.frames, sc.truth);
  // The map is in frame-0 coordinates; move trees there too.
  const auto poses = simulate_path(std::vector<Vec3>{{15, 20, 0}, {165, 20, 0}}, 200);
  const auto trees = transform_points(site_forest(2), poses[0].inverse());
  for (const auto &p : m.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &t : trees) best = std::min(best, (p - t).norm());
    ASSERT_LT(best, 6 * 0.07);
  }
}

TEST(BlurRatio, SinglePointAndSaturation) {
  EXPECT_NEAR(blur_ratio(map_of({Vec3(3.3, 4.4, 1.0)})), 4e-4, 1e-15);
  // The grid is anchored at the map minimum; the origin point puts every
  // other point in the middle of its fine cell.
  std::vector<Vec3> fill{Vec3::Zero()};
  for (int a = 0; a < 50; ++a)
    for (int b = 0; b < 50; ++b) fill.emplace_back(0.1 + 0.2 * a, 0.1 + 0.2 * b, 0.0);
  EXPECT_NEAR(blur_ratio(map_of(fill)), 1.0, 1e-12);
  EXPECT_EQ(code_of([] { blur_ratio(FusedMap{}); }), ErrorCode::EmptyMap);
  EXPECT_EQ(code_of([&] { blur_ratio(map_of(fill), 1.0, 1.0); }), ErrorCode::InvalidConfig);
}

TEST(BlurRatio, VolumetricSinglePoint) {
  EXPECT_NEAR(blur_ratio(map_of({Vec3(1, 1, 1)}), 0.2, 10.0, true), 8e-6, 1e-15);
}

TEST(BlurRatio, NearlyRotationInvariant) {
  const Scene sc = strip_scene(3, 200);
  const FusedMap m = build_map(sc.frames, sc.truth);
  const double b0 = blur_ratio(m);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0, 2 * kPi);
  for (int k = 0; k < 10; ++k) {
    const double yaw = angle(rng);
    std::vector<RigidTransform> turned;
    for (const auto &t : sc.truth.totals) turned.push_back(RigidTransform::from_yaw(yaw) * t);
    const FusedMap r = build_map(sc.frames, turned);
    EXPECT_LT(std::abs(blur_ratio(r) - b0) / b0, 0.15) << yaw;
  }
}

TEST(BlurRatio, DuplicatingMapLeavesItUnchanged) {
  const Scene sc = strip_scene(4, 20);
  const FusedMap m = build_map(sc.frames, sc.truth);
  FusedMap d = m;
  d.points.insert(d.points.end(), m.points.begin(), m.points.end());
  EXPECT_DOUBLE_EQ(blur_ratio(d), blur_ratio(m));
}

TEST(BlurRatio, SharperForTruthThanDrift) {
  const Scene sc = strip_scene(5, 60);
  const Chain drift = perturb_odometry(sc.truth, 0.3 * kDeg, 0.05, 5);
  EXPECT_LT(blur_ratio(build_map(sc.frames, sc.truth)), blur_ratio(build_map(sc.frames, drift)));
}

TEST(CellCounts, SumAndOrder) {
  const FusedMap m = map_of({Vec3(0.1, 0.1, 0), Vec3(0.15, 0.05, 0), Vec3(1.1, 0.1, 0)});
  const auto cells = cell_counts(m, 1.0);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].count, 2);
  EXPECT_EQ(cells[1].count, 1);
  EXPECT_LT(cells[0].x, cells[1].x);
  EXPECT_EQ(occupied_cells(m, 1.0), 2u);
}

TEST(Clusters, Blobs) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<Vec3> pts;
  for (int k = 0; k < 20; ++k) pts.emplace_back(u(rng), u(rng), 0.0);
  const auto one = cluster_map(map_of(pts));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_LE(one[0].rmse, 0.1);
  EXPECT_EQ(one[0].members.size(), 20u);

  for (int k = 0; k < 20; ++k) pts.emplace_back(5 + u(rng), u(rng), 0.0);
  const FusedMap two = map_of(pts);
  EXPECT_EQ(cluster_map(two).size(), 2u);
  EXPECT_EQ(discarded_fraction(two, cluster_map(two)), 0.0);
  pts.emplace_back(20, 20, 0);
  const FusedMap stray = map_of(pts);
  EXPECT_NEAR(discarded_fraction(stray, cluster_map(stray)), 1.0 / 41.0, 1e-15);
}

TEST(Clusters, RmseExamples) {
  const FusedMap perfect = map_of(std::vector<Vec3>(20, Vec3(1, 2, 0)));
  EXPECT_EQ(cluster_rmse(cluster_map(perfect)), 0.0);
  const FusedMap pair = map_of({Vec3(0, 0, 0), Vec3(0.2, 0, 0)});
  EXPECT_NEAR(cluster_rmse(cluster_map(pair, 0.5, 2)), 0.1, 1e-12);
  EXPECT_EQ(code_of([] { cluster_rmse({}); }), ErrorCode::NoClusters);
}

TEST(Clusters, CountMatchesObservedTrees) {
  ScanSpec spec;
  spec.dropout = 0.0;
  const Scene sc = strip_scene(7, 40, spec);
  const FusedMap m = build_map(sc.frames, sc.truth);
  const auto poses = simulate_path(std::vector<Vec3>{{15, 20, 0}, {165, 20, 0}}, 200);
  const auto trees = transform_points(site_forest(7), poses[0].inverse());
  std::vector<int> hits(trees.size(), 0);
  for (const auto &p : m.points) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < trees.size(); ++t)
      if ((p - trees[t]).squaredNorm() < (p - trees[best]).squaredNorm()) best = t;
    ++hits[best];
  }
  const auto visible = std::count_if(hits.begin(), hits.end(), [](int h) { return h >= 15; });
  const auto clusters = cluster_map(m);
  EXPECT_NEAR(static_cast<double>(clusters.size()), static_cast<double>(visible), 0.1 * visible);
  EXPECT_LE(cluster_rmse(clusters), 2 * 0.07 * std::sqrt(3.0));
}

TEST(BoxDimension, KnownShapes) {
  const std::vector<double> scales{0.1, 0.2, 0.5, 1.0};
  std::vector<Vec3> line, square;
  for (int k = 0; k < 1000; ++k) line.emplace_back(0.005 + 0.01 * k, 0.3, 0.0);
  for (int a = 0; a < 500; ++a)
    for (int b = 0; b < 500; ++b) square.emplace_back(0.01 + 0.02 * a, 0.01 + 0.02 * b, 0.0);
  EXPECT_NEAR(box_dimension(map_of(line), scales).dimension, 1.0, 0.1);
  const DimensionFit sq = box_dimension(map_of(square), scales);
  EXPECT_NEAR(sq.dimension, 2.0, 0.1);
  EXPECT_GT(sq.r_squared, 0.99);
  EXPECT_NEAR(box_dimension(map_of({Vec3(0.5, 0.5, 0)}), scales).dimension, 0.0, 1e-12);
}

TEST(BoxDimension, DegenerateFit) {
  const FusedMap m = map_of({Vec3(0, 0, 0), Vec3(1, 1, 0)});
  EXPECT_EQ(code_of([&] { box_dimension(m, std::vector<double>{0.1, 1.0}); }), ErrorCode::DegenerateFit);
  EXPECT_EQ(code_of([&] { box_dimension(m, std::vector<double>{0.2, 0.3, 0.5}); }), ErrorCode::DegenerateFit);
}

}  // namespace
}  // namespace treeslam
