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

#include "oracles.hpp"
#include "treeslam/delaunay.hpp"
#include "treeslam/error.hpp"
#include "treeslam/kdtree.hpp"
#include "treeslam/point_cloud.hpp"

namespace treeslam {
namespace {

using namespace testing;

std::vector<Vec3> hex_lattice(int rows, int cols, double s) {
  std::vector<Vec3> out;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out.emplace_back(s * (c + 0.5 * (r % 2)), s * r * std::sqrt(3.0) / 2.0, 0.0);
  return out;
}

TEST(TransformCloud, IdentityAndRotation) {
  const Frame f = make_frame({Vec3(1, 0, 0), Vec3(2, 3, 4)});
  EXPECT_EQ(transform_cloud(f, RigidTransform::identity()).points, f.points);
  const Frame r = transform_cloud(make_frame({Vec3(1, 0, 0)}), RigidTransform::from_rotation(rot_z(kPi / 2)));
  EXPECT_LT((r.points[0] - Vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(TransformCloud, DoubleApplicationEqualsComposition) {
  std::mt19937_64 rng(1);
  const Frame f = make_frame(uniform_cloud(50, 10, 10, rng));
  const RigidTransform t = random_transform(rng);
  const Frame twice = transform_cloud(transform_cloud(f, t), t);
  const Frame once = transform_cloud(f, t * t);
  ASSERT_EQ(twice.points.size(), 50u);
  for (std::size_t k = 0; k < 50; ++k) EXPECT_LT((twice.points[k] - once.points[k]).norm(), 1e-12);
}

TEST(KdTree, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  const auto pts = uniform_cloud(300, 20, 20, rng);
  const KdTree3 tree(pts);
  for (const auto &q : uniform_cloud(200, 22, 22, rng)) {
    int best = 0;
    for (int k = 1; k < 300; ++k)
      if ((pts[k] - q).squaredNorm() < (pts[best] - q).squaredNorm()) best = k;
    const auto nn = tree.nearest(q);
    ASSERT_EQ(nn.index, best);
    ASSERT_DOUBLE_EQ(nn.squared_distance, (pts[best] - q).squaredNorm());
  }
}

TEST(MatchError, IdenticalAndShifted) {
  std::mt19937_64 rng(3);
  const Frame p = make_frame(hex_lattice(6, 6, 3.0));
  EXPECT_EQ(match_error(p, p, 0.0).error, 0.0);
  EXPECT_EQ(match_error(p, p, 0.6).error, 0.0);
  const Frame q = transform_cloud(p, RigidTransform::from_translation(Vec3(0.1, 0, 0)));
  EXPECT_NEAR(match_error(p, q, 0.0).error, 0.1, 1e-12);
}

TEST(MatchError, TrimsLargestDistances) {
  const Frame p = make_frame({Vec3(0, 0, 0), Vec3(10, 0, 0), Vec3(20, 0, 0), Vec3(30, 0, 0)});
  const Frame q = make_frame({Vec3(0.1, 0, 0), Vec3(10.2, 0, 0), Vec3(20.3, 0, 0), Vec3(34, 0, 0)});
  // ceil(0.5 * 4) = 2 smallest distances: 0.1 and 0.2.
  const MatchError m = match_error(p, q, 0.5);
  EXPECT_NEAR(m.error, std::sqrt((0.01 + 0.04) / 2), 1e-12);
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.pairs[0].query, 0);
  EXPECT_EQ(m.pairs[1].target, 1);
  EXPECT_EQ(trimmed_count(131, 0.6), 53u);
  EXPECT_EQ(trimmed_count(1, 0.9), 1u);
}

TEST(MatchError, IsDirectional) {
  const Frame p = make_frame({Vec3(0, 0, 0), Vec3(5, 0, 0)});
  const Frame q = make_frame({Vec3(0, 0, 0)});
  EXPECT_EQ(match_error(p, q, 0.0).error, 0.0);
  EXPECT_NEAR(match_error(q, p, 0.0).error, std::sqrt(12.5), 1e-12);
}

TEST(MatchError, Errors) {
  const Frame p = make_frame({Vec3(0, 0, 0)});
  try {
    match_error(p, Frame{}, 0.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
  }
  try {
    match_error(p, p, 1.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidRatio);
  }
}

TEST(Delaunay, MatchesEmptyCircleOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Vector2d> pts;
    for (const auto &p : uniform_cloud(25, 10, 7, rng)) pts.push_back(p.head<2>());
    const Triangulation t = delaunay(pts);
    const auto oracle = brute_delaunay_edges(pts);
    const std::set<std::pair<int, int>> got(t.edges.begin(), t.edges.end());
    ASSERT_EQ(got, oracle) << "seed " << seed;
    // Euler on a triangulated point set: E - T = n - 1.
    ASSERT_EQ(t.edges.size() - t.triangles.size(), pts.size() - 1);
  }
}

TEST(Delaunay, RejectsDegenerateInput) {
  const std::vector<Eigen::Vector2d> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_THROW(delaunay(line), Error);
  const std::vector<Eigen::Vector2d> two{{0, 0}, {1, 0}};
  EXPECT_THROW(delaunay(two), Error);
}

TEST(MeanNeighborDistance, UnitSquare) {
  // Co-circular corners: either diagonal gives four sides plus one diagonal,
  // so two vertices average (1 + 1 + √2) / 3 and two average 1.
  const std::vector<Vec3> sq{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  const double diag = std::sqrt(2.0);
  const double expected = (2 * (2 + diag) / 3 + 2 * 1.0) / 4;
  EXPECT_NEAR(mean_neighbor_distance(sq), expected, 1e-12);
  EXPECT_NEAR(expected, (10 + 2 * diag) / 12, 1e-15);
}

TEST(MeanNeighborDistance, OracleOnRandomClouds) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    const auto pts = uniform_cloud(30, 10, 10, rng);
    std::vector<Eigen::Vector2d> flat;
    for (const auto &p : pts) flat.push_back(p.head<2>());
    std::vector<double> sum(30, 0.0);
    std::vector<int> cnt(30, 0);
    for (const auto &[a, b] : brute_delaunay_edges(flat)) {
      const double d = (pts[a] - pts[b]).norm();
      sum[a] += d, sum[b] += d, ++cnt[a], ++cnt[b];
    }
    double total = 0;
    for (int k = 0; k < 30; ++k) total += sum[k] / cnt[k];
    ASSERT_NEAR(mean_neighbor_distance(pts), total / 30, 1e-12);
  }
}

TEST(MeanNeighborDistance, HexLatticeInterior) {
  const double s = 2.5;
  const auto lat = hex_lattice(12, 12, s);
  std::vector<Eigen::Vector2d> flat;
  for (const auto &p : lat) flat.push_back(p.head<2>());
  const Triangulation t = delaunay(flat);
  // Interior vertices have six neighbours at distance s.
  std::vector<std::vector<double>> nb(lat.size());
  for (const auto &[a, b] : t.edges) {
    const double d = (lat[a] - lat[b]).norm();
    nb[a].push_back(d), nb[b].push_back(d);
  }
  int interior = 0;
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const int r = static_cast<int>(k) / 12, c = static_cast<int>(k) % 12;
    if (r < 2 || r > 9 || c < 2 || c > 9) continue;
    ++interior;
    ASSERT_EQ(nb[k].size(), 6u);
    for (double d : nb[k]) ASSERT_NEAR(d, s, 1e-6);
  }
  EXPECT_GT(interior, 0);
}

TEST(MeanNeighborDistance, DuplicatesMergedAndRigidInvariant) {
  std::mt19937_64 rng(4);
  auto pts = uniform_cloud(40, 10, 10, rng);
  const double base = mean_neighbor_distance(pts);
  auto dup = pts;
  dup.push_back(pts[3] + Vec3(1e-8, 0, 0));
  EXPECT_NEAR(mean_neighbor_distance(dup), base, 1e-12);
  const RigidTransform t = RigidTransform::from_yaw(0.7, Vec3(3, -2, 0));
  EXPECT_NEAR(mean_neighbor_distance(transform_points(pts, t)), base, 1e-9);
  try {
    mean_neighbor_distance(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateCloud);
  }
}

ConePose cone_at(double x, double y, double yaw, double half = kPi / 6, double range = 35) {
  return {RigidTransform::from_yaw(yaw, Vec3(x, y, 0)), ViewCone{half, range}};
}

TEST(Overlap, IdenticalAndFarApart) {
  EXPECT_NEAR(overlap_ratio(cone_at(0, 0, 0), cone_at(0, 0, 0)), 1.0, 1e-9);
  EXPECT_EQ(overlap_ratio(cone_at(0, 0, 0), cone_at(71, 0, 0)), 0.0);
  EXPECT_EQ(overlap_ratio(cone_at(0, 0, 0), cone_at(0, 0, kPi)), 0.0);
}

TEST(Overlap, MonteCarloOracle) {
  const double mc = mc_overlap(cone_at(0, 0, 0), cone_at(10, 0, 0), 1000000, 7);
  EXPECT_NEAR(overlap_ratio(cone_at(0, 0, 0), cone_at(10, 0, 0)), mc, 0.01);
  const double mc2 = mc_overlap(cone_at(0, 0, 0, kPi / 3), cone_at(5, 8, 0.6, kPi / 3), 400000, 8);
  EXPECT_NEAR(overlap_ratio(cone_at(0, 0, 0, kPi / 3), cone_at(5, 8, 0.6, kPi / 3)), mc2, 0.01);
  const double mc3 = mc_overlap(cone_at(0, 0, 0, kPi / 2), cone_at(3, 1, 2.0, kPi / 2), 400000, 9);
  EXPECT_NEAR(overlap_ratio(cone_at(0, 0, 0, kPi / 2), cone_at(3, 1, 2.0, kPi / 2)), mc3, 0.01);
}

TEST(Overlap, SymmetricAndRigidInvariant) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> x(-20, 20), a(-kPi, kPi);
  for (int k = 0; k < 50; ++k) {
    const ConePose p = cone_at(x(rng), x(rng), a(rng), kPi / 3);
    const ConePose q = cone_at(x(rng), x(rng), a(rng), kPi / 3);
    const double l = overlap_ratio(p, q);
    ASSERT_NEAR(l, overlap_ratio(q, p), 1e-9);
    const RigidTransform t = RigidTransform::from_yaw(a(rng), Vec3(x(rng), x(rng), 0));
    ASSERT_NEAR(l, overlap_ratio({t * p.pose, p.cone}, {t * q.pose, q.cone}), 1e-9);
    ASSERT_GE(l, 0.0);
    ASSERT_LE(l, 1.0);
  }
}

TEST(Overlap, NestedConesReachOne) {
  const ConePose big = cone_at(0, 0, 0, kPi / 3, 35);
  const ConePose small = cone_at(2, 0, 0, kPi / 12, 10);
  EXPECT_NEAR(overlap_ratio(big, small), 1.0, 1e-9);
}

TEST(InsideCone, Boundaries) {
  const ConePose c = cone_at(0, 0, 0, kPi / 6, 35);
  EXPECT_TRUE(inside_cone(c, Vec3(10, 0, 5)));
  EXPECT_FALSE(inside_cone(c, Vec3(-10, 0, 0)));
  EXPECT_FALSE(inside_cone(c, Vec3(36, 0, 0)));
  EXPECT_FALSE(inside_cone(c, Vec3(10, 10, 0)));
}

}  // namespace
}  // namespace treeslam
