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
#include "treeslam/error.hpp"
#include "treeslam/icp_global.hpp"

namespace treeslam {
namespace {

using namespace testing;

TEST(Granularity, Values) {
  const Granularity g = granularity(3.5, 0.6, 35.0);
  EXPECT_DOUBLE_EQ(g.delta0, 1.75);
  EXPECT_NEAR(g.theta0, 1.75 / (std::sqrt(0.4) * 35.0), 1e-15);
  EXPECT_NEAR(g.theta0 / kDeg, 4.53, 5e-3);
  EXPECT_NEAR(granularity(3.5, 0.0, 35.0).theta0, 1.75 / 35.0, 1e-15);
  const Granularity h = granularity(2.0, 0.75, 20.0);
  EXPECT_DOUBLE_EQ(h.delta0, 1.0);
  EXPECT_NEAR(h.theta0, 0.1, 1e-15);
  try {
    granularity(3.5, 1.0, 35.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidRatio);
  }
}

TEST(LowerBound, HandValues) {
  const std::vector<double> zero{0, 0, 0}, radii{5, 10, 20};
  EXPECT_EQ(treeslam::lower_bound(zero, radii, 0.3, 0.1), 0.0);
  const std::vector<double> e{0.4, 1.0, 2.0};
  EXPECT_NEAR(treeslam::lower_bound(e, radii, 0.0, 0.0), std::sqrt(0.16 + 1 + 4), 1e-15);
  const std::vector<double> one{1.0}, ten{10.0};
  const double gt = std::sqrt(3.0) * 0.1;
  const double grp = 2 * std::sin(std::sqrt(3.0) * 0.01 / 2) * 10;
  EXPECT_NEAR(gt, 0.1732, 1e-4);
  EXPECT_NEAR(grp, 0.1732, 1e-4);
  EXPECT_NEAR(treeslam::lower_bound(one, ten, 0.1, 0.01), 1 - gt - grp, 1e-12);
  EXPECT_NEAR(treeslam::lower_bound(one, ten, 0.1, 0.01), 0.6536, 1e-4);
}

TEST(BnbCellCount, MatchesAxisProduct) {
  const auto count = [](double zone_h, double zone_t, double sr, double st, Vec3 box) {
    const double r = std::ceil(2 * zone_t / sr - 1e-9) * std::ceil(2 * zone_t / sr - 1e-9) *
                     std::ceil(2 * zone_h / sr - 1e-9);
    return r * std::ceil(box.x() / st - 1e-9) * std::ceil(box.y() / st - 1e-9) *
           std::ceil(box.z() / st - 1e-9);
  };
  const BnbConfig g = general_preset();
  EXPECT_DOUBLE_EQ(static_cast<double>(bnb_cell_count(g)),
                   count(g.horizontal_zone, g.tilt_zone, g.sigma_r, g.sigma_t, g.translation_box));
  EXPECT_EQ(bnb_cell_count(g), 180ull * 180 * 180 * 9 * 9 * 2);
  const BnbConfig s = sparse_uniform_preset();
  EXPECT_DOUBLE_EQ(static_cast<double>(bnb_cell_count(s)),
                   count(s.horizontal_zone, s.tilt_zone, s.sigma_r, s.sigma_t, s.translation_box));
  BnbConfig unit;
  unit.sigma_r = 0.1;
  unit.horizontal_zone = unit.tilt_zone = 0.05;
  unit.sigma_t = 1.0;
  unit.translation_box = Vec3(1, 1, 1);
  EXPECT_EQ(bnb_cell_count(unit), 1u);
}

TEST(BnbCellCount, AutoTranslationGranularity) {
  // 1e-4 N L / 2 with the paper-scale values N = 131 x 180, L = 1.
  EXPECT_NEAR(auto_translation_granularity(131 * 180, 1.0), 1.179, 1e-3);
}

TEST(BnbProblem, BoundIsSound) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScanPair s = scan_pair(seed);
    const IndexedCloud p(s.p.points);
    const BnbProblem problem(p, s.q.points, RigidTransform::from_yaw(0.1, Vec3(1, 0, 0)), 0.6);
    for (int c = 0; c < 10; ++c) {
      BnbCell cell;
      for (int a = 0; a < 3; ++a) {
        cell.half[a] = (0.5 + 0.5 * u(rng)) * 0.1;
        cell.center[a] = 0.2 * u(rng);
      }
      for (int a = 3; a < 6; ++a) {
        cell.half[a] = (0.5 + 0.5 * u(rng)) * 1.0;
        cell.center[a] = 2.0 * u(rng);
      }
      const auto ev = problem.evaluate(cell);
      ASSERT_LE(ev.lower_bound, ev.center_error + 1e-12);
      for (int k = 0; k < 100; ++k) {
        std::array<double, 6> x{};
        for (int a = 0; a < 6; ++a) x[a] = cell.center[a] + u(rng) * cell.half[a];
        ASSERT_GE(problem.error_at(x) + 1e-12, ev.lower_bound);
      }
    }
  }
}

TEST(BnbProblem, ErrorAtMatchesTransform) {
  const ScanPair s = scan_pair(2);
  const IndexedCloud p(s.p.points);
  const BnbProblem problem(p, s.q.points, RigidTransform::identity(), 0.6);
  const std::array<double, 6> x{0.01, -0.02, 0.1, 0.5, -0.3, 0.1};
  const double direct = match_error(p, transform_points(s.q.points, problem.transform(x)), 0.6).error;
  EXPECT_NEAR(problem.error_at(x), direct, 1e-12);
  EXPECT_LT((problem.pivot() - centroid(s.q.points)).norm(), 1e-12);
}

TEST(GoIcp, IdenticalClouds) {
  const ScanPair s = scan_pair(3);
  const IcpResult r = go_icp(s.p, s.p, sparse_uniform_preset(), 0.6);
  EXPECT_LT(r.error, 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(GoIcp, MatchesExhaustiveGridOnSmallPlanarInstances) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    const auto pts = uniform_cloud(12, 8, 8, rng);
    const Frame p = make_frame(pts);
    const Vec3 c = centroid(pts);
    const RigidTransform tau = RigidTransform::from_translation(Vec3(0.7, -0.4, 0)) *
                               RigidTransform::rotation_about(Vec3::UnitZ(), 17 * kDeg, c);
    Frame q = transform_cloud(p, tau);
    std::normal_distribution<double> noise(0, 0.05);
    for (auto &x : q.points) x += Vec3(noise(rng), noise(rng), 0);

    BnbConfig cfg;
    cfg.horizontal_zone = 30 * kDeg;
    cfg.tilt_zone = 0.0;
    cfg.translation_box = Vec3(4, 4, 0);
    cfg.sigma_r = 4 * kDeg;
    cfg.sigma_t = 0.5;
    cfg.optimality_gap = 0.0;
    const double gamma = 0.25;
    const IcpResult r = go_icp(p, q, cfg, gamma);

    // Exhaustive yaw/translation grid at an eighth of the granularity,
    // rotating about the moving-cloud centroid.
    const IndexedCloud target(p.points);
    const Vec3 pivot = centroid(q.points);
    double radius = 0;
    for (const auto &x : q.points) radius = std::max(radius, (x - pivot).norm());
    const double dr = cfg.sigma_r / 8, dt = cfg.sigma_t / 8;
    double grid_best = 1e300;
    for (double yaw = -cfg.horizontal_zone; yaw <= cfg.horizontal_zone + 1e-12; yaw += dr)
      for (double tx = -2; tx <= 2 + 1e-12; tx += dt)
        for (double ty = -2; ty <= 2 + 1e-12; ty += dt) {
          const RigidTransform t = RigidTransform::from_translation(Vec3(tx, ty, 0)) *
                                   RigidTransform::rotation_about(Vec3::UnitZ(), yaw, pivot);
          grid_best = std::min(grid_best, match_error(target, transform_points(q.points, t), gamma).error);
        }
    // Half a grid step moves any point by at most grid_tol; leaves of the
    // search are refined by local ICP, so the search itself is optimal up to
    // half a granularity cell.
    const double grid_tol = radius * dr / 2 + std::sqrt(2.0) * dt / 2;
    const double sigma_tol = radius * cfg.sigma_r / 2 + std::sqrt(2.0) * cfg.sigma_t / 2;
    EXPECT_LE(r.error, grid_best + sigma_tol) << seed;
    EXPECT_LE(grid_best, r.error + grid_tol) << seed;
  }
}

TEST(GoIcp, RecoversLargeRotationWhereLocalIcpFails) {
  int global_ok = 0, local_ok = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const ScanPair s = scan_pair(seed);
    const Vec3 c = centroid(s.q.points);
    const RigidTransform tau = RigidTransform::from_translation(Vec3(3, 0, 0)) *
                               RigidTransform::rotation_about(Vec3::UnitZ(), 20 * kDeg, c);
    const Frame q = transform_cloud(s.q, tau);
    if (icp_match(s.p, q, RigidTransform::identity()).error <= 0.2) ++local_ok;
    BnbStats st;
    const IcpResult g = go_icp(s.p, q, sparse_uniform_preset(), 0.6, RigidTransform::identity(), &st);
    if (g.error <= 0.2 && (g.transform * tau).translation().norm() < 0.5) ++global_ok;
    EXPECT_GT(st.nodes, 0);
  }
  EXPECT_EQ(global_ok, 4);
  EXPECT_EQ(local_ok, 0);
}

TEST(GoIcp, DeterministicAndMonotoneIncumbent) {
  const ScanPair s = scan_pair(5);
  const RigidTransform tau = RigidTransform::rotation_about(Vec3::UnitZ(), 12 * kDeg, centroid(s.q.points));
  const Frame q = transform_cloud(s.q, tau);
  const IcpResult a = go_icp(s.p, q, sparse_uniform_preset(), 0.6);
  const IcpResult b = go_icp(s.p, q, sparse_uniform_preset(), 0.6);
  EXPECT_EQ(a.transform.matrix(), b.transform.matrix());
  EXPECT_EQ(a.error, b.error);
  EXPECT_EQ(a.error_trace, b.error_trace);
  for (std::size_t k = 1; k < a.error_trace.size(); ++k) EXPECT_LT(a.error_trace[k], a.error_trace[k - 1]);
  EXPECT_EQ(a.error, a.error_trace.back());
}

TEST(GoIcp, NodeBudgetReportsNotConverged) {
  const ScanPair s = scan_pair(6);
  const Frame q = transform_cloud(s.q, RigidTransform::rotation_about(Vec3::UnitZ(), 20 * kDeg, centroid(s.q.points)));
  BnbConfig cfg = sparse_uniform_preset();
  cfg.max_nodes = 5;
  cfg.optimality_gap = 0.0;
  BnbStats st;
  const IcpResult r = go_icp(s.p, q, cfg, 0.6, RigidTransform::identity(), &st);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(st.budget_exhausted);
}

TEST(GoIcp, EmptyCloud) {
  const Frame p = make_frame({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)});
  try {
    go_icp(p, Frame{}, sparse_uniform_preset(), 0.6);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
  }
}

}  // namespace
}  // namespace treeslam
