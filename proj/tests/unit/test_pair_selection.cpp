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
#include "treeslam/icp_global.hpp"
#include "treeslam/map_quality.hpp"
#include "treeslam/pair_selection.hpp"

namespace treeslam {
namespace {

using namespace testing;
using Vec2 = Eigen::Vector2d;

MatchPair pair(int i, int j) {
  MatchPair p;
  p.i = i;
  p.j = j;
  return p;
}

TEST(Gate, Inequality) {
  const SelectionConfig cfg;
  EXPECT_TRUE(passes_gate(0.45, 0.4, cfg));
  EXPECT_FALSE(passes_gate(0.5, 0.4, cfg));
  EXPECT_TRUE(passes_gate(0.0, 1.0, cfg));
}

TEST(CandidatePairs, IdenticalFramesQualify) {
  const ScanPair s = scan_pair(1, 90.0, 0.0);
  std::vector<Frame> frames{s.p, s.p, s.p};
  const Chain c = chain_from_steps(std::vector<RigidTransform>(2));
  const auto pairs = candidate_pairs(c, frames, {});
  ASSERT_EQ(pairs.size(), 3u);
  for (const auto &p : pairs) {
    EXPECT_GT(p.i, p.j);
    EXPECT_NEAR(p.lambda, 1.0, 1e-12);
    EXPECT_LT(p.error, 1e-12);
  }
  SelectionConfig narrow;
  narrow.max_gap = 1;
  EXPECT_EQ(candidate_pairs(c, frames, narrow).size(), 2u);
}

TEST(CandidatePairs, LowOverlapExcluded) {
  // Same cloud in both frames, but the second pose is turned so that the
  // view sectors share less than 20% of their area.
  const ScanPair s = scan_pair(2, 90.0, 0.0);
  const std::vector<Frame> frames{s.p, s.p};
  const Chain c = chain_from_steps(std::vector<RigidTransform>{RigidTransform::from_yaw(1.9)});
  EXPECT_TRUE(candidate_pairs(c, frames, {}).empty());
}

TEST(GridRound, Examples) {
  const std::vector<Vec2> ints{{0, 0}, {3, 1}, {2, 5}};
  auto r = grid_round(ints, 1.0);
  EXPECT_EQ(r.size(), 3u);
  for (const auto &p : ints) EXPECT_NE(std::find(r.begin(), r.end(), p), r.end());

  const std::vector<Vec2> two{{0.4, 0.4}, {0.6, 0.6}};
  r = grid_round(two, 1.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], Vec2(0, 0));
  EXPECT_EQ(r[1], Vec2(1, 1));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(100, 101);
  std::vector<Vec2> blob;
  for (int k = 0; k < 1000; ++k) blob.emplace_back(u(rng), u(rng));
  EXPECT_EQ(grid_round(blob, 1000.0).size(), 1u);
  // Rounding is idempotent.
  const auto once = grid_round(blob, 0.3);
  EXPECT_EQ(grid_round(once, 0.3), once);
}

std::vector<MatchPair> triangle(int n, int max_gap) {
  std::vector<MatchPair> out;
  for (int i = 1; i < n; ++i)
    for (int j = std::max(0, i - max_gap); j < i; ++j) out.push_back(pair(i, j));
  return out;
}

bool contains(const std::vector<MatchPair> &set, const MatchPair &p) {
  return std::any_of(set.begin(), set.end(), [&](const MatchPair &q) { return q.i == p.i && q.j == p.j; });
}

TEST(PoissonSample, SmallSetReturnedWhole) {
  const std::vector<MatchPair> c{pair(5, 1), pair(9, 2), pair(20, 10), pair(21, 3)};
  const auto s = poisson_sample(c, 10);
  ASSERT_EQ(s.size(), c.size());
  for (const auto &p : c) EXPECT_TRUE(contains(s, p));
}

TEST(PoissonSample, SingleAndEmpty) {
  const auto c = triangle(60, 20);
  const auto s = poisson_sample(c, 1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(contains(c, s[0]));
  EXPECT_EQ(code_of([] { poisson_sample(std::vector<MatchPair>{}, 5); }), ErrorCode::EmptyCandidateSet);
}

double nn_distance_cv(const std::vector<MatchPair> &s) {
  std::vector<double> d;
  for (std::size_t a = 0; a < s.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < s.size(); ++b)
      if (a != b) best = std::min(best, std::hypot(s[a].i - s[b].i, s[a].j - s[b].j));
    d.push_back(best);
  }
  double mean = 0, var = 0;
  for (double v : d) mean += v;
  mean /= d.size();
  for (double v : d) var += (v - mean) * (v - mean);
  return std::sqrt(var / d.size()) / mean;
}

TEST(PoissonSample, SizeBandAndEvenSpread) {
  // 200 frames with gaps up to 18 give about 3500 candidates.
  const auto c = triangle(200, 18);
  ASSERT_NEAR(static_cast<double>(c.size()), 3500, 200);
  const auto s = poisson_sample(c, 100);
  EXPECT_GE(s.size(), 80u);
  EXPECT_LE(s.size(), 125u);
  for (const auto &p : s) EXPECT_TRUE(contains(c, p));

  std::mt19937_64 rng(4);
  double baseline = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    auto shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.resize(s.size());
    baseline += nn_distance_cv(shuffled);
  }
  EXPECT_LT(nn_distance_cv(s), baseline / trials);
}

TEST(OrderPairs, Strategies) {
  const std::vector<MatchPair> p{pair(53, 3), pair(13, 3), pair(6, 3)};
  const auto gaps = [](const std::vector<MatchPair> &v) {
    std::vector<int> g;
    for (const auto &x : v) g.push_back(x.i - x.j);
    return g;
  };
  EXPECT_EQ(gaps(order_pairs(p, {OrderKind::SmallGapsFirst})), (std::vector<int>{3, 10, 50}));
  EXPECT_EQ(gaps(order_pairs(p, {OrderKind::MediumGapsFirst})), (std::vector<int>{10, 3, 50}));

  const auto c = triangle(40, 10);
  const auto r1 = order_pairs(c, {OrderKind::Random, 7});
  const auto r2 = order_pairs(c, {OrderKind::Random, 7});
  const auto r3 = order_pairs(c, {OrderKind::Random, 8});
  ASSERT_EQ(r1.size(), c.size());
  bool same = true, differs = false;
  for (std::size_t k = 0; k < c.size(); ++k) {
    same = same && r1[k].i == r2[k].i && r1[k].j == r2[k].j;
    differs = differs || r1[k].i != r3[k].i || r1[k].j != r3[k].j;
  }
  EXPECT_TRUE(same);
  EXPECT_TRUE(differs);
  for (const auto &x : c) EXPECT_TRUE(contains(r1, x));
}

TEST(OrderPairs, TiesGoToSmallerJ) {
  const std::vector<MatchPair> p{pair(9, 4), pair(6, 1), pair(8, 3)};
  const auto o = order_pairs(p, {OrderKind::SmallGapsFirst});
  EXPECT_EQ(o[0].j, 1);
  EXPECT_EQ(o[1].j, 3);
  EXPECT_EQ(o[2].j, 4);
}

TEST(OrderPairs, Parse) {
  EXPECT_EQ(parse_order("medium_gaps_first"), OrderKind::MediumGapsFirst);
  EXPECT_EQ(parse_order("random"), OrderKind::Random);
  EXPECT_EQ(to_string(OrderKind::SmallGapsFirst), "small_gaps_first");
  EXPECT_EQ(code_of([] { parse_order("largest"); }), ErrorCode::UnknownStrategy);
}

TEST(Improve, EmptyInputLeavesChain) {
  const ScanPair s = scan_pair(5);
  const std::vector<Frame> frames{s.p, s.q};
  const Chain c = chain_from_steps(std::vector<RigidTransform>(1));
  const auto r = improve(c, frames, {}, {}, sparse_uniform_preset());
  EXPECT_EQ(r.chain.totals[1].matrix(), c.totals[1].matrix());
  EXPECT_TRUE(r.stats.pairs.empty());
  EXPECT_EQ(r.stats.corrections, 0);
}

TEST(Improve, LowersBlurOnDriftedChain) {
  const auto poses = simulate_path(std::vector<Vec3>{{15, 20, 0}, {75, 20, 0}}, 60);
  std::vector<Frame> frames;
  for (int f = 0; f < 60; ++f) frames.push_back(scan(site_forest(6), poses[f], {}, 600 + f, f));
  const Chain drifted = perturb_odometry(ground_truth_chain(poses), 0.3 * kDeg, 0.05, 6);

  SelectionConfig sel;
  const auto candidates = candidate_pairs(drifted, frames, sel);
  ASSERT_FALSE(candidates.empty());
  const auto ordered = order_pairs(poisson_sample(candidates, 20), {});
  ImproveConfig cfg;
  cfg.patience = 1000;
  const auto r = improve(drifted, frames, ordered, cfg, sparse_uniform_preset());
  ASSERT_GE(r.stats.beta_trace.size(), 2u);
  EXPECT_LT(r.stats.beta_trace.back(), r.stats.beta_trace.front());
  EXPECT_LT(blur_ratio(build_map(frames, r.chain)), blur_ratio(build_map(frames, drifted)));
  for (const auto &t : r.chain.totals) EXPECT_TRUE(t.is_valid());
  EXPECT_EQ(r.pairs.size(), ordered.size());
}

}  // namespace
}  // namespace treeslam
