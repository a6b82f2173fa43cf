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


#include <random>

#include <Eigen/Geometry>

#include <benchmark/benchmark.h>

#include "treeslam/delaunay.hpp"
#include "treeslam/forest_sim.hpp"
#include "treeslam/icp_global.hpp"
#include "treeslam/icp_local.hpp"
#include "treeslam/map_quality.hpp"
#include "treeslam/pair_selection.hpp"

namespace treeslam {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const std::vector<Vec3> &forest() {
  static const std::vector<Vec3> trees = generate_forest({});
  return trees;
}

struct Pair {
  Frame p, q;
};

/// Two scans from one pose; q is turned by yaw about its centroid.
Pair scans(double yaw, std::uint64_t seed = 1) {
  const RigidTransform pose = RigidTransform::from_yaw(0.0, Vec3(72.5, 20.0, 0.0));
  Pair s{scan(forest(), pose, {}, 2 * seed + 1, 0), scan(forest(), pose, {}, 2 * seed + 2, 1)};
  Vec3 c = Vec3::Zero();
  for (const auto &x : s.q.points) c += x;
  c /= static_cast<double>(s.q.points.size());
  s.q = transform_cloud(s.q, RigidTransform::rotation_about(Vec3::UnitZ(), yaw, c));
  return s;
}

void BM_Pow(benchmark::State &state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  const RigidTransform t(Eigen::AngleAxisd(1.2, Vec3(u(rng), u(rng), u(rng)).normalized()).toRotationMatrix(),
                         Vec3(u(rng), u(rng), u(rng)));
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pow(t, x));
    x = x < 0.9 ? x + 0.1 : 0.1;
  }
}
BENCHMARK(BM_Pow);

void BM_MatchError(benchmark::State &state) {
  const Pair s = scans(0.0);
  const IndexedCloud p(s.p.points);
  for (auto _ : state) benchmark::DoNotOptimize(match_error(p, s.q.points, 0.6));
  state.counters["points"] = static_cast<double>(s.q.points.size());
}
BENCHMARK(BM_MatchError);

void BM_Delaunay(benchmark::State &state) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto &t : forest()) pts.push_back(t.head<2>());
  pts.resize(std::min<std::size_t>(pts.size(), state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(delaunay(pts));
  state.SetComplexityN(static_cast<std::int64_t>(pts.size()));
}
BENCHMARK(BM_Delaunay)->Arg(130)->Arg(900)->Complexity();

void BM_IcpMatch(benchmark::State &state) {
  const Pair s = scans(2.0 * kDeg);
  for (auto _ : state) benchmark::DoNotOptimize(icp_match(s.p, s.q, RigidTransform::identity()));
}
BENCHMARK(BM_IcpMatch)->Unit(benchmark::kMicrosecond);

void BM_GoIcp(benchmark::State &state) {
  const Pair s = scans(static_cast<double>(state.range(0)) * kDeg);
  BnbStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(go_icp(s.p, s.q, sparse_uniform_preset(), 0.6,
                                                       RigidTransform::identity(), &stats));
  state.counters["nodes"] = static_cast<double>(stats.nodes);
  state.counters["icp_calls"] = static_cast<double>(stats.icp_calls);
}
BENCHMARK(BM_GoIcp)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Improve(benchmark::State &state) {
  const int n = 60;
  const auto poses = simulate_path(std::vector<Vec3>{{15, 20, 0}, {63, 20, 0}}, n);
  std::vector<Frame> frames;
  for (int f = 0; f < n; ++f) frames.push_back(scan(forest(), poses[f], {}, 100 + f, f));
  const Chain drifted = perturb_odometry(ground_truth_chain(poses), 0.3 * kDeg, 0.05, 1);
  const auto ordered = order_pairs(poisson_sample(candidate_pairs(drifted, frames, {}), 10), {});
  for (auto _ : state)
    benchmark::DoNotOptimize(improve(drifted, frames, ordered, {}, sparse_uniform_preset()));
}
BENCHMARK(BM_Improve)->Unit(benchmark::kMillisecond);

void BM_BlurRatio(benchmark::State &state) {
  const auto poses = simulate_path(std::vector<Vec3>{{15, 20, 0}, {165, 20, 0}}, 200);
  std::vector<Frame> frames;
  for (int f = 0; f < 200; ++f) frames.push_back(scan(forest(), poses[f], {}, f, f));
  const FusedMap m = build_map(frames, ground_truth_chain(poses));
  for (auto _ : state) benchmark::DoNotOptimize(blur_ratio(m));
  state.counters["points"] = static_cast<double>(m.points.size());
}
BENCHMARK(BM_BlurRatio)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace treeslam

BENCHMARK_MAIN();
