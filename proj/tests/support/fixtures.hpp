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


// Synthetic forest scenes shared by the tests.
#pragma once

#include <map>
#include <vector>

#include "oracles.hpp"
#include "treeslam/forest_sim.hpp"

namespace treeslam::testing {

/// Site-like forest (180 x 40 m, L0 3.5 m) for a seed.
inline const std::vector<Vec3> &site_forest(std::uint64_t seed) {
  static std::map<std::uint64_t, std::vector<Vec3>> cache;
  auto it = cache.find(seed);
  if (it == cache.end()) {
    ForestSpec spec;
    spec.seed = seed;
    it = cache.emplace(seed, generate_forest(spec)).first;
  }
  return it->second;
}

/// Two independent scans from one pose in the middle of the strip.
struct ScanPair {
  Frame p, q;
};

inline ScanPair scan_pair(std::uint64_t seed, double x = 90.0, double noise = 0.07) {
  const auto &trees = site_forest(seed);
  ScanSpec spec;
  spec.noise = noise;
  const RigidTransform pose = RigidTransform::from_yaw(0.0, Vec3(x - 17.5, 20.0, 0.0));
  ScanPair s;
  s.p = scan(trees, pose, spec, 2 * seed + 1, 0);
  s.q = scan(trees, pose, spec, 2 * seed + 2, 1);
  return s;
}

inline Vec3 centroid(const std::vector<Vec3> &pts) {
  Vec3 c = Vec3::Zero();
  for (const auto &p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

}  // namespace treeslam::testing
