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

/**
 * \file forest_sim.hpp
 * \brief Synthetic forests, vehicle paths, view-cone scans with registration
 * noise and dropout, and odometry drift injection.
 *
 * All generators are pure functions of their inputs and seed.
 */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treeslam/point_cloud.hpp"
#include "treeslam/se3.hpp"
#include "treeslam/slam_chain.hpp"

namespace treeslam {

struct ForestSpec {
  double width = 180.0;  // x extent, meters; the area starts at the origin
  double depth = 40.0;   // y extent, meters
  double target_mean_distance = 3.5;  // L₀, meters
  double registration_height = 1.3;   // meters above ground
  double height_jitter = 0.3;         // uniform ± meters
  std::uint64_t seed = 1;
};

struct ScanSpec {
  ViewCone cone{std::numbers::pi / 3.0, 35.0};  // 120° total
  double noise = 0.07;    // per-axis standard deviation, meters
  double dropout = 0.15;  // probability of missing a visible tree
};

/// Poisson-disk tree positions whose mean natural-neighbour distance is
/// within 10% of the target. Throws AreaTooSmall when fewer than 10 trees fit.
std::vector<Vec3> generate_forest(const ForestSpec &spec);

struct PathSpec {
  double tilt_jitter = 0.0;  // roll/pitch standard deviation, radians
  double height = 0.0;       // scanner origin height, meters
  std::uint64_t seed = 1;
};

/// n_frames poses evenly spaced by arc length along the polyline, heading
/// tangent to it. A closed polyline ends on its starting pose.
std::vector<RigidTransform> simulate_path(std::span<const Vec3> waypoints, int n_frames,
                                          const PathSpec &spec = {});

/// Trees within range and inside the cone of the pose, in scanner
/// coordinates, with noise and dropout applied.
Frame scan(std::span<const Vec3> trees, const RigidTransform &pose, const ScanSpec &spec,
           std::uint64_t seed, int id = 0);

/// Chain whose totals are the ground-truth scanner poses relative to the
/// first pose.
Chain ground_truth_chain(std::span<const RigidTransform> poses);

/// Every stepwise transform is followed by a yaw of step_rot_bias and a
/// horizontal shift with N(0, step_trans_noise²) components.
Chain perturb_odometry(const Chain &chain, double step_rot_bias, double step_trans_noise,
                       std::uint64_t seed);

}  // namespace treeslam
