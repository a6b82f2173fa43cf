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
 * \file map_quality.hpp
 * \brief Fused landmark map and its sharpness measures: blur ratio, cluster
 * RMSE and box-counting dimension.
 *
 * Grids are anchored at the bounding-box minimum of the map; a point x falls
 * in cell floor((x - min) / eps).
 */
#pragma once

#include <span>
#include <vector>

#include "treeslam/point_cloud.hpp"
#include "treeslam/slam_chain.hpp"

namespace treeslam {

struct FusedMap {
  std::vector<Vec3> points;     // frame-0 coordinates
  std::vector<int> frame_index; // originating frame of each point
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

struct Cluster {
  std::vector<int> members;  // indices into FusedMap::points
  Vec3 center = Vec3::Zero();
  double rmse = 0.0;
};

struct CellCount {
  double x = 0.0;  // lower corner, meters
  double y = 0.0;
  int count = 0;
};

/// Union of the frames placed by the chain totals. Throws LengthMismatch.
FusedMap build_map(std::span<const Frame> frames, const Chain &c);
FusedMap build_map(std::span<const Frame> frames, std::span<const RigidTransform> totals);

/// Number of occupied eps-cells (horizontal, or 3D when volumetric).
std::size_t occupied_cells(const FusedMap &m, double eps, bool volumetric = false);

/// Occupied horizontal eps-cells with their point counts, sorted by (x, y).
std::vector<CellCount> cell_counts(const FusedMap &m, double eps);

/// β = N(ε₁) ε₁^k / (N(ε₂) ε₂^k) with k = 2, or 3 when volumetric.
/// Throws EmptyMap and InvalidConfig when ε₁ ≥ ε₂.
double blur_ratio(const FusedMap &m, double eps1 = 0.2, double eps2 = 10.0,
                  bool volumetric = false);

/// Connected components of points closer than 2 r_α horizontally; components
/// with fewer than min_points are dropped. Centres and RMSE are 3D.
std::vector<Cluster> cluster_map(const FusedMap &m, double r_alpha = 0.5, int min_points = 15);

/// Fraction of map points not in any returned cluster.
double discarded_fraction(const FusedMap &m, std::span<const Cluster> clusters);

/// Mean of the per-cluster RMSE. Throws NoClusters.
double cluster_rmse(std::span<const Cluster> clusters);

struct DimensionFit {
  double dimension = 0.0;
  double r_squared = 0.0;
};

/// Least-squares slope of log N(ε) against log(1/ε) on the horizontal
/// projection. Needs ≥ 3 scales spanning a decade; throws DegenerateFit.
DimensionFit box_dimension(const FusedMap &m, std::span<const double> scales);

}  // namespace treeslam
