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
 * \file point_cloud.hpp
 * \brief Sparse landmark frames, trimmed nearest-neighbour match error,
 * natural-neighbour spacing and view-cone overlap.
 */
#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "treeslam/kdtree.hpp"
#include "treeslam/se3.hpp"

namespace treeslam {

/// Horizontal view sector with its apex at the scanner origin, centred on +x.
struct ViewCone {
  double half_angle = std::numbers::pi / 3.0;  // radians
  double range = 35.0;                         // meters
};

struct Frame {
  int id = 0;
  std::vector<Vec3> points;  // scanner coordinates, meters
  ViewCone cone;
};

struct ConePose {
  RigidTransform pose;  // frame -> world
  ViewCone cone;
};

struct Correspondence {
  int query = -1;   // index into the moving cloud q
  int target = -1;  // index of its nearest neighbour in p
  double distance = 0.0;
};

struct MatchError {
  double error = 0.0;  // RMS of the retained distances, meters
  std::vector<Correspondence> pairs;
};

/// A cloud together with its nearest-neighbour index.
class IndexedCloud {
 public:
  IndexedCloud() = default;
  explicit IndexedCloud(std::vector<Vec3> points) : tree_(std::move(points)) {}

  const std::vector<Vec3> &points() const { return tree_.points(); }
  std::size_t size() const { return tree_.size(); }
  bool empty() const { return tree_.empty(); }
  KdTree3::Neighbor nearest(const Vec3 &q) const { return tree_.nearest(q); }

 private:
  KdTree3 tree_;
};

std::vector<Vec3> transform_points(std::span<const Vec3> points, const RigidTransform &t);
Frame transform_cloud(const Frame &f, const RigidTransform &t);

/// Number of correspondences kept by the trimmed objective: ceil((1-γ) n).
std::size_t trimmed_count(std::size_t n, double outlier_ratio);

/// Each point of q is matched to its nearest point of p; the error is the RMS
/// of the smallest ceil((1-γ)|q|) distances. Throws EmptyCloud, InvalidRatio.
MatchError match_error(const Frame &p, const Frame &q, double outlier_ratio);
MatchError match_error(const IndexedCloud &p, std::span<const Vec3> q, double outlier_ratio);

/// Mean over points of the mean distance to their Delaunay neighbours in the
/// horizontal projection. Duplicates (1e-6 m) are merged first.
/// Throws DegenerateCloud.
double mean_neighbor_distance(std::span<const Vec3> points);
double mean_neighbor_distance(const Frame &f);

/// Closed polygon approximating the horizontal footprint of a view cone,
/// split into convex pieces.
std::vector<std::vector<Eigen::Vector2d>> cone_footprint(const ConePose &c);

/// Area of the intersection of two horizontal sectors divided by the smaller
/// sector area, in [0, 1].
double overlap_ratio(const ConePose &a, const ConePose &b);

/// True when the horizontal projection of x (world coordinates) lies inside
/// the cone placed at pose.
bool inside_cone(const ConePose &c, const Vec3 &x);

}  // namespace treeslam
