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
 * \file icp_local.hpp
 * \brief Trimmed point-to-point ICP and the ellipse test that says when it
 * can be trusted to converge.
 */
#pragma once

#include <span>
#include <vector>

#include "treeslam/point_cloud.hpp"
#include "treeslam/se3.hpp"

namespace treeslam {

struct IcpOptions {
  double outlier_ratio = 0.6;
  int max_iterations = 60;
  double tolerance = 1e-4;  // meters of error improvement
};

struct IcpResult {
  RigidTransform transform;  // maps q into the coordinates of p
  double error = 0.0;        // trimmed RMS, meters
  int iterations = 0;        // rigid fits performed
  bool converged = false;
  std::vector<double> error_trace;  // error before each fit and at the end
};

/// Least-squares rigid transform taking src[k] onto dst[k] (Kabsch with a
/// reflection guard). Throws DegenerateCorrespondences for fewer than 3 pairs.
RigidTransform rigid_fit(std::span<const Vec3> src, std::span<const Vec3> dst);

/// Trimmed ICP of q onto p starting from init. Throws EmptyCloud,
/// InvalidRatio, DegenerateCorrespondences.
IcpResult icp_match(const Frame &p, const Frame &q, const RigidTransform &init,
                    const IcpOptions &options = {});
IcpResult icp_match(const IndexedCloud &p, std::span<const Vec3> q,
                    const RigidTransform &init, const IcpOptions &options = {});

struct ConvergenceLimits {
  double delta0 = 1.75;      // meters
  double theta0 = 0.079057;  // radians
  double phi0 = 0.143117;    // radians (8.2 degrees)
};

/// (δ/δ₀)² + (θ/θ₀)² + (φ/φ₀)² ≤ 1.
bool converges_test(double delta, double theta, double phi, const ConvergenceLimits &lim);

}  // namespace treeslam
