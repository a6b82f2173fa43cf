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
 * \file slam_chain.hpp
 * \brief Odometry chain of total transforms, relative transforms between
 * frames, and propagation of an improved long-span match over the frames it
 * spans.
 *
 * Frame indices are zero-based positions in the sequence: totals[l] maps
 * frame l into the coordinates of frame 0.
 */
#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeslam/icp_local.hpp"
#include "treeslam/point_cloud.hpp"
#include "treeslam/se3.hpp"

namespace treeslam {

struct FusedMap;
struct Cluster;

enum class PowerRuleKind { Index, PathLength, ErrorCumulative, Se3Metric, SkewProjection };

/// How the interpolation exponents u_l are spread over a corrected span.
struct PowerRule {
  PowerRuleKind kind = PowerRuleKind::Index;
  double a = 1.0;  // rotation weight of the SE(3) metric, m²/rad²
  double b = 1.0;  // translation weight of the SE(3) metric
};

std::string to_string(const PowerRule &rule);
/// Accepts index, path_length, error_cumulative, se3_metric, skew_projection.
/// Throws InvalidConfig.
PowerRuleKind parse_power_rule(std::string_view name);

struct CorrectionRecord {
  int i = 0;
  int j = 0;
  RigidTransform delta;  // t_ij⁻¹ t_ij_new
  PowerRule rule;
  std::vector<double> u;  // exponents for frames j..i
  bool near_pi = false;   // delta rotation within 1e-3 of pi
};

struct Chain {
  std::vector<RigidTransform> totals;  // totals[0] = I
  std::vector<double> step_errors;     // step_errors[l]: match error of (l, l-1); [0] = 0
  std::vector<CorrectionRecord> log;

  int size() const { return static_cast<int>(totals.size()); }
};

/// Totals from stepwise matches steps[l-1] = t_{l,l-1}, l = 1..n-1.
Chain chain_from_steps(std::span<const RigidTransform> steps,
                       std::span<const double> step_errors = {});

/// Sequential local ICP of frame l+1 onto frame l from the identity.
/// Throws MatchFailed naming the frame index where a match degenerates.
Chain run_initial_slam(std::span<const Frame> frames, double outlier_ratio,
                       const IcpOptions &options = {}, int threads = 1);

/// t_ij = t_j⁻¹ t_i. Throws IndexOutOfRange.
RigidTransform relative_transform(const Chain &c, int i, int j);

/// Translations of the totals, in order.
std::vector<Vec3> path(const Chain &c);

/// √(a θ² + b ‖p‖²).
double se3_metric(const RigidTransform &t, double a, double b);

/// Exponents u_l for l = j..i, with u_j = 0, u_i = 1, clamped to [0, 1] and
/// nondecreasing. Throws EmptySpan when i == j, IndexOutOfRange otherwise.
std::vector<double> power_coefficients(const Chain &c, int i, int j, const PowerRule &rule);

/// Replaces the span j..i so that frame i lands on t_j t_ij_new, spreading
/// Δt = t_ij⁻¹ t_ij_new by pow(Δt, u_l); frames after i follow rigidly.
/// Throws IndexOutOfRange, EmptySpan, NonFiniteTransform.
Chain apply_correction(const Chain &c, int i, int j, const RigidTransform &t_ij_new,
                       const PowerRule &rule = {});

/// Per-frame share of the pooled mean squared distance of clustered points to
/// their cluster centres; the weights sum to that pooled mean square.
std::vector<double> frame_weights(const FusedMap &map, std::span<const Cluster> clusters,
                                  int n_frames);

/// Indices of the k largest weights, ties to the lower index.
std::vector<int> remove_worst_frames(std::span<const double> weights, int k);

}  // namespace treeslam
