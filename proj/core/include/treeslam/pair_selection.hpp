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
 * \file pair_selection.hpp
 * \brief Extra match pairs: candidate screening by overlap and error,
 * grid-rounded Poisson-disk subsampling in the (i, j) index plane,
 * application order, and the improvement loop.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "treeslam/icp_global.hpp"
#include "treeslam/icp_local.hpp"
#include "treeslam/point_cloud.hpp"
#include "treeslam/slam_chain.hpp"

namespace treeslam {

enum class MatchStatus { Candidate, Selected, Improved, Rejected };

std::string_view to_string(MatchStatus s);

struct MatchPair {
  int i = 0;  // later frame
  int j = 0;  // earlier frame, j < i
  double lambda = 0.0;
  double error = 0.0;  // meters
  MatchStatus status = MatchStatus::Candidate;
};

struct SelectionConfig {
  int max_gap = 1000;
  double lambda_min = 0.2;
  int target_size = 40;          // m
  double error_intercept = 0.3;  // meters
  double error_slope = 0.5;      // meters per unit overlap
  double outlier_ratio = 0.6;
  /// Chains longer than this are screened on a seeded random subset of pairs.
  int exhaustive_limit = 2000;
  std::size_t sample_budget = 2000000;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// e < intercept + λ · slope.
bool passes_gate(double error, double lambda, const SelectionConfig &cfg);

/// Pairs with 0 < i - j ≤ max_gap, λ > λ_min and an error under the gate,
/// with λ from the chain poses and e from the clouds placed by the chain.
std::vector<MatchPair> candidate_pairs(const Chain &c, std::span<const Frame> frames,
                                       const SelectionConfig &cfg);

/// {round(a / ε) ε}, as a sorted set.
std::vector<Eigen::Vector2d> grid_round(std::span<const Eigen::Vector2d> points, double eps);

/// About m candidates spread evenly over the (i, j) plane; every result is a
/// member of the input. Throws EmptyCandidateSet.
std::vector<MatchPair> poisson_sample(std::span<const MatchPair> candidates, int m);

enum class OrderKind { SmallGapsFirst, MediumGapsFirst, Random };

struct OrderStrategy {
  OrderKind kind = OrderKind::MediumGapsFirst;
  std::uint64_t seed = 1;
};

/// small_gaps_first, medium_gaps_first or random. Throws UnknownStrategy.
OrderKind parse_order(std::string_view name);
std::string_view to_string(OrderKind kind);

/// Permutation of the pairs; ties go to the smaller j, then the smaller i.
std::vector<MatchPair> order_pairs(std::span<const MatchPair> pairs, const OrderStrategy &strategy);

struct ImproveConfig {
  SelectionConfig selection;
  double lambda0 = 0.4;  // pairs below this overlap are never applied
  int patience = 10;     // stop after this many pairs without a better β
  double eps1 = 0.2;     // blur ratio scales, meters
  double eps2 = 10.0;
  IcpOptions icp;
};

struct PairLog {
  int i = 0;
  int j = 0;
  std::string method;  // "icp" or "go_icp"
  double error_before = 0.0;
  double error_after = 0.0;
  double lambda = 0.0;
  bool applied = false;
  double beta = 0.0;    // after this pair
  double seconds = 0.0;
};

struct ImproveStats {
  std::vector<PairLog> pairs;
  std::vector<double> beta_trace;  // initial value first
  int icp_calls = 0;
  int go_icp_calls = 0;
  int corrections = 0;
  double icp_seconds = 0.0;
  double go_icp_seconds = 0.0;
  bool stopped_by_patience = false;
};

struct ImproveResult {
  Chain chain;
  ImproveStats stats;
  std::vector<MatchPair> pairs;  // input pairs with final status
};

/// Refines each pair in order with local ICP from the chain's relative
/// transform, falls back to go_icp when the gate fails, and applies passing
/// corrections. Pair failures are logged, not thrown.
ImproveResult improve(const Chain &c, std::span<const Frame> frames,
                      std::span<const MatchPair> ordered, const ImproveConfig &cfg,
                      const BnbConfig &bnb, const PowerRule &rule = {});

}  // namespace treeslam
