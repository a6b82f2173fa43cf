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

#include "treeslam/slam_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treeslam/error.hpp"
#include "treeslam/map_quality.hpp"
#include "treeslam/parallel.hpp"

namespace treeslam {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kSkewTolerance = 1e-4;

void check_index(const Chain &c, int k) {
  if (k < 0 || k >= c.size())
    throw Error(ErrorCode::IndexOutOfRange,
                "frame index " + std::to_string(k) + " outside chain of " +
                    std::to_string(c.size()));
}

std::vector<double> index_rule(int i, int j) {
  std::vector<double> u(i - j + 1);
  for (int l = j; l <= i; ++l) u[l - j] = static_cast<double>(l - j) / (i - j);
  return u;
}

// Normalises cumulative sums; falls back to the index rule on a zero total.
std::vector<double> normalised_cumulative(const std::vector<double> &increments, int i, int j) {
  std::vector<double> u(increments.size() + 1, 0.0);
  std::partial_sum(increments.begin(), increments.end(), u.begin() + 1);
  const double total = u.back();
  if (!(total > 0.0) || !std::isfinite(total)) return index_rule(i, j);
  for (auto &x : u) x /= total;
  return u;
}

double golden_section(const auto &f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  double best = 0.5 * (a + b), fbest = f(best);
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe < fbest) best = edge, fbest = fe;
  }
  return best;
}

}  // namespace

std::string to_string(const PowerRule &rule) {
  switch (rule.kind) {
    case PowerRuleKind::Index: return "index";
    case PowerRuleKind::PathLength: return "path_length";
    case PowerRuleKind::ErrorCumulative: return "error_cumulative";
    case PowerRuleKind::Se3Metric: return "se3_metric";
    case PowerRuleKind::SkewProjection: return "skew_projection";
  }
  return "index";
}

PowerRuleKind parse_power_rule(std::string_view name) {
  if (name == "index") return PowerRuleKind::Index;
  if (name == "path_length") return PowerRuleKind::PathLength;
  if (name == "error_cumulative") return PowerRuleKind::ErrorCumulative;
  if (name == "se3_metric") return PowerRuleKind::Se3Metric;
  if (name == "skew_projection") return PowerRuleKind::SkewProjection;
  throw Error(ErrorCode::InvalidConfig, "unknown power rule '" + std::string(name) + "'");
}

Chain chain_from_steps(std::span<const RigidTransform> steps, std::span<const double> step_errors) {
  Chain c;
  c.totals.reserve(steps.size() + 1);
  c.totals.push_back(RigidTransform::identity());
  for (const auto &s : steps) c.totals.push_back(c.totals.back() * s);
  c.step_errors.assign(c.totals.size(), 0.0);
  for (std::size_t k = 0; k < step_errors.size() && k + 1 < c.step_errors.size(); ++k)
    c.step_errors[k + 1] = step_errors[k];
  return c;
}

Chain run_initial_slam(std::span<const Frame> frames, double outlier_ratio,
                       const IcpOptions &options, int threads) {
  if (frames.size() < 2) throw Error(ErrorCode::MatchFailed, "need at least 2 frames");
  IcpOptions opts = options;
  opts.outlier_ratio = outlier_ratio;

  const std::size_t n_steps = frames.size() - 1;
  std::vector<RigidTransform> steps(n_steps);
  std::vector<double> errors(n_steps, 0.0);
  std::vector<int> failed(n_steps, 0);
  parallel_for(n_steps, threads, [&](std::size_t k) {
    try {
      const IcpResult r = icp_match(frames[k], frames[k + 1], RigidTransform::identity(), opts);
      steps[k] = r.transform;
      errors[k] = r.error;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::DegenerateCorrespondences && e.code() != ErrorCode::EmptyCloud)
        throw;
      failed[k] = 1;
    }
  });
  for (std::size_t k = 0; k < n_steps; ++k)
    if (failed[k])
      throw Error(ErrorCode::MatchFailed,
                  "matching frame " + std::to_string(k + 1) + " (id " +
                      std::to_string(frames[k + 1].id) + ") onto its predecessor failed");
  return chain_from_steps(steps, errors);
}

RigidTransform relative_transform(const Chain &c, int i, int j) {
  check_index(c, i);
  check_index(c, j);
  if (i == j) return RigidTransform::identity();
  return c.totals[j].inverse() * c.totals[i];
}

std::vector<Vec3> path(const Chain &c) {
  std::vector<Vec3> out;
  out.reserve(c.totals.size());
  for (const auto &t : c.totals) out.push_back(t.translation());
  return out;
}

double se3_metric(const RigidTransform &t, double a, double b) {
  const double theta = t.angle();
  return std::sqrt(a * theta * theta + b * t.translation().squaredNorm());
}

std::vector<double> power_coefficients(const Chain &c, int i, int j, const PowerRule &rule) {
  check_index(c, i);
  check_index(c, j);
  if (i == j) throw Error(ErrorCode::EmptySpan, "correction span is empty");
  if (i < j) throw Error(ErrorCode::IndexOutOfRange, "power coefficients need j < i");

  std::vector<double> u;
  switch (rule.kind) {
    case PowerRuleKind::Index:
      u = index_rule(i, j);
      break;
    case PowerRuleKind::PathLength: {
      std::vector<double> steps;
      for (int k = j + 1; k <= i; ++k)
        steps.push_back((c.totals[k].translation() - c.totals[k - 1].translation()).norm());
      u = normalised_cumulative(steps, i, j);
      break;
    }
    case PowerRuleKind::ErrorCumulative: {
      std::vector<double> steps;
      for (int k = j + 1; k <= i; ++k)
        steps.push_back(k < static_cast<int>(c.step_errors.size()) ? c.step_errors[k] : 0.0);
      u = normalised_cumulative(steps, i, j);
      break;
    }
    case PowerRuleKind::Se3Metric: {
      const double full = se3_metric(relative_transform(c, i, j), rule.a, rule.b);
      if (!(full > 0.0)) {
        u = index_rule(i, j);
        break;
      }
      for (int l = j; l <= i; ++l)
        u.push_back(se3_metric(relative_transform(c, l, j), rule.a, rule.b) / full);
      break;
    }
    case PowerRuleKind::SkewProjection: {
      const ScrewPower screw(relative_transform(c, i, j));
      for (int l = j; l <= i; ++l) {
        const RigidTransform t_lj = relative_transform(c, l, j);
        u.push_back(golden_section(
            [&](double x) { return se3_metric(screw(x).inverse() * t_lj, rule.a, rule.b); }, 0.0,
            1.0, kSkewTolerance));
      }
      break;
    }
  }

  double running = 0.0;
  for (auto &x : u) {
    x = std::clamp(x, 0.0, 1.0);
    running = std::max(running, x);
    x = running;
  }
  u.front() = 0.0;
  u.back() = 1.0;
  return u;
}

Chain apply_correction(const Chain &c, int i, int j, const RigidTransform &t_ij_new,
                       const PowerRule &rule) {
  check_index(c, i);
  check_index(c, j);
  if (i == j) throw Error(ErrorCode::EmptySpan, "correction span is empty");
  if (i < j) throw Error(ErrorCode::IndexOutOfRange, "corrections need j < i");
  if (!t_ij_new.is_finite()) throw Error(ErrorCode::NonFiniteTransform, "new match is not finite");

  const RigidTransform delta = relative_transform(c, i, j).inverse() * t_ij_new;
  const std::vector<double> u = power_coefficients(c, i, j, rule);
  const ScrewPower screw(delta);

  Chain out = c;
  const RigidTransform &t_j = c.totals[j];
  const RigidTransform t_j_inv = t_j.inverse();
  for (int l = j + 1; l <= i; ++l) {
    const double ul = u[l - j];
    const RigidTransform step = ul == 1.0 ? delta : screw(ul);
    out.totals[l] = (t_j * ((t_j_inv * c.totals[l]) * step)).orthonormalized();
  }
  const RigidTransform t_i_inv = c.totals[i].inverse();
  for (int k = i + 1; k < c.size(); ++k)
    out.totals[k] = (out.totals[i] * (t_i_inv * c.totals[k])).orthonormalized();

  for (int k = j; k < c.size(); ++k)
    if (!out.totals[k].is_finite())
      throw Error(ErrorCode::NonFiniteTransform, "correction produced a non-finite pose");

  out.log.push_back({i, j, delta, rule, u, screw.near_pi()});
  return out;
}

std::vector<double> frame_weights(const FusedMap &map, std::span<const Cluster> clusters,
                                  int n_frames) {
  std::vector<double> w(std::max(n_frames, 0), 0.0);
  std::size_t total = 0;
  for (const auto &cl : clusters) total += cl.members.size();
  if (total == 0) return w;
  for (const auto &cl : clusters)
    for (int idx : cl.members) {
      const int f = map.frame_index[idx];
      if (f >= 0 && f < n_frames) w[f] += (map.points[idx] - cl.center).squaredNorm();
    }
  for (auto &x : w) x /= static_cast<double>(total);
  return w;
}

std::vector<int> remove_worst_frames(std::span<const double> weights, int k) {
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] > weights[b]; });
  order.resize(std::clamp<std::size_t>(std::max(k, 0), 0, order.size()));
  return order;
}

}  // namespace treeslam
