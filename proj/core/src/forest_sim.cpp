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

#include "treeslam/forest_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "treeslam/error.hpp"

namespace treeslam {

namespace {

// Bridson sampling of the rectangle [0, w] x [0, h] with spacing r.
std::vector<Eigen::Vector2d> poisson_disk(double w, double h, double r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cell = r / std::sqrt(2.0);
  const int gw = std::max(1, static_cast<int>(std::ceil(w / cell)));
  const int gh = std::max(1, static_cast<int>(std::ceil(h / cell)));
  std::vector<int> grid(static_cast<std::size_t>(gw) * gh, -1);
  std::vector<Eigen::Vector2d> pts;
  std::vector<int> active;

  const auto cell_of = [&](const Eigen::Vector2d &p) {
    return std::pair{std::min(gw - 1, static_cast<int>(p.x() / cell)),
                     std::min(gh - 1, static_cast<int>(p.y() / cell))};
  };
  const auto add = [&](const Eigen::Vector2d &p) {
    const auto [cx, cy] = cell_of(p);
    grid[static_cast<std::size_t>(cy) * gw + cx] = static_cast<int>(pts.size());
    active.push_back(static_cast<int>(pts.size()));
    pts.push_back(p);
  };
  const auto fits = [&](const Eigen::Vector2d &p) {
    if (p.x() < 0.0 || p.x() > w || p.y() < 0.0 || p.y() > h) return false;
    const auto [cx, cy] = cell_of(p);
    for (int y = std::max(0, cy - 2); y <= std::min(gh - 1, cy + 2); ++y)
      for (int x = std::max(0, cx - 2); x <= std::min(gw - 1, cx + 2); ++x) {
        const int k = grid[static_cast<std::size_t>(y) * gw + x];
        if (k >= 0 && (pts[k] - p).squaredNorm() < r * r) return false;
      }
    return true;
  };

  add({unit(rng) * w, unit(rng) * h});
  constexpr int kAttempts = 30;
  while (!active.empty()) {
    const std::size_t slot = static_cast<std::size_t>(unit(rng) * active.size()) % active.size();
    const Eigen::Vector2d base = pts[active[slot]];
    bool placed = false;
    for (int a = 0; a < kAttempts; ++a) {
      const double angle = 2.0 * std::numbers::pi * unit(rng);
      const double radius = r * (1.0 + unit(rng));
      const Eigen::Vector2d cand = base + radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      if (fits(cand)) {
        add(cand);
        placed = true;
        break;
      }
    }
    if (!placed) {
      active[slot] = active.back();
      active.pop_back();
    }
  }
  return pts;
}

}  // namespace

std::vector<Vec3> generate_forest(const ForestSpec &spec) {
  if (!(spec.width > 0.0 && spec.depth > 0.0 && spec.target_mean_distance > 0.0))
    throw Error(ErrorCode::InvalidConfig, "forest area and target spacing must be positive");
  const double target = spec.target_mean_distance;
  // Rough count before sampling: a hexagonal packing at the target spacing.
  if (spec.width * spec.depth / (0.866 * target * target) < 10.0)
    throw Error(ErrorCode::AreaTooSmall, "area holds fewer than 10 trees");

  std::vector<Eigen::Vector2d> best;
  double best_gap = std::numeric_limits<double>::infinity();
  double spacing = 0.75 * target;
  for (int round = 0; round < 12; ++round) {
    auto pts = poisson_disk(spec.width, spec.depth, spacing, spec.seed);
    if (pts.size() < 10) {
      spacing *= 0.8;
      continue;
    }
    std::vector<Vec3> flat;
    for (const auto &p : pts) flat.emplace_back(p.x(), p.y(), 0.0);
    const double measured = mean_neighbor_distance(flat);
    const double gap = std::abs(measured - target) / target;
    if (gap < best_gap) {
      best_gap = gap;
      best = std::move(pts);
    }
    if (gap < 0.01) break;
    spacing *= target / measured;
  }
  if (best.size() < 10) throw Error(ErrorCode::AreaTooSmall, "area holds fewer than 10 trees");

  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> jitter(-spec.height_jitter, spec.height_jitter);
  std::vector<Vec3> trees;
  trees.reserve(best.size());
  for (const auto &p : best)
    trees.emplace_back(p.x(), p.y(),
                       spec.registration_height + (spec.height_jitter > 0.0 ? jitter(rng) : 0.0));
  return trees;
}

std::vector<RigidTransform> simulate_path(std::span<const Vec3> waypoints, int n_frames,
                                          const PathSpec &spec) {
  if (waypoints.size() < 2) throw Error(ErrorCode::InvalidConfig, "a path needs 2 waypoints");
  if (n_frames < 1) return {};
  std::vector<double> cum{0.0};
  for (std::size_t k = 1; k < waypoints.size(); ++k)
    cum.push_back(cum.back() + (waypoints[k] - waypoints[k - 1]).head<2>().norm());
  const double total = cum.back();
  const bool closed = (waypoints.front() - waypoints.back()).norm() < 1e-9;

  const auto heading_of = [&](std::size_t seg) {
    const Vec3 d = waypoints[seg + 1] - waypoints[seg];
    return std::atan2(d.y(), d.x());
  };

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> tilt(0.0, 1.0);

  std::vector<RigidTransform> poses;
  poses.reserve(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    const double s = n_frames == 1 ? 0.0 : total * f / (n_frames - 1);
    std::size_t seg = 0;
    while (seg + 2 < waypoints.size() && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double a = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    Vec3 pos = waypoints[seg] + a * (waypoints[seg + 1] - waypoints[seg]);
    double yaw = heading_of(seg);
    if (closed && f == n_frames - 1 && n_frames > 1) {
      pos = waypoints.front();
      yaw = heading_of(0);
    }
    pos.z() += spec.height;
    Mat3 r = RigidTransform::from_yaw(yaw).rotation();
    if (spec.tilt_jitter > 0.0) {
      const double roll = spec.tilt_jitter * tilt(rng);
      const double pitch = spec.tilt_jitter * tilt(rng);
      r = r * rodrigues(Vec3::UnitY(), pitch) * rodrigues(Vec3::UnitX(), roll);
    }
    poses.emplace_back(r, pos);
  }
  return poses;
}

Frame scan(std::span<const Vec3> trees, const RigidTransform &pose, const ScanSpec &spec,
           std::uint64_t seed, int id) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const RigidTransform to_scanner = pose.inverse();

  Frame f;
  f.id = id;
  f.cone = spec.cone;
  for (const auto &t : trees) {
    const Vec3 local = to_scanner.apply(t);
    if (local.norm() > spec.cone.range) continue;
    if (local.head<2>().squaredNorm() > 0.0 &&
        std::abs(std::atan2(local.y(), local.x())) > spec.cone.half_angle)
      continue;
    // Draw all variates for every visible tree so one decision does not
    // shift the stream of the next.
    const double keep = unit(rng);
    const Vec3 noise(gauss(rng), gauss(rng), gauss(rng));
    if (keep < spec.dropout) continue;
    f.points.push_back(local + spec.noise * noise);
  }
  return f;
}

Chain ground_truth_chain(std::span<const RigidTransform> poses) {
  Chain c;
  if (poses.empty()) return c;
  const RigidTransform first_inv = poses.front().inverse();
  for (const auto &p : poses) c.totals.push_back(first_inv * p);
  c.totals.front() = RigidTransform::identity();
  c.step_errors.assign(c.totals.size(), 0.0);
  return c;
}

Chain perturb_odometry(const Chain &chain, double step_rot_bias, double step_trans_noise,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<RigidTransform> steps;
  std::vector<double> errors;
  for (int l = 1; l < chain.size(); ++l) {
    Vec3 shift = Vec3::Zero();
    if (step_trans_noise > 0.0) {
      shift.x() = step_trans_noise * gauss(rng);
      shift.y() = step_trans_noise * gauss(rng);
    }
    const RigidTransform step = relative_transform(chain, l, l - 1);
    steps.push_back(step * RigidTransform::from_yaw(step_rot_bias, shift));
    errors.push_back(l < static_cast<int>(chain.step_errors.size()) ? chain.step_errors[l] : 0.0);
  }
  return chain_from_steps(steps, errors);
}

}  // namespace treeslam
