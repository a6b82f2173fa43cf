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

#include "treeslam/icp_global.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "treeslam/error.hpp"

namespace treeslam {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Mat3 rotation_of(double rx, double ry, double rz) {
  const Vec3 r(rx, ry, rz);
  const double angle = r.norm();
  if (angle == 0.0) return Mat3::Identity();
  return rodrigues(r / angle, angle);
}

// RMS of the k smallest entries; reorders v.
double trimmed_rms(std::vector<double> &squares, std::size_t k) {
  std::nth_element(squares.begin(), squares.begin() + (k - 1), squares.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += squares[i];
  return std::sqrt(sum / static_cast<double>(k));
}

std::uint64_t axis_cells(double extent, double sigma) {
  if (extent <= 0.0 || sigma <= 0.0) return 1;
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(extent / sigma - 1e-9)));
}

}  // namespace

BnbConfig general_preset() {
  BnbConfig cfg;
  cfg.sigma_t = 1.2;
  cfg.sigma_r = 1.0 * kDeg;
  cfg.horizontal_zone = 90.0 * kDeg;
  cfg.tilt_zone = 90.0 * kDeg;
  return cfg;
}

BnbConfig sparse_uniform_preset() {
  BnbConfig cfg;
  cfg.sigma_t = 1.9;
  cfg.sigma_r = 3.7 * kDeg;
  cfg.horizontal_zone = 30.0 * kDeg;
  cfg.tilt_zone = 30.0 * kDeg;
  return cfg;
}

double auto_translation_granularity(std::size_t n_points, double diameter) {
  return 1e-4 * static_cast<double>(n_points) * diameter / 2.0;
}

Granularity granularity(double mean_distance, double outlier_ratio, double range) {
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0))
    throw Error(ErrorCode::InvalidRatio, "outlier ratio must lie in [0, 1)");
  Granularity g;
  g.delta0 = mean_distance / 2.0;
  g.theta0 = g.delta0 / (std::sqrt(1.0 - outlier_ratio) * range);
  return g;
}

double lower_bound(std::span<const double> residuals, std::span<const double> radii,
                   double sigma_t, double sigma_r) {
  if (residuals.size() != radii.size())
    throw Error(ErrorCode::LengthMismatch, "one radius per residual");
  const double gamma_t = std::sqrt(3.0) * sigma_t;
  const double s = 2.0 * std::sin(std::min(std::sqrt(3.0) * sigma_r / 2.0, std::numbers::pi / 2.0));
  double sum = 0.0;
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    const double m = std::max(residuals[k] - s * radii[k] - gamma_t, 0.0);
    sum += m * m;
  }
  return std::sqrt(sum);
}

std::uint64_t bnb_cell_count(const BnbConfig &cfg) {
  std::uint64_t n = axis_cells(2.0 * cfg.horizontal_zone, cfg.sigma_r);
  n *= axis_cells(2.0 * cfg.tilt_zone, cfg.sigma_r);
  n *= axis_cells(2.0 * cfg.tilt_zone, cfg.sigma_r);
  for (int a = 0; a < 3; ++a) n *= axis_cells(cfg.translation_box[a], cfg.sigma_t);
  return n;
}

BnbProblem::BnbProblem(const IndexedCloud &p, std::span<const Vec3> q,
                       const RigidTransform &init, double outlier_ratio)
    : target_(p), init_(init), pivot_(Vec3::Zero()), outlier_ratio_(outlier_ratio) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::EmptyCloud, "go_icp on an empty cloud");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0))
    throw Error(ErrorCode::InvalidRatio, "outlier ratio must lie in [0, 1)");
  centered_.reserve(q.size());
  for (const auto &x : q) {
    centered_.push_back(init.apply(x));
    pivot_ += centered_.back();
  }
  pivot_ /= static_cast<double>(q.size());
  radii_.reserve(q.size());
  for (auto &x : centered_) {
    x -= pivot_;
    radii_.push_back(x.norm());
  }
  keep_ = trimmed_count(q.size(), outlier_ratio);
}

RigidTransform BnbProblem::transform(const std::array<double, 6> &x) const {
  const Mat3 r = rotation_of(x[0], x[1], x[2]);
  const Vec3 t(x[3], x[4], x[5]);
  return RigidTransform(r, pivot_ + t - r * pivot_) * init_;
}

BnbProblem::Evaluation BnbProblem::evaluate(const BnbCell &cell) const {
  const auto &c = cell.center;
  const Mat3 r = rotation_of(c[0], c[1], c[2]);
  const Vec3 shift = pivot_ + Vec3(c[3], c[4], c[5]);
  const double rot_diag = Vec3(cell.half[0], cell.half[1], cell.half[2]).norm();
  const double gamma_t = Vec3(cell.half[3], cell.half[4], cell.half[5]).norm();
  const double s = 2.0 * std::sin(std::min(rot_diag / 2.0, std::numbers::pi / 2.0));

  std::vector<double> err2(centered_.size()), bound2(centered_.size());
  for (std::size_t k = 0; k < centered_.size(); ++k) {
    const auto nn = target_.nearest(r * centered_[k] + shift);
    err2[k] = nn.squared_distance;
    const double m = std::max(std::sqrt(nn.squared_distance) - s * radii_[k] - gamma_t, 0.0);
    bound2[k] = m * m;
  }
  return {trimmed_rms(err2, keep_), trimmed_rms(bound2, keep_)};
}

double BnbProblem::error_at(const std::array<double, 6> &x) const {
  BnbCell cell;
  cell.center = x;
  return evaluate(cell).center_error;
}

IcpResult go_icp(const IndexedCloud &p, std::span<const Vec3> q, const BnbConfig &cfg,
                 double outlier_ratio, const RigidTransform &init, BnbStats *stats) {
  const BnbProblem problem(p, q, init, outlier_ratio);
  IcpOptions icp = cfg.icp;
  icp.outlier_ratio = outlier_ratio;

  BnbStats local;
  BnbStats &st = stats ? *stats : local;
  st = {};

  IcpResult best = icp_match(p, q, init, icp);
  ++st.icp_calls;
  std::vector<double> trace{best.error};

  struct Node {
    BnbCell cell;
    double lb;
    double center_error;
    std::int64_t seq;
  };
  const auto worse = [](const Node &a, const Node &b) {
    return std::tie(a.lb, a.center_error, a.seq) > std::tie(b.lb, b.center_error, b.seq);
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

  const std::array<double, 6> sigma{cfg.sigma_r, cfg.sigma_r, cfg.sigma_r,
                                    cfg.sigma_t, cfg.sigma_t, cfg.sigma_t};

  const auto splittable = [&](const BnbCell &cell, std::array<int, 6> &axes) {
    int n = 0;
    for (int a = 0; a < 6; ++a)
      if (cell.half[a] > 0.0 && cell.half[a] >= sigma[a]) axes[n++] = a;
    return n;
  };
  const auto refine = [&](const BnbCell &cell) {
    IcpResult r = icp_match(p, q, problem.transform(cell.center), icp);
    ++st.icp_calls;
    if (r.error < best.error) {
      best = std::move(r);
      trace.push_back(best.error);
    }
  };

  // Evaluates a cell and queues it unless it is pruned. Inner cells are
  // refined from their centre when the centre beats the incumbent; a leaf
  // lies inside the local ICP basin, so every unpruned leaf is refined.
  const auto visit = [&](const BnbCell &cell) {
    const auto ev = problem.evaluate(cell);
    ++st.nodes;
    std::array<int, 6> axes{};
    const bool leaf = splittable(cell, axes) == 0;
    if (!leaf && ev.center_error < best.error) refine(cell);
    if (ev.lower_bound >= best.error - cfg.optimality_gap) {
      ++st.pruned;
      return;
    }
    if (leaf) {
      refine(cell);
      return;
    }
    open.push({cell, ev.lower_bound, ev.center_error, st.nodes});
  };

  BnbCell root;
  root.half = {cfg.tilt_zone, cfg.tilt_zone, cfg.horizontal_zone,
               cfg.translation_box.x() / 2.0, cfg.translation_box.y() / 2.0,
               cfg.translation_box.z() / 2.0};
  visit(root);

  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    if (node.lb >= best.error - cfg.optimality_gap) break;  // nothing left can do better
    if (st.nodes >= cfg.max_nodes) {
      st.budget_exhausted = true;
      break;
    }

    std::array<int, 6> axes{};
    const int n_split = splittable(node.cell, axes);

    for (int mask = 0; mask < (1 << n_split); ++mask) {
      BnbCell child = node.cell;
      for (int k = 0; k < n_split; ++k) {
        const int a = axes[k];
        child.half[a] = node.cell.half[a] / 2.0;
        child.center[a] += (mask >> k & 1) ? child.half[a] : -child.half[a];
      }
      visit(child);
    }
  }

  best.converged = !st.budget_exhausted;
  best.iterations = static_cast<int>(std::min<std::int64_t>(st.nodes, 1 << 30));
  best.error_trace = std::move(trace);
  return best;
}

IcpResult go_icp(const Frame &p, const Frame &q, const BnbConfig &cfg, double outlier_ratio,
                 const RigidTransform &init, BnbStats *stats) {
  if (p.points.empty() || q.points.empty())
    throw Error(ErrorCode::EmptyCloud, "go_icp on an empty cloud");
  return go_icp(IndexedCloud(p.points), q.points, cfg, outlier_ratio, init, stats);
}

}  // namespace treeslam
