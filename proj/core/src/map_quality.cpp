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

#include "treeslam/map_quality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "treeslam/error.hpp"
#include "treeslam/kdtree.hpp"

namespace treeslam {

namespace {

using CellKey = std::array<long long, 3>;

std::vector<CellKey> cell_keys(const FusedMap &m, double eps, bool volumetric) {
  std::vector<CellKey> keys;
  keys.reserve(m.points.size());
  for (const auto &p : m.points) {
    const Vec3 rel = (p - m.min) / eps;
    keys.push_back({static_cast<long long>(std::floor(rel.x())),
                    static_cast<long long>(std::floor(rel.y())),
                    volumetric ? static_cast<long long>(std::floor(rel.z())) : 0LL});
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

int find_root(std::vector<int> &parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

FusedMap build_map(std::span<const Frame> frames, std::span<const RigidTransform> totals) {
  if (frames.size() != totals.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(frames.size()) + " frames but " +
                                               std::to_string(totals.size()) + " poses");
  FusedMap m;
  for (std::size_t l = 0; l < frames.size(); ++l)
    for (const auto &p : frames[l].points) {
      m.points.push_back(totals[l].apply(p));
      m.frame_index.push_back(static_cast<int>(l));
    }
  if (!m.points.empty()) {
    m.min = m.max = m.points.front();
    for (const auto &p : m.points) {
      m.min = m.min.cwiseMin(p);
      m.max = m.max.cwiseMax(p);
    }
  }
  return m;
}

FusedMap build_map(std::span<const Frame> frames, const Chain &c) {
  return build_map(frames, std::span<const RigidTransform>(c.totals));
}

std::size_t occupied_cells(const FusedMap &m, double eps, bool volumetric) {
  auto keys = cell_keys(m, eps, volumetric);
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::vector<CellCount> cell_counts(const FusedMap &m, double eps) {
  const auto keys = cell_keys(m, eps, false);
  std::vector<CellCount> out;
  for (std::size_t k = 0; k < keys.size();) {
    std::size_t e = k;
    while (e < keys.size() && keys[e] == keys[k]) ++e;
    out.push_back({m.min.x() + keys[k][0] * eps, m.min.y() + keys[k][1] * eps,
                   static_cast<int>(e - k)});
    k = e;
  }
  return out;
}

double blur_ratio(const FusedMap &m, double eps1, double eps2, bool volumetric) {
  if (m.points.empty()) throw Error(ErrorCode::EmptyMap, "blur ratio of an empty map");
  if (!(eps1 > 0.0 && eps1 < eps2))
    throw Error(ErrorCode::InvalidConfig, "blur ratio needs 0 < eps1 < eps2");
  const double k = volumetric ? 3.0 : 2.0;
  const double fine = static_cast<double>(occupied_cells(m, eps1, volumetric));
  const double coarse = static_cast<double>(occupied_cells(m, eps2, volumetric));
  return fine * std::pow(eps1, k) / (coarse * std::pow(eps2, k));
}

std::vector<Cluster> cluster_map(const FusedMap &m, double r_alpha, int min_points) {
  const int n = static_cast<int>(m.points.size());
  std::vector<Eigen::Vector2d> flat;
  flat.reserve(n);
  for (const auto &p : m.points) flat.push_back(p.head<2>());
  const KdTree2 tree(flat);

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const double link = 2.0 * r_alpha;
  for (int a = 0; a < n; ++a)
    for (int b : tree.within(flat[a], link)) {
      if (b <= a) continue;
      const int ra = find_root(parent, a), rb = find_root(parent, b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

  std::vector<std::vector<int>> groups(n);
  for (int a = 0; a < n; ++a) groups[find_root(parent, a)].push_back(a);

  std::vector<Cluster> out;
  for (auto &g : groups) {
    if (static_cast<int>(g.size()) < min_points || g.empty()) continue;
    Cluster c;
    c.members = std::move(g);
    for (int idx : c.members) c.center += m.points[idx];
    c.center /= static_cast<double>(c.members.size());
    double sum = 0.0;
    for (int idx : c.members) sum += (m.points[idx] - c.center).squaredNorm();
    c.rmse = std::sqrt(sum / static_cast<double>(c.members.size()));
    out.push_back(std::move(c));
  }
  return out;
}

double discarded_fraction(const FusedMap &m, std::span<const Cluster> clusters) {
  if (m.points.empty()) return 0.0;
  std::size_t kept = 0;
  for (const auto &c : clusters) kept += c.members.size();
  return 1.0 - static_cast<double>(kept) / static_cast<double>(m.points.size());
}

double cluster_rmse(std::span<const Cluster> clusters) {
  if (clusters.empty()) throw Error(ErrorCode::NoClusters, "no clusters to measure");
  double sum = 0.0;
  for (const auto &c : clusters) sum += c.rmse;
  return sum / static_cast<double>(clusters.size());
}

DimensionFit box_dimension(const FusedMap &m, std::span<const double> scales) {
  if (m.points.empty()) throw Error(ErrorCode::EmptyMap, "box dimension of an empty map");
  if (scales.size() < 3) throw Error(ErrorCode::DegenerateFit, "need at least 3 scales");
  const auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
  if (!(*lo > 0.0) || *hi / *lo < 10.0 - 1e-9)
    throw Error(ErrorCode::DegenerateFit, "scales must be positive and span a decade");

  std::vector<double> xs, ys;
  for (double eps : scales) {
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(occupied_cells(m, eps))));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateFit, "scales are not distinct");
  DimensionFit fit;
  fit.dimension = sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace treeslam
