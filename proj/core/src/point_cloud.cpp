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

#include "treeslam/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treeslam/delaunay.hpp"
#include "treeslam/error.hpp"

namespace treeslam {

namespace {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

constexpr double kDuplicateTolerance = 1e-6;
// Arc discretisation of cone footprints.
constexpr double kArcStep = std::numbers::pi / 360.0;

double cross(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_area(const Polygon &poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * std::abs(a);
}

// Sutherland-Hodgman; clip must be convex and counter-clockwise.
Polygon clip_convex(const Polygon &subject, const Polygon &clip) {
  Polygon out = subject;
  for (std::size_t i = 0, n = clip.size(); i < n && !out.empty(); ++i) {
    const Vec2 &a = clip[i];
    const Vec2 &b = clip[(i + 1) % n];
    const Vec2 edge = b - a;
    Polygon input;
    input.swap(out);
    for (std::size_t k = 0, m = input.size(); k < m; ++k) {
      const Vec2 &cur = input[k];
      const Vec2 &prev = input[(k + m - 1) % m];
      const double dc = cross(edge, cur - a);
      const double dp = cross(edge, prev - a);
      if (dc >= 0.0) {
        if (dp < 0.0) out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
        out.push_back(cur);
      } else if (dp >= 0.0) {
        out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      }
    }
  }
  return out;
}

double heading(const RigidTransform &pose) {
  return std::atan2(pose.rotation()(1, 0), pose.rotation()(0, 0));
}

}  // namespace

std::vector<Vec3> transform_points(std::span<const Vec3> points, const RigidTransform &t) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto &p : points) out.push_back(t.apply(p));
  return out;
}

Frame transform_cloud(const Frame &f, const RigidTransform &t) {
  Frame out;
  out.id = f.id;
  out.cone = f.cone;
  out.points = transform_points(f.points, t);
  return out;
}

std::size_t trimmed_count(std::size_t n, double outlier_ratio) {
  const double keep = std::ceil((1.0 - outlier_ratio) * static_cast<double>(n) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(keep, 1.0)), 1, n);
}

MatchError match_error(const IndexedCloud &p, std::span<const Vec3> q, double outlier_ratio) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::EmptyCloud, "match_error on an empty cloud");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0))
    throw Error(ErrorCode::InvalidRatio, "outlier ratio must lie in [0, 1)");

  std::vector<Correspondence> all(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto nn = p.nearest(q[i]);
    all[i] = {static_cast<int>(i), nn.index, std::sqrt(nn.squared_distance)};
  }
  const std::size_t keep = trimmed_count(q.size(), outlier_ratio);
  std::partial_sort(all.begin(), all.begin() + keep, all.end(),
                    [](const Correspondence &a, const Correspondence &b) {
                      if (a.distance != b.distance) return a.distance < b.distance;
                      return a.query < b.query;
                    });
  all.resize(keep);
  double sum = 0.0;
  for (const auto &c : all) sum += c.distance * c.distance;
  return {std::sqrt(sum / static_cast<double>(keep)), std::move(all)};
}

MatchError match_error(const Frame &p, const Frame &q, double outlier_ratio) {
  if (p.points.empty() || q.points.empty())
    throw Error(ErrorCode::EmptyCloud, "match_error on an empty cloud");
  return match_error(IndexedCloud(p.points), q.points, outlier_ratio);
}

double mean_neighbor_distance(std::span<const Vec3> points) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (points[a].x() != points[b].x()) return points[a].x() < points[b].x();
    return points[a].y() < points[b].y();
  });
  std::vector<int> kept;
  for (int idx : order) {
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (points[idx].x() - points[*it].x() > kDuplicateTolerance) break;
      if ((points[idx].head<2>() - points[*it].head<2>()).norm() <= kDuplicateTolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(idx);
  }

  std::vector<Vec2> flat;
  flat.reserve(kept.size());
  for (int idx : kept) flat.push_back(points[idx].head<2>());
  const Triangulation tri = delaunay(flat);

  std::vector<double> sum(kept.size(), 0.0);
  std::vector<int> count(kept.size(), 0);
  for (const auto &[a, b] : tri.edges) {
    const double len = (points[kept[a]] - points[kept[b]]).norm();
    sum[a] += len;
    sum[b] += len;
    ++count[a];
    ++count[b];
  }
  double total = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (count[i] == 0) continue;
    total += sum[i] / count[i];
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::DegenerateCloud, "triangulation has no edges");
  return total / used;
}

double mean_neighbor_distance(const Frame &f) { return mean_neighbor_distance(f.points); }

std::vector<std::vector<Vec2>> cone_footprint(const ConePose &c) {
  const Vec2 apex = c.pose.translation().head<2>();
  const double half = std::min(c.cone.half_angle, std::numbers::pi);
  const double total = 2.0 * half;
  const int pieces = std::max(1, static_cast<int>(std::ceil(total / (std::numbers::pi / 2.0) - 1e-12)));
  const double piece_angle = total / pieces;
  const int segments = std::max(2, static_cast<int>(std::ceil(piece_angle / kArcStep)));
  const double start = heading(c.pose) - half;

  std::vector<Polygon> out;
  out.reserve(pieces);
  for (int k = 0; k < pieces; ++k) {
    Polygon poly;
    poly.reserve(segments + 2);
    poly.push_back(apex);
    for (int s = 0; s <= segments; ++s) {
      const double phi = start + k * piece_angle + piece_angle * s / segments;
      poly.push_back(apex + c.cone.range * Vec2(std::cos(phi), std::sin(phi)));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

double overlap_ratio(const ConePose &a, const ConePose &b) {
  const Vec2 da = a.pose.translation().head<2>();
  const Vec2 db = b.pose.translation().head<2>();
  if ((da - db).norm() > a.cone.range + b.cone.range) return 0.0;

  const auto pa = cone_footprint(a);
  const auto pb = cone_footprint(b);
  double area_a = 0.0, area_b = 0.0, shared = 0.0;
  for (const auto &x : pa) area_a += polygon_area(x);
  for (const auto &y : pb) area_b += polygon_area(y);
  for (const auto &x : pa)
    for (const auto &y : pb) {
      const Polygon inter = clip_convex(x, y);
      if (inter.size() >= 3) shared += polygon_area(inter);
    }
  const double denom = std::min(area_a, area_b);
  if (denom <= 0.0) return 0.0;
  return std::clamp(shared / denom, 0.0, 1.0);
}

bool inside_cone(const ConePose &c, const Vec3 &x) {
  const Vec2 d = x.head<2>() - c.pose.translation().head<2>();
  const double r = d.norm();
  if (r > c.cone.range) return false;
  if (r == 0.0) return true;
  double rel = std::atan2(d.y(), d.x()) - heading(c.pose);
  rel = std::remainder(rel, 2.0 * std::numbers::pi);
  return std::abs(rel) <= c.cone.half_angle;
}

}  // namespace treeslam
