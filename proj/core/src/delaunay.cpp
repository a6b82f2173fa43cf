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

#include "treeslam/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "treeslam/error.hpp"

namespace treeslam {

namespace {

using Real = long double;

struct P {
  Real x, y;
};

Real orient(const P &a, const P &b, const P &c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Positive when d lies strictly inside the circumcircle of ccw (a, b, c).
Real incircle(const P &a, const P &b, const P &c, const P &d) {
  const Real adx = a.x - d.x, ady = a.y - d.y;
  const Real bdx = b.x - d.x, bdy = b.y - d.y;
  const Real cdx = c.x - d.x, cdy = c.y - d.y;
  const Real ad = adx * adx + ady * ady;
  const Real bd = bdx * bdx + bdy * bdy;
  const Real cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
         ad * (bdx * cdy - bdy * cdx);
}

struct Tri {
  std::array<int, 3> v;
  Real cx = 0, cy = 0, r2 = 0;  // circumcircle
  bool alive = true;
};

Tri make_tri(const std::vector<P> &pts, int a, int b, int c) {
  Tri t{{a, b, c}};
  const P &pa = pts[a], &pb = pts[b], &pc = pts[c];
  const Real d = 2 * orient(pa, pb, pc);
  const Real a2 = pa.x * pa.x + pa.y * pa.y;
  const Real b2 = pb.x * pb.x + pb.y * pb.y;
  const Real c2 = pc.x * pc.x + pc.y * pc.y;
  t.cx = (a2 * (pb.y - pc.y) + b2 * (pc.y - pa.y) + c2 * (pa.y - pb.y)) / d;
  t.cy = (a2 * (pc.x - pb.x) + b2 * (pa.x - pc.x) + c2 * (pb.x - pa.x)) / d;
  t.r2 = (pa.x - t.cx) * (pa.x - t.cx) + (pa.y - t.cy) * (pa.y - t.cy);
  return t;
}

}  // namespace

Triangulation delaunay(std::span<const Eigen::Vector2d> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw Error(ErrorCode::DegenerateCloud, "need at least 3 points");

  Eigen::Vector2d lo = points[0], hi = points[0];
  for (const auto &p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector2d mid = 0.5 * (lo + hi);
  const double scale = std::max((hi - lo).maxCoeff() * 0.5, 1e-300);

  std::vector<P> pts(n + 3);
  for (int i = 0; i < n; ++i)
    pts[i] = {static_cast<Real>((points[i].x() - mid.x()) / scale),
              static_cast<Real>((points[i].y() - mid.y()) / scale)};

  // Collinearity: every point on the line through the two farthest-apart
  // extreme points.
  {
    int a = 0;
    for (int i = 1; i < n; ++i)
      if (pts[i].x < pts[a].x || (pts[i].x == pts[a].x && pts[i].y < pts[a].y)) a = i;
    int b = a;
    Real best = 0;
    for (int i = 0; i < n; ++i) {
      const Real d = (pts[i].x - pts[a].x) * (pts[i].x - pts[a].x) +
                     (pts[i].y - pts[a].y) * (pts[i].y - pts[a].y);
      if (d > best) best = d, b = i;
    }
    if (best == 0) throw Error(ErrorCode::DegenerateCloud, "all points coincide");
    Real max_area = 0;
    for (int i = 0; i < n; ++i) max_area = std::max(max_area, std::abs(orient(pts[a], pts[b], pts[i])));
    if (max_area <= 1e-12L * best)
      throw Error(ErrorCode::DegenerateCloud, "points are collinear");
  }

  constexpr Real kSuper = 1e3;
  pts[n] = {-kSuper, -kSuper};
  pts[n + 1] = {kSuper, -kSuper};
  pts[n + 2] = {0, kSuper};

  // Points are inserted in x order, so a triangle whose circumcircle lies
  // entirely left of the current point can never be split again.
  std::vector<Tri> tris, done;
  tris.reserve(4 * n + 8);
  tris.push_back(make_tri(pts, n, n + 1, n + 2));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    return pts[a].y < pts[b].y;
  });

  std::vector<int> bad;
  std::map<std::pair<int, int>, int> edge_count;
  std::vector<std::pair<int, int>> boundary;
  for (int idx : order) {
    const P &p = pts[idx];
    bad.clear();
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      const Real dx = p.x - tris[t].cx;
      if (dx > 0 && dx * dx > tris[t].r2 * (1 + 1e-9L) + 1e-18L) {
        done.push_back(tris[t]);
        tris[t].alive = false;
        continue;
      }
      const auto &v = tris[t].v;
      if (incircle(pts[v[0]], pts[v[1]], pts[v[2]], p) > 0) bad.push_back(t);
    }
    edge_count.clear();
    for (int t : bad)
      for (int k = 0; k < 3; ++k) {
        int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        ++edge_count[{std::min(a, b), std::max(a, b)}];
      }
    boundary.clear();
    for (int t : bad) {
      for (int k = 0; k < 3; ++k) {
        int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) boundary.emplace_back(a, b);
      }
      tris[t].alive = false;
    }
    for (const auto &[a, b] : boundary) tris.push_back(make_tri(pts, a, b, idx));
    std::erase_if(tris, [](const Tri &t) { return !t.alive; });
  }

  Triangulation out;
  tris.insert(tris.end(), done.begin(), done.end());
  for (const auto &t : tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    out.triangles.push_back(t.v);
    for (int k = 0; k < 3; ++k) {
      int a = t.v[k], b = t.v[(k + 1) % 3];
      out.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

}  // namespace treeslam
