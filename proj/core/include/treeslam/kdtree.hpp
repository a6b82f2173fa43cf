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
 * \file kdtree.hpp
 * \brief Exact nearest-neighbour and radius queries over a static point set.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace treeslam {

template <int Dim>
class KdTree {
 public:
  using Point = Eigen::Matrix<double, Dim, 1>;

  struct Neighbor {
    int index = -1;
    double squared_distance = std::numeric_limits<double>::infinity();
  };

  KdTree() = default;
  explicit KdTree(std::vector<Point> points) : points_(std::move(points)) { build(); }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point> &points() const { return points_; }

  Neighbor nearest(const Point &query) const {
    Neighbor best;
    if (!nodes_.empty()) search_nearest(0, query, best);
    return best;
  }

  /// Indices of all points within radius of query, ascending.
  std::vector<int> within(const Point &query, double radius) const {
    std::vector<int> out;
    if (!nodes_.empty()) search_radius(0, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Node {
    int begin, end;  // range in order_
    int axis = -1;   // -1 for a leaf
    double split = 0.0;
    int left = -1, right = -1;
  };
  static constexpr int kLeafSize = 8;

  void build() {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.clear();
    if (!points_.empty()) build_node(0, static_cast<int>(points_.size()));
  }

  int build_node(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;

    Point lo = points_[order_[begin]], hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] - lo[axis] <= 0.0) return id;  // all coincident

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                       if (points_[a][axis] != points_[b][axis])
                         return points_[a][axis] < points_[b][axis];
                       return a < b;
                     });
    nodes_[id].axis = axis;
    nodes_[id].split = points_[order_[mid]][axis];
    const int left = build_node(begin, mid);
    const int right = build_node(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void search_nearest(int id, const Point &q, Neighbor &best) const {
    const Node &n = nodes_[id];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int idx = order_[i];
        const double d2 = (points_[idx] - q).squaredNorm();
        if (d2 < best.squared_distance ||
            (d2 == best.squared_distance && idx < best.index)) {
          best.squared_distance = d2;
          best.index = idx;
        }
      }
      return;
    }
    const double diff = q[n.axis] - n.split;
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    search_nearest(near, q, best);
    if (diff * diff <= best.squared_distance) search_nearest(far, q, best);
  }

  void search_radius(int id, const Point &q, double r2, std::vector<int> &out) const {
    const Node &n = nodes_[id];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i)
        if ((points_[order_[i]] - q).squaredNorm() <= r2) out.push_back(order_[i]);
      return;
    }
    const double diff = q[n.axis] - n.split;
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    search_radius(near, q, r2, out);
    if (diff * diff <= r2) search_radius(far, q, r2, out);
  }

  std::vector<Point> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

using KdTree2 = KdTree<2>;
using KdTree3 = KdTree<3>;

}  // namespace treeslam
