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
 * \file delaunay.hpp
 * \brief Planar Delaunay triangulation (Bowyer-Watson) for small point sets.
 */
#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace treeslam {

struct Triangulation {
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<std::pair<int, int>> edges;     // first < second, sorted
};

/// Points must be pairwise distinct and not all collinear; throws
/// DegenerateCloud otherwise.
Triangulation delaunay(std::span<const Eigen::Vector2d> points);

}  // namespace treeslam
