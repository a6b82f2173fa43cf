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
 * \file icp_global.hpp
 * \brief Branch-and-bound registration over a box of rotations and
 * translations, refined by local ICP, for sparse near-uniform clouds.
 *
 * A cell is parameterised by an angle-axis vector r (x, y tilt; z yaw) and a
 * translation t. Its transform rotates the initialised moving cloud about its
 * centroid c by r and then shifts it by t:
 *   x -> R(r) (x - c) + c + t.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "treeslam/icp_local.hpp"
#include "treeslam/point_cloud.hpp"
#include "treeslam/se3.hpp"

namespace treeslam {

struct BnbConfig {
  double sigma_t = 1.9;                                   // meters
  double sigma_r = 3.7 * std::numbers::pi / 180.0;        // radians
  double horizontal_zone = std::numbers::pi / 6.0;        // yaw half-width, radians
  double tilt_zone = std::numbers::pi / 6.0;              // tilt half-width, radians
  Vec3 translation_box = Vec3(10.0, 10.0, 2.0);           // full extents, meters
  /// Search stops once no open cell can beat the incumbent by more than this.
  double optimality_gap = 0.2;  // meters
  std::int64_t max_nodes = 200000;
  IcpOptions icp;
};

/// Granularity of the unspecialised search (yaw and tilt over 180 degrees).
BnbConfig general_preset();
/// Granularity for sparse near-uniform clouds (60 degree zones).
BnbConfig sparse_uniform_preset();

/// sigma_t = 1e-4 N L / 2 for N points and a largest cloud diameter L.
double auto_translation_granularity(std::size_t n_points, double diameter);

struct Granularity {
  double delta0 = 0.0;  // meters
  double theta0 = 0.0;  // radians
};

/// δ₀ = L₀/2 and θ₀ = δ₀ / (√(1-γ) R). Throws InvalidRatio.
Granularity granularity(double mean_distance, double outlier_ratio, double range);

/// Per-point bound sqrt(Σ max(e_p - γ_rp - γ_t, 0)²) with γ_t = √3 σ_t and
/// γ_rp = 2 sin(min(√3 σ_r / 2, π/2)) ‖p‖. Throws LengthMismatch.
double lower_bound(std::span<const double> residuals, std::span<const double> radii,
                   double sigma_t, double sigma_r);

/// Product of the initial grid sizes over the three rotation and three
/// translation axes.
std::uint64_t bnb_cell_count(const BnbConfig &cfg);

struct BnbCell {
  std::array<double, 6> center{};  // rx, ry, rz, tx, ty, tz
  std::array<double, 6> half{};    // half-widths
};

/// Moving cloud prepared for cell evaluation: init applied, centred.
class BnbProblem {
 public:
  BnbProblem(const IndexedCloud &p, std::span<const Vec3> q, const RigidTransform &init,
             double outlier_ratio);

  const Vec3 &pivot() const { return pivot_; }
  /// Transform of the full moving cloud for parameters x (6 values).
  RigidTransform transform(const std::array<double, 6> &x) const;

  struct Evaluation {
    double center_error = 0.0;  // trimmed RMS at the cell centre
    double lower_bound = 0.0;   // trimmed RMS bound over the cell
  };
  Evaluation evaluate(const BnbCell &cell) const;
  /// Trimmed RMS error at parameters x.
  double error_at(const std::array<double, 6> &x) const;

 private:
  const IndexedCloud &target_;
  std::vector<Vec3> centered_;
  std::vector<double> radii_;
  RigidTransform init_;
  Vec3 pivot_;
  double outlier_ratio_;
  std::size_t keep_;
};

struct BnbStats {
  std::int64_t nodes = 0;      // evaluated cells
  std::int64_t icp_calls = 0;  // local refinements
  std::int64_t pruned = 0;
  bool budget_exhausted = false;
};

/// Best-first branch-and-bound; see BnbConfig for the search box. Returns the
/// incumbent with the smallest trimmed error; converged is false when the
/// node budget ran out first. Serial and deterministic. Throws EmptyCloud.
IcpResult go_icp(const Frame &p, const Frame &q, const BnbConfig &cfg, double outlier_ratio,
                 const RigidTransform &init = RigidTransform::identity(),
                 BnbStats *stats = nullptr);
IcpResult go_icp(const IndexedCloud &p, std::span<const Vec3> q, const BnbConfig &cfg,
                 double outlier_ratio, const RigidTransform &init = RigidTransform::identity(),
                 BnbStats *stats = nullptr);

}  // namespace treeslam
