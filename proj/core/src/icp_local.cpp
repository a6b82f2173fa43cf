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

#include "treeslam/icp_local.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "treeslam/error.hpp"

namespace treeslam {

RigidTransform rigid_fit(std::span<const Vec3> src, std::span<const Vec3> dst) {
  const std::size_t n = src.size();
  if (n != dst.size()) throw Error(ErrorCode::LengthMismatch, "rigid_fit needs paired points");
  if (n < 3) throw Error(ErrorCode::DegenerateCorrespondences, "fewer than 3 correspondences");

  Vec3 cs = Vec3::Zero(), cd = Vec3::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    cs += src[k];
    cd += dst[k];
  }
  cs /= static_cast<double>(n);
  cd /= static_cast<double>(n);

  Mat3 h = Mat3::Zero();
  for (std::size_t k = 0; k < n; ++k) h += (src[k] - cs) * (dst[k] - cd).transpose();

  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Mat3 r = v * d * u.transpose();
  return {r, cd - r * cs};
}

IcpResult icp_match(const IndexedCloud &p, std::span<const Vec3> q, const RigidTransform &init,
                    const IcpOptions &options) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::EmptyCloud, "icp_match on an empty cloud");

  IcpResult out;
  RigidTransform current = init;
  double best = std::numeric_limits<double>::infinity();
  double previous = best;
  std::vector<Vec3> moved(q.size());
  std::vector<Vec3> src, dst;

  for (int it = 0;; ++it) {
    for (std::size_t k = 0; k < q.size(); ++k) moved[k] = current.apply(q[k]);
    const MatchError m = match_error(p, moved, options.outlier_ratio);
    out.error_trace.push_back(m.error);
    if (m.error < best) {
      best = m.error;
      out.transform = current;
      out.error = m.error;
    }
    if (m.error == 0.0 || (it > 0 && previous - m.error < options.tolerance)) {
      out.converged = it < options.max_iterations;
      out.iterations = it;
      break;
    }
    if (it == options.max_iterations) {
      out.iterations = it;
      break;
    }
    previous = m.error;

    src.clear();
    dst.clear();
    for (const auto &c : m.pairs) {
      src.push_back(moved[c.query]);
      dst.push_back(p.points()[c.target]);
    }
    current = rigid_fit(src, dst) * current;
  }
  return out;
}

IcpResult icp_match(const Frame &p, const Frame &q, const RigidTransform &init,
                    const IcpOptions &options) {
  if (p.points.empty() || q.points.empty())
    throw Error(ErrorCode::EmptyCloud, "icp_match on an empty cloud");
  return icp_match(IndexedCloud(p.points), q.points, init, options);
}

bool converges_test(double delta, double theta, double phi, const ConvergenceLimits &lim) {
  const double a = delta / lim.delta0;
  const double b = theta / lim.theta0;
  const double c = phi / lim.phi0;
  return a * a + b * b + c * c <= 1.0;
}

}  // namespace treeslam
