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
 * \file se3.hpp
 * \brief Rigid body transformations: composition, logarithm, exponential and
 * the matrix power tau^u used to interpolate along a screw motion.
 *
 * Transforms act on column vectors, x' = R x + p. A chain total t_l1 maps
 * points of frame l into the coordinates of the first frame.
 */
#pragma once

#include <array>
#include <numbers>
#include <span>
#include <string>

#include <Eigen/Core>

namespace treeslam {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Below this rotation angle gain_product switches to its Taylor expansion.
inline constexpr double kTaylorSwitch = 1e-3;
/// Angles closer than this to pi take the symmetric-part logarithm branch.
inline constexpr double kNearPi = 1e-3;

class RigidTransform {
 public:
  RigidTransform() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}
  RigidTransform(const Mat3 &rotation, const Vec3 &translation)
      : rotation_(rotation), translation_(translation) {}

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3 &p) {
    return {Mat3::Identity(), p};
  }
  static RigidTransform from_rotation(const Mat3 &r) { return {r, Vec3::Zero()}; }
  /// Rotation about +z by yaw, then translation p.
  static RigidTransform from_yaw(double yaw, const Vec3 &p = Vec3::Zero());
  /// Rotation by angle about the line through center with direction axis.
  static RigidTransform rotation_about(const Vec3 &axis, double angle,
                                       const Vec3 &center);
  /// Reads the top 3x4 block of a homogeneous matrix.
  static RigidTransform from_matrix(const Mat4 &m);

  const Mat3 &rotation() const { return rotation_; }
  const Vec3 &translation() const { return translation_; }

  Mat4 matrix() const;
  Vec3 apply(const Vec3 &x) const { return rotation_ * x + translation_; }
  RigidTransform inverse() const;
  RigidTransform operator*(const RigidTransform &rhs) const;

  /// RᵀR = I and det R = +1 within tol, all entries finite.
  bool is_valid(double tol = 1e-9) const;
  bool is_finite() const;
  /// Same translation with the rotation replaced by the nearest proper
  /// rotation (polar factor); removes drift from long products.
  RigidTransform orthonormalized() const;

  /// Rotation angle in [0, pi].
  double angle() const;
  /// Heading of the rotated x axis projected onto the horizontal plane.
  double yaw() const;

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

RigidTransform compose(const RigidTransform &a, const RigidTransform &b);
RigidTransform inverse(const RigidTransform &t);

/// Frobenius norm of the difference of the homogeneous forms.
double distance(const RigidTransform &a, const RigidTransform &b);

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
  /// Set when angle is zero; axis carries no information then.
  bool pure_translation = true;
};

struct Twist {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
  Vec3 velocity = Vec3::Zero();
  bool pure_translation = true;
};

Mat3 skew(const Vec3 &w);

/// Axis and angle of a rotation matrix, angle in [0, pi].
/// Throws NonOrthonormalInput when RᵀR deviates from I by more than 1e-6.
AxisAngle rotation_log(const Mat3 &r);

/// I + sin(angle)[w] + (1 - cos(angle))[w]^2. Throws NonUnitAxis.
Mat3 rodrigues(const Vec3 &axis, double angle);

/// G(theta) = I theta + (1 - cos theta)[w] + (theta - sin theta)[w]^2.
Mat3 twist_gain(double angle, const Mat3 &skew_axis);

/// G^{-1}(theta); singular at theta = 0.
Mat3 twist_gain_inverse(double angle, const Mat3 &skew_axis);

/// G(theta u) G^{-1}(theta) on the basis {I, [w], [w]^2}; uses the Taylor
/// expansion of the 0/0 coefficients below kTaylorSwitch.
Mat3 gain_product(double angle, double u, const Mat3 &skew_axis);

/// Coefficients (c0, c1, c2) of gain_product on {I, [w], [w]^2}.
std::array<double, 3> gain_product_coefficients(double angle, double u);

/// Twist coordinates (w, theta, v) with exp([S] theta) = t.
Twist log(const RigidTransform &t);
RigidTransform exp(const Twist &twist);

/// Precomputed logarithm of a base transform for repeated powers.
class ScrewPower {
 public:
  explicit ScrewPower(const RigidTransform &base);

  RigidTransform operator()(double u) const;

  const Vec3 &axis() const { return axis_; }
  double angle() const { return angle_; }
  const Mat3 &skew_axis() const { return skew_; }
  const Mat3 &skew_axis_squared() const { return skew2_; }
  const Vec3 &translation() const { return translation_; }
  bool near_pi() const { return angle_ > std::numbers::pi - kNearPi; }

 private:
  Vec3 axis_;
  double angle_;
  Mat3 skew_;
  Mat3 skew2_;
  Vec3 translation_;
};

/// tau^u. The angle theta u is not wrapped; keep |theta u| <= pi.
RigidTransform pow(const RigidTransform &t, double u);

/// tau_a^{1-u} tau_b^u.
RigidTransform interpolate(const RigidTransform &a, const RigidTransform &b,
                           double u);

/// 12 decimals: R row-major then p.
std::string serialize(const RigidTransform &t);
RigidTransform deserialize(std::span<const double, 12> values);

}  // namespace treeslam
