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

#include "treeslam/se3.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "treeslam/error.hpp"

namespace treeslam {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this the rotation is treated as exactly zero.
constexpr double kZeroAngle = 1e-12;

Vec3 vee(const Mat3 &m) {
  return {m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
}

}  // namespace

RigidTransform RigidTransform::from_yaw(double yaw, const Vec3 &p) {
  Mat3 r = Mat3::Identity();
  const double c = std::cos(yaw), s = std::sin(yaw);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  return {r, p};
}

RigidTransform RigidTransform::rotation_about(const Vec3 &axis, double angle,
                                              const Vec3 &center) {
  const Mat3 r = rodrigues(axis.normalized(), angle);
  return {r, center - r * center};
}

RigidTransform RigidTransform::from_matrix(const Mat4 &m) {
  return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()};
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform RigidTransform::inverse() const {
  const Mat3 rt = rotation_.transpose();
  return {rt, -(rt * translation_)};
}

RigidTransform RigidTransform::operator*(const RigidTransform &rhs) const {
  return {rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_};
}

bool RigidTransform::is_finite() const {
  return rotation_.allFinite() && translation_.allFinite();
}

RigidTransform RigidTransform::orthonormalized() const {
  const Eigen::JacobiSVD<Mat3> svd(rotation_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return {svd.matrixU() * d * svd.matrixV().transpose(), translation_};
}

bool RigidTransform::is_valid(double tol) const {
  if (!is_finite()) return false;
  const double orth = (rotation_.transpose() * rotation_ - Mat3::Identity()).norm();
  return orth <= tol && std::abs(rotation_.determinant() - 1.0) <= tol;
}

double RigidTransform::angle() const {
  const double s = 0.5 * vee(rotation_).norm();
  const double c = 0.5 * (rotation_.trace() - 1.0);
  return std::atan2(s, c);
}

double RigidTransform::yaw() const { return std::atan2(rotation_(1, 0), rotation_(0, 0)); }

RigidTransform compose(const RigidTransform &a, const RigidTransform &b) { return a * b; }

RigidTransform inverse(const RigidTransform &t) { return t.inverse(); }

double distance(const RigidTransform &a, const RigidTransform &b) {
  return (a.matrix() - b.matrix()).norm();
}

Mat3 skew(const Vec3 &w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

AxisAngle rotation_log(const Mat3 &r) {
  if (!r.allFinite() || (r.transpose() * r - Mat3::Identity()).norm() > 1e-6)
    throw Error(ErrorCode::NonOrthonormalInput, "rotation matrix is not orthonormal");
  if (r.determinant() < 0.0)
    throw Error(ErrorCode::NonOrthonormalInput, "rotation matrix is a reflection");

  const Vec3 v = vee(r);
  const double angle = std::atan2(0.5 * v.norm(), 0.5 * (r.trace() - 1.0));

  AxisAngle out;
  out.angle = angle;
  if (angle < kZeroAngle) {
    out.angle = 0.0;
    out.axis = Vec3::UnitZ();
    out.pure_translation = true;
    return out;
  }
  out.pure_translation = false;
  if (angle < kPi - kNearPi) {
    out.axis = v / (2.0 * std::sin(angle));
    out.axis.normalize();
    return out;
  }

  // Near pi the skew part vanishes; read the axis from the symmetric part
  // (R + Rᵀ)/2 - cos(theta) I = (1 - cos(theta)) w wᵀ.
  const double c = std::cos(angle);
  const Mat3 outer = (0.5 * (r + r.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  int k = 0;
  outer.diagonal().maxCoeff(&k);
  Vec3 axis = outer.col(k) / std::sqrt(std::max(outer(k, k), 1e-300));
  axis.normalize();
  if (axis.dot(v) < 0.0) axis = -axis;
  out.axis = axis;
  return out;
}

Mat3 rodrigues(const Vec3 &axis, double angle) {
  if (angle == 0.0) return Mat3::Identity();
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > 1e-6)
    throw Error(ErrorCode::NonUnitAxis, "rotation axis must have unit length");
  const Mat3 w = skew(axis);
  return Mat3::Identity() + std::sin(angle) * w + (1.0 - std::cos(angle)) * (w * w);
}

Mat3 twist_gain(double angle, const Mat3 &skew_axis) {
  return Mat3::Identity() * angle + (1.0 - std::cos(angle)) * skew_axis +
         (angle - std::sin(angle)) * (skew_axis * skew_axis);
}

Mat3 twist_gain_inverse(double angle, const Mat3 &skew_axis) {
  return Mat3::Identity() / angle - 0.5 * skew_axis +
         (1.0 / angle - 0.5 / std::tan(0.5 * angle)) * (skew_axis * skew_axis);
}

std::array<double, 3> gain_product_coefficients(double angle, double u) {
  const double tu = angle * u;
  const double s = std::sin(tu);
  const double one_minus_c = 2.0 * std::sin(0.5 * tu) * std::sin(0.5 * tu);
  double a, b;
  if (angle < kTaylorSwitch) {
    const double u2 = u * u;
    a = 0.5 * u2 * angle - (u2 + u2 * u2) * angle * angle * angle / 24.0;
    b = u - (u / 12.0 + u2 * u / 6.0) * angle * angle;
  } else {
    const double half_tan = 2.0 * std::tan(0.5 * angle);
    a = one_minus_c / half_tan;
    b = s / half_tan;
  }
  return {u, a - 0.5 * s, u - 0.5 * one_minus_c - b};
}

Mat3 gain_product(double angle, double u, const Mat3 &skew_axis) {
  const auto c = gain_product_coefficients(angle, u);
  return c[0] * Mat3::Identity() + c[1] * skew_axis + c[2] * (skew_axis * skew_axis);
}

Twist log(const RigidTransform &t) {
  const AxisAngle aa = rotation_log(t.rotation());
  Twist out;
  out.axis = aa.axis;
  out.angle = aa.angle;
  out.pure_translation = aa.pure_translation;
  if (aa.pure_translation) {
    out.velocity = t.translation();
  } else {
    out.velocity = twist_gain_inverse(aa.angle, skew(aa.axis)) * t.translation();
  }
  return out;
}

RigidTransform exp(const Twist &twist) {
  if (twist.pure_translation || twist.angle == 0.0)
    return RigidTransform::from_translation(twist.velocity);
  return {rodrigues(twist.axis, twist.angle),
          twist_gain(twist.angle, skew(twist.axis)) * twist.velocity};
}

ScrewPower::ScrewPower(const RigidTransform &base) : translation_(base.translation()) {
  const AxisAngle aa = rotation_log(base.rotation());
  axis_ = aa.axis;
  angle_ = aa.angle;
  skew_ = skew(axis_);
  skew2_ = skew_ * skew_;
}

RigidTransform ScrewPower::operator()(double u) const {
  if (angle_ == 0.0) return RigidTransform::from_translation(u * translation_);
  const double tu = angle_ * u;
  const Mat3 r = Mat3::Identity() + std::sin(tu) * skew_ + (1.0 - std::cos(tu)) * skew2_;
  const auto c = gain_product_coefficients(angle_, u);
  const Vec3 p = c[0] * translation_ + c[1] * (skew_ * translation_) +
                 c[2] * (skew2_ * translation_);
  return {r, p};
}

RigidTransform pow(const RigidTransform &t, double u) { return ScrewPower(t)(u); }

RigidTransform interpolate(const RigidTransform &a, const RigidTransform &b, double u) {
  if (u == 0.0) return a;
  if (u == 1.0) return b;
  return pow(a, 1.0 - u) * pow(b, u);
}

std::string serialize(const RigidTransform &t) {
  std::string out;
  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
    if (!out.empty()) out += ' ';
    out += buf;
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) put(t.rotation()(i, j));
  for (int i = 0; i < 3; ++i) put(t.translation()(i));
  return out;
}

RigidTransform deserialize(std::span<const double, 12> values) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = values[3 * i + j];
  return {r, Vec3(values[9], values[10], values[11])};
}

}  // namespace treeslam
