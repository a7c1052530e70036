// Copyright 2026 The InPipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "inpipe/rigid_body.hpp"

#include <cmath>
#include <sstream>

#include "inpipe/error.hpp"

namespace inpipe {

Vector6d EulerPose::as_vector() const {
  Vector6d v;
  v << x, y, z, roll, pitch, yaw;
  return v;
}

EulerPose EulerPose::from_vector(const Vector6d& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

Vector6d EulerRates::as_vector() const {
  Vector6d v;
  v << xd, yd, zd, roll_rate, pitch_rate, yaw_rate;
  return v;
}

EulerRates EulerRates::from_vector(const Vector6d& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

RotationMatrix::RotationMatrix(const Eigen::Matrix3d& m) : m_(m) {
  constexpr double kTol = 1e-9;
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).norm();
  const double det = m.determinant();
  if (!m.allFinite() || ortho > kTol || std::abs(det - 1.0) > kTol) {
    std::ostringstream msg;
    msg << "not a proper rotation: |R^T R - I| = " << ortho
        << ", det = " << det;
    throw ValidationError(msg.str());
  }
}

RotationMatrix RotationMatrix::transpose() const {
  return RotationMatrix(m_.transpose(), Unchecked{});
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& other) const {
  return RotationMatrix(m_ * other.m_, Unchecked{});
}

HomogeneousTransform HomogeneousTransform::body_to_world(const EulerPose& pose) {
  return {rotation_matrix(pose).transpose(), pose.position()};
}

HomogeneousTransform HomogeneousTransform::inverse() const {
  const RotationMatrix rt = rotation.transpose();
  return {rt, -(rt * translation)};
}

Eigen::Matrix4d HomogeneousTransform::as_matrix() const {
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t.topLeftCorner<3, 3>() = rotation.matrix();
  t.topRightCorner<3, 1>() = translation;
  return t;
}

void check_pitch(double pitch) {
  if (!std::isfinite(pitch) || std::abs(pitch) >= kPitchLimit) {
    std::ostringstream msg;
    msg << "pitch " << pitch << " rad is at the Euler 1-2-3 singularity";
    throw SingularPitchError(msg.str());
  }
}

RotationMatrix rotation_matrix(const EulerPose& pose) {
  check_pitch(pose.pitch);
  const double cr = std::cos(pose.roll), sr = std::sin(pose.roll);
  const double cp = std::cos(pose.pitch), sp = std::sin(pose.pitch);
  const double cy = std::cos(pose.yaw), sy = std::sin(pose.yaw);
  Eigen::Matrix3d r;
  r << cy * cp, sy * cr + cy * sp * sr, sy * sr - cy * sp * cr,
      -sy * cp, cy * cr - sy * sp * sr, cy * sr + sy * sp * cr,
      sp, -cp * sr, cp * cr;
  return RotationMatrix(r, RotationMatrix::Unchecked{});
}

Eigen::Matrix3d angular_rate_map(const EulerPose& pose) {
  check_pitch(pose.pitch);
  const double cp = std::cos(pose.pitch), sp = std::sin(pose.pitch);
  const double cy = std::cos(pose.yaw), sy = std::sin(pose.yaw);
  // Columns: roll axis, once-rotated pitch axis, twice-rotated yaw axis, all
  // expressed in the body frame.
  Eigen::Matrix3d e;
  e << cp * cy, sy, 0.0,
      -cp * sy, cy, 0.0,
      sp, 0.0, 1.0;
  return e;
}

Eigen::Vector3d angular_velocity(const EulerPose& pose, const EulerRates& rates) {
  return angular_rate_map(pose) * rates.angular();
}

Eigen::Vector3d transform_point(const HomogeneousTransform& transform,
                                const Eigen::Vector3d& p) {
  return transform.rotation * p + transform.translation;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(),
      v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  return 0.5 * Eigen::Vector3d(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0),
                               m(1, 0) - m(0, 1));
}

}  // namespace inpipe
