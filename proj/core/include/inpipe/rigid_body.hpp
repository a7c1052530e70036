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

// Euler 1-2-3 kinematics for the robot body.
//
// Frames: the world frame has x along the pipe axis and y vertical. A pose
// rotates the body by roll about x, then pitch about the once-rotated y, then
// yaw about the twice-rotated z. rotation_matrix() returns the world->body
// matrix; its transpose maps body vectors into the world frame.

#ifndef INPIPE_RIGID_BODY_HPP_
#define INPIPE_RIGID_BODY_HPP_

#include <numbers>

#include <Eigen/Dense>

namespace inpipe {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// |pitch| at or beyond this is rejected.
inline constexpr double kPitchLimit = std::numbers::pi / 2.0 - 1e-9;

// Generalized coordinates: position in meters, angles in radians.
struct EulerPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Eigen::Vector3d position() const { return {x, y, z}; }
  Eigen::Vector3d angles() const { return {roll, pitch, yaw}; }
  Vector6d as_vector() const;
  static EulerPose from_vector(const Vector6d& v);
};

// Generalized velocities matching EulerPose, in m/s and rad/s.
struct EulerRates {
  double xd = 0.0;
  double yd = 0.0;
  double zd = 0.0;
  double roll_rate = 0.0;
  double pitch_rate = 0.0;
  double yaw_rate = 0.0;

  Eigen::Vector3d linear() const { return {xd, yd, zd}; }
  Eigen::Vector3d angular() const { return {roll_rate, pitch_rate, yaw_rate}; }
  Vector6d as_vector() const;
  static EulerRates from_vector(const Vector6d& v);
};

// Proper orthonormal 3x3 matrix. Construction from an arbitrary matrix
// checks orthonormality and det = +1.
class RotationMatrix {
 public:
  RotationMatrix() : m_(Eigen::Matrix3d::Identity()) {}
  explicit RotationMatrix(const Eigen::Matrix3d& m);

  static RotationMatrix identity() { return RotationMatrix(); }

  const Eigen::Matrix3d& matrix() const { return m_; }
  RotationMatrix transpose() const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
  RotationMatrix operator*(const RotationMatrix& other) const;

 private:
  struct Unchecked {};
  RotationMatrix(const Eigen::Matrix3d& m, Unchecked) : m_(m) {}
  friend RotationMatrix rotation_matrix(const EulerPose& pose);

  Eigen::Matrix3d m_;
};

// Rigid transform; the bottom row [0 0 0 1] of the 4x4 form is implicit.
struct HomogeneousTransform {
  RotationMatrix rotation;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  // Body->world transform of a pose: rotation is the transpose of
  // rotation_matrix(pose), translation is the pose position.
  static HomogeneousTransform body_to_world(const EulerPose& pose);

  HomogeneousTransform inverse() const;
  Eigen::Matrix4d as_matrix() const;
};

// Throws SingularPitchError when |pitch| >= kPitchLimit.
void check_pitch(double pitch);

// World->body rotation of the pose.
RotationMatrix rotation_matrix(const EulerPose& pose);

// Matrix E(q) with omega_body = E(q) * (roll_rate, pitch_rate, yaw_rate).
Eigen::Matrix3d angular_rate_map(const EulerPose& pose);

// Body-frame angular velocity.
//
// The second component is cos(yaw) * pitch_rate - cos(pitch) sin(yaw) *
// roll_rate. Some printed forms of this map carry sin(yaw) on the pitch_rate
// term; re-deriving from the unit vectors of the intermediate frames gives
// cos(yaw), which is what the finite-difference tests confirm.
Eigen::Vector3d angular_velocity(const EulerPose& pose, const EulerRates& rates);

Eigen::Vector3d transform_point(const HomogeneousTransform& transform,
                                const Eigen::Vector3d& p);

Eigen::Matrix3d skew(const Eigen::Vector3d& v);
// Inverse of skew() applied to the skew-symmetric part of m.
Eigen::Vector3d vee(const Eigen::Matrix3d& m);

}  // namespace inpipe

#endif  // INPIPE_RIGID_BODY_HPP_
