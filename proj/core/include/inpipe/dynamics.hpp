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

// Six-coordinate Lagrangian model of the robot body.
//
// The body origin is the composite center of mass. Generalized coordinates
// are the world position of the origin and the Euler 1-2-3 angles; the
// kinetic energy is
//
//   T = 1/2 w^T I_G w + 1/2 m |v|^2,   w = E(q) * angle rates,
//
// and the potential is the weight force acting at the CoM reference point.
// Equations of motion
//
//   M(q) qdd + dM/dt qd - dT/dq + dU/dq = Q
//
// are assembled numerically: M by polarization of T on basis rate vectors,
// the remaining terms by central differences. External loads are mapped to Q
// with point Jacobians (virtual work).

#ifndef INPIPE_DYNAMICS_HPP_
#define INPIPE_DYNAMICS_HPP_

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inpipe/rigid_body.hpp"

namespace inpipe {

inline constexpr double kGravity = 9.81;  // m/s^2

enum class Shape { kHemisphere, kArm, kBox, kPoint };

// One rigid piece of the robot. `orientation` maps the principal frame into
// the body frame, so the piece contributes
//   orientation * local_inertia * orientation^T
// about its own CoM.
struct BodyComponent {
  std::string name;
  Shape shape = Shape::kPoint;
  double mass = 0.0;                                           // kg
  Eigen::Matrix3d local_inertia = Eigen::Matrix3d::Zero();     // kg m^2
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();            // m, from CoM
  // Shape dimensions (m) kept for sampling-based checks:
  //   hemisphere: {radius, +-1 dome direction along principal x, 0}
  //   arm:        {radius, length, 0}, axis along principal x
  //   box:        {length x, width y, height z}
  Eigen::Vector3d dims = Eigen::Vector3d::Zero();
};

// Solid hemisphere; the principal x axis is the symmetry axis. `center` is the
// CoM position in the assembly frame.
BodyComponent make_hemisphere(std::string name, double mass, double radius,
                              const Eigen::Matrix3d& orientation,
                              const Eigen::Vector3d& center);
// Solid cylindrical rod along principal x.
BodyComponent make_arm(std::string name, double mass, double radius,
                       double length, const Eigen::Matrix3d& orientation,
                       const Eigen::Vector3d& center);
BodyComponent make_box(std::string name, double mass,
                       const Eigen::Vector3d& size,
                       const Eigen::Matrix3d& orientation,
                       const Eigen::Vector3d& center);
BodyComponent make_point_mass(std::string name, double mass,
                              const Eigen::Vector3d& center);

// Shifts offsets so that sum(m_i d_i) = 0 and returns the removed CoM.
Eigen::Vector3d center_components(std::vector<BodyComponent>& components);

struct MassProperties {
  double mass = 0.0;
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // about the CoM
};

// Parallel-axis sum; the offset term is m (|d|^2 I - d d^T). Throws
// NotPositiveDefiniteError when the result is not positive definite.
MassProperties composite_inertia(std::span<const BodyComponent> components);

struct RobotModel {
  std::vector<BodyComponent> components;
  double mass = 0.0;
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Identity();
  // Point carrying the weight, body frame.
  Eigen::Vector3d com_reference = Eigen::Vector3d::Zero();
  // Weight force in the world frame (N). Zero disables gravity.
  Eigen::Vector3d weight = Eigen::Vector3d::Zero();
  double wheel_radius = 0.05;  // m
  std::array<double, 3> azimuths{};
  // Axis of the arm star in the body frame: the wheel contacts sit at
  // hub_center + (0, r cos(mu_i), r sin(mu_i)).
  Eigen::Vector3d hub_center = Eigen::Vector3d::Zero();

  // Mass and inertia from the components; weight = m g along -y.
  static RobotModel from_components(std::vector<BodyComponent> components,
                                    double wheel_radius);
};

struct DynState {
  EulerPose q;
  EulerRates qdot;
  double time = 0.0;
};

// Force applied at a body-fixed point, given in world coordinates.
struct PointLoad {
  Eigen::Vector3d body_point = Eigen::Vector3d::Zero();
  Eigen::Vector3d world_force = Eigen::Vector3d::Zero();
};

struct ForceSet {
  double drag = 0.0;                                   // N, along body +x
  Eigen::Vector3d spring = Eigen::Vector3d::Zero();    // N, per arm
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();    // N m, per wheel
  Eigen::Vector3d tension = Eigen::Vector3d::Zero();   // N, per arm, >= 0
  std::vector<PointLoad> extra;

  void validate() const;
};

// Body-frame radius of each wheel/wall contact from the hub axis.
struct WheelContacts {
  std::array<double, 3> radius{};
};

// Outward radial unit vector of arm i in the body frame.
Eigen::Vector3d arm_direction(const RobotModel& model, int i);
Eigen::Vector3d contact_point(const RobotModel& model,
                              const WheelContacts& contacts, int i);

double kinetic_energy(const RobotModel& model, const DynState& state);
double potential_energy(const RobotModel& model, const EulerPose& q);

// Throws NotPositiveDefiniteError if M(q) is not positive definite.
Matrix6d mass_matrix(const RobotModel& model, const EulerPose& q);

// d(point world position)/d(qdot), 3x6.
Eigen::Matrix<double, 3, 6> point_jacobian(const EulerPose& q,
                                           const Eigen::Vector3d& body_point);

// Q = sum_i J_i^T f_i over drag (at the CoM, body +x), wall normals
// (-(spring - tension) along the arm direction), wheel traction
// (torque / wheel_radius along body +x) and the extra point loads.
Vector6d generalized_forces(const RobotModel& model, const EulerPose& q,
                            const ForceSet& forces,
                            const WheelContacts& contacts);

struct SelfRescueResult {
  Eigen::Vector3d effective = Eigen::Vector3d::Zero();
  bool contact_lost = false;  // some effective normal went negative
};

// Effective per-arm normal magnitude F_s - T. Throws ValidationError for
// negative tension.
SelfRescueResult apply_self_rescue(const Eigen::Vector3d& spring,
                                   const Eigen::Vector3d& tension);

// dM/dt qd - dT/dq + dU/dq.
Vector6d bias_forces(const RobotModel& model, const DynState& state);

Vector6d forward_dynamics(const RobotModel& model, const DynState& state,
                          const ForceSet& forces,
                          const WheelContacts& contacts);

// Generalized forces as a function of the (intermediate) state.
using GeneralizedForceFn = std::function<Vector6d(const DynState&)>;

Vector6d forward_dynamics(const RobotModel& model, const DynState& state,
                          const GeneralizedForceFn& forces);

// Classical RK4 step; loads held constant over the step.
DynState step(const RobotModel& model, const DynState& state,
              const ForceSet& forces, const WheelContacts& contacts,
              double dt);

// Classical RK4 step; loads re-evaluated at every stage.
DynState step(const RobotModel& model, const DynState& state,
              const GeneralizedForceFn& forces, double dt);

}  // namespace inpipe

#endif  // INPIPE_DYNAMICS_HPP_
