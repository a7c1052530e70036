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

// Drive-motor current model and the self-rescue supervisor.
//
// The supervisor watches the drive-motor currents. A sustained over-current
// means the wheels are stalled against an obstacle; the supervisor then pulls
// the arm strings to unload the wheels, holds them unloaded while the robot
// climbs over, and lets the arms back out once the currents settle:
//
//   NORMAL -> RETRACTING -> TRAVERSING -> EXTENDING -> NORMAL

#ifndef INPIPE_SUPERVISOR_HPP_
#define INPIPE_SUPERVISOR_HPP_

#include <array>
#include <string_view>

#include <Eigen/Dense>

#include "inpipe/arm_statics.hpp"

namespace inpipe {

struct GearMotor {
  double nominal_torque_Nm = 8.58e-3;
  double reduction_ratio = 270.0;
  double torque_constant_Nm_per_A = 10e-3;
  double efficiency = 1.0;

  // Output-shaft torque limit.
  double capacity_Nm() const;
  // Current drawn when delivering the rated torque.
  double rated_current_A() const;
  void validate() const;
};

// Motor current for a wheel torque: tau / (ratio * k_t).
double motor_current(double wheel_torque_Nm, double reduction_ratio,
                     double torque_constant_Nm_per_A);

struct MotorReading {
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();       // wheel side, N m
  Eigen::Vector3d current = Eigen::Vector3d::Zero();      // A
  Eigen::Vector3d wheel_speed = Eigen::Vector3d::Zero();  // rad/s
};

MotorReading make_reading(const GearMotor& motor, const Eigen::Vector3d& torque,
                          const Eigen::Vector3d& wheel_speed);

enum class SupervisorMode { kNormal, kRetracting, kTraversing, kExtending };

std::string_view mode_name(SupervisorMode mode);

struct SupervisorConfig {
  double trigger_current_A = 0.0;  // i_trig
  double trigger_time_s = 0.2;     // t_trig
  double release_current_A = 0.0;  // i_release
  double release_time_s = 0.5;     // t_release
  double ramp_rate_N_per_s = 20.0; // tension slew limit
  double max_tension_N = 0.0;      // T_max
  // Effective wall force each arm is unloaded to while retracted.
  double retract_target_N = 0.5;
  SpringArmGeometry geometry;

  void validate() const;
};

struct SupervisorState {
  SupervisorMode mode = SupervisorMode::kNormal;
  Eigen::Vector3d tension = Eigen::Vector3d::Zero();  // N
  double timer = 0.0;  // s, time the current phase condition has held
};

// Advances the supervisor by dt. `theta` are the spring angles of the three
// arms; the wall force each arm would apply with no tension is recovered from
// them through the arm statics.
SupervisorState supervisor_step(const SupervisorConfig& config,
                                const SupervisorState& state,
                                const MotorReading& reading,
                                const std::array<double, 3>& theta, double dt);

}  // namespace inpipe

#endif  // INPIPE_SUPERVISOR_HPP_
