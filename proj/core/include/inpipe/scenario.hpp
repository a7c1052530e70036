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

// Closed-loop pipe scenarios: robot assembly, wall interaction, equilibrium,
// controller synthesis and the fixed-step simulation loop.
//
// Frames: world x runs along the pipe axis, the robot climbs toward -x and
// the flow pushes it toward +x. Gravity lies in the x-y plane,
// (W sin(alpha), -W cos(alpha), 0).

#ifndef INPIPE_SCENARIO_HPP_
#define INPIPE_SCENARIO_HPP_

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "inpipe/arm_statics.hpp"
#include "inpipe/dynamics.hpp"
#include "inpipe/lqr.hpp"
#include "inpipe/pipe.hpp"
#include "inpipe/supervisor.hpp"

namespace inpipe {

// All lengths in metres.
struct RobotParams {
  double hub_radius = 0.0308;    // arm joint distance from the hub axis
  double wheel_radius = 0.0496;
  double net_weight_N = 6.6;     // weight in water
  double hemisphere_mass = 0.2;  // kg, each end cap
  double hemisphere_radius = 0.045;
  double box_mass = 0.75;        // electronics and batteries
  Eigen::Vector3d box_size{0.12, 0.08, 0.08};
  // Box centre below the hub axis; gives the hanging roll pendulum.
  double box_drop = 0.008;
  double arm_rod_radius = 0.004;
  GearMotor motor;
  // Wall compliance per wheel: radial spring-damper and tangential scrub.
  double wall_stiffness = 5000.0;  // N/m
  double wall_damping = 50.0;      // N s/m
  double scrub_damping = 2.0;      // N s/m

  void validate() const;
};

struct ControllerParams {
  Eigen::VectorXd q_diag;  // 12
  Eigen::VectorXd r_diag;  // 3
  SupervisorConfig supervisor;
  bool supervisor_enabled = true;
  double anchor_lever = 0.082;  // m
  // Largest distance the moving reference may run ahead of the body.
  double max_lead = 0.1;

  ControllerParams();
  void validate() const;
};

struct SimParams {
  double dt = 1e-3;
  double duration = 10.0;
  int decimation = 10;
  double cruise_speed = 0.0;  // m/s, toward -x
  double start_x = 0.0;
  // Time theta may stay outside the contact interval in NORMAL mode before
  // the run is flagged as failed.
  double contact_loss_timeout = 1.0;

  void validate() const;
};

struct ScenarioConfig {
  RobotParams robot;
  SpringArmGeometry spring;
  PipeProfile pipe;
  DragModel drag;
  ControllerParams controller;
  SimParams sim;

  void validate() const;
};

// Default rope tension limit: rescue gear-motor capacity over the anchor
// lever.
double default_max_tension(const GearMotor& motor, double anchor_lever);

// Rigid assembly of end caps, electronics box and the three arms at the
// nominal pipe radius.
RobotModel build_robot(const ScenarioConfig& config);

struct ArmContact {
  double station = 0.0;      // world x of the wheel
  double pipe_radius = 0.0;  // at the station
  double beta = 0.0;
  double theta = 0.0;
  double spring_normal = 0.0;  // arm statics F_N
  double effective = 0.0;      // F_N - T
  double wall_normal = 0.0;    // total wall reaction, >= 0
  bool lifted = false;
};

struct HarnessEvaluation {
  Vector6d generalized = Vector6d::Zero();
  std::array<ArmContact, 3> arms{};
  double drag_N = 0.0;
};

// Generalized forces on the robot in the pipe for given wheel torques and
// rope tensions.
HarnessEvaluation evaluate_harness(const ScenarioConfig& config,
                                   const RobotModel& model,
                                   const PipeProfile& pipe,
                                   const DynState& state,
                                   const Eigen::Vector3d& torque,
                                   const Eigen::Vector3d& tension);

struct Equilibrium {
  DynState state;
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
  double residual = 0.0;  // max |qdd|
};

// Steady cruise at `speed` toward -x through axial position x in a pipe
// without obstacles. Solves for (y, z, roll, tau_1..3) with pitch = yaw = 0.
Equilibrium find_equilibrium(const ScenarioConfig& config,
                             const RobotModel& model, double x, double speed);

struct ControllerDesign {
  Equilibrium equilibrium;
  LinearizedPlant plant;
  LqrGain gain;
};

ControllerDesign design_controller(const ScenarioConfig& config,
                                   const RobotModel& model);

struct TrajectoryRow {
  double t = 0.0;
  EulerPose q;
  EulerRates qdot;
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
  Eigen::Vector3d current = Eigen::Vector3d::Zero();
  Eigen::Vector3d tension = Eigen::Vector3d::Zero();
  SupervisorMode mode = SupervisorMode::kNormal;
  std::array<double, 3> theta{};
  std::array<bool, 3> contact{};
};

struct ScenarioSummary {
  ContactInterval interval;
  double max_tension_limit = 0.0;
  bool failure_flagged = false;
  double failure_time = -1.0;
  // Mode entered at each transition, starting with the initial mode.
  std::vector<SupervisorMode> modes;
  double min_tension = 0.0;
  double max_tension = 0.0;
  bool saturated = false;
  bool traversed = true;  // every wheel past every obstacle
  bool final_in_interval = false;
  std::array<double, 3> final_theta{};
  double final_x = 0.0;
  double max_settled_acceleration = 0.0;  // max |qdd| over the last second
};

struct ScenarioResult {
  std::vector<TrajectoryRow> log;
  ScenarioSummary summary;
};

// Throws SimulationError (with the time stamp in the message) on a pitch
// singularity or a non-positive-definite mass matrix.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace inpipe

#endif  // INPIPE_SCENARIO_HPP_
