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

#include "inpipe/supervisor.hpp"

#include <algorithm>
#include <cmath>

#include "inpipe/error.hpp"

namespace inpipe {
namespace {

// Accumulated dt is compared against thresholds with this slack so that
// N steps of dt fire at exactly N * dt.
constexpr double kTimerSlack = 1e-9;

Eigen::Vector3d unloading_targets(const SupervisorConfig& config,
                                  const std::array<double, 3>& theta) {
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) {
    const NormalForce f = normal_force_at_theta(config.geometry, theta[i]);
    const double wall = f.unbounded ? config.max_tension_N : f.newtons;
    out[i] = std::clamp(wall - config.retract_target_N, 0.0,
                        config.max_tension_N);
  }
  return out;
}

Eigen::Vector3d slew(const Eigen::Vector3d& from, const Eigen::Vector3d& to,
                     double max_step) {
  return from + (to - from).cwiseMax(-max_step).cwiseMin(max_step);
}

}  // namespace

double GearMotor::capacity_Nm() const {
  return gearmotor_capacity(nominal_torque_Nm, reduction_ratio, efficiency);
}

double GearMotor::rated_current_A() const {
  return nominal_torque_Nm / torque_constant_Nm_per_A;
}

void GearMotor::validate() const {
  if (!(nominal_torque_Nm > 0.0 && reduction_ratio > 0.0 &&
        torque_constant_Nm_per_A > 0.0 && efficiency > 0.0 &&
        efficiency <= 1.0)) {
    throw ValidationError(
        "motor torque, gear ratio and torque constant must be positive; "
        "efficiency in (0, 1]");
  }
}

double motor_current(double wheel_torque_Nm, double reduction_ratio,
                     double torque_constant_Nm_per_A) {
  if (!(reduction_ratio > 0.0 && torque_constant_Nm_per_A > 0.0)) {
    throw ValidationError("gear ratio and torque constant must be positive");
  }
  return wheel_torque_Nm / (reduction_ratio * torque_constant_Nm_per_A);
}

MotorReading make_reading(const GearMotor& motor, const Eigen::Vector3d& torque,
                          const Eigen::Vector3d& wheel_speed) {
  MotorReading r;
  r.torque = torque;
  r.wheel_speed = wheel_speed;
  for (int i = 0; i < 3; ++i) {
    r.current[i] = motor_current(torque[i], motor.reduction_ratio,
                                 motor.torque_constant_Nm_per_A);
  }
  return r;
}

std::string_view mode_name(SupervisorMode mode) {
  switch (mode) {
    case SupervisorMode::kNormal: return "NORMAL";
    case SupervisorMode::kRetracting: return "RETRACTING";
    case SupervisorMode::kTraversing: return "TRAVERSING";
    case SupervisorMode::kExtending: return "EXTENDING";
  }
  return "UNKNOWN";
}

void SupervisorConfig::validate() const {
  if (!(trigger_current_A > 0.0 && release_current_A >= 0.0 &&
        trigger_time_s >= 0.0 && release_time_s >= 0.0 &&
        ramp_rate_N_per_s > 0.0 && max_tension_N > 0.0 &&
        retract_target_N >= 0.0)) {
    throw ValidationError(
        "supervisor thresholds must be positive (times and target "
        "non-negative)");
  }
  geometry.validate();
}

SupervisorState supervisor_step(const SupervisorConfig& config,
                                const SupervisorState& state,
                                const MotorReading& reading,
                                const std::array<double, 3>& theta, double dt) {
  if (!(dt > 0.0)) throw ValidationError("supervisor step must be positive");
  const double max_step = config.ramp_rate_N_per_s * dt;
  const double peak_current = reading.current.cwiseAbs().maxCoeff();

  SupervisorState next = state;
  switch (state.mode) {
    case SupervisorMode::kNormal: {
      next.tension.setZero();
      next.timer = peak_current > config.trigger_current_A ? state.timer + dt : 0.0;
      if (next.timer + kTimerSlack >= config.trigger_time_s &&
          peak_current > config.trigger_current_A) {
        next.mode = SupervisorMode::kRetracting;
        next.timer = 0.0;
      }
      break;
    }
    case SupervisorMode::kRetracting: {
      const Eigen::Vector3d target = unloading_targets(config, theta);
      next.tension = slew(state.tension, target, max_step);
      next.timer = state.timer + dt;
      const bool unloaded =
          ((next.tension - target).array().abs() <= 1e-9).all() ||
          (next.tension.array() >= config.max_tension_N - 1e-9).all();
      if (unloaded) {
        next.mode = SupervisorMode::kTraversing;
        next.timer = 0.0;
      }
      break;
    }
    case SupervisorMode::kTraversing: {
      next.tension = slew(state.tension, unloading_targets(config, theta),
                          max_step);
      next.timer = peak_current < config.release_current_A ? state.timer + dt : 0.0;
      if (peak_current < config.release_current_A &&
          next.timer + kTimerSlack >= config.release_time_s) {
        next.mode = SupervisorMode::kExtending;
        next.timer = 0.0;
      }
      break;
    }
    case SupervisorMode::kExtending: {
      next.tension = slew(state.tension, Eigen::Vector3d::Zero(), max_step);
      next.timer = state.timer + dt;
      if ((next.tension.array() <= 0.0).all()) {
        next.tension.setZero();
        next.mode = SupervisorMode::kNormal;
        next.timer = 0.0;
      }
      break;
    }
  }
  next.tension = next.tension.cwiseMax(0.0).cwiseMin(config.max_tension_N);
  return next;
}

}  // namespace inpipe
