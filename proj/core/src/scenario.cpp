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

#include "inpipe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inpipe/error.hpp"
#include "inpipe/rigid_body.hpp"

namespace inpipe {
namespace {

constexpr double kPi = std::numbers::pi;
// Arms are kept off the perpendicular pose, where F_N has a pole.
constexpr double kMaxReachFraction = 0.9998;  // sin(88.85 deg)

double arm_length_m(const SpringArmGeometry& g) { return g.arm_mm * 1e-3; }

double reach(const ScenarioConfig& c, double pipe_radius) {
  return pipe_radius - c.robot.hub_radius - c.robot.wheel_radius;
}

double beta_for_reach(const SpringArmGeometry& g, double r) {
  const double s = std::clamp(r / arm_length_m(g), 1e-6, kMaxReachFraction);
  return std::asin(s);
}

Eigen::Matrix3d body_to_world(const EulerPose& q) {
  return rotation_matrix(q).transpose().matrix();
}

double signed_drag(const DragModel& d, double upstream_speed) {
  // Moving downstream the flow still pushes; the quadratic term flips sign so
  // the force stays smooth through zero speed.
  if (upstream_speed >= 0.0) return drag_force(d, upstream_speed);
  return d.c0 - d.c2 * upstream_speed * upstream_speed;
}

PipeProfile without_obstacles(const PipeProfile& p) {
  PipeProfile flat = p;
  flat.obstacles.clear();
  return flat;
}

Eigen::Vector3d weight_vector(const ScenarioConfig& c) {
  const double w = c.robot.net_weight_N;
  return {w * std::sin(c.pipe.inclination), -w * std::cos(c.pipe.inclination),
          0.0};
}

[[noreturn]] void rethrow_at(double t) {
  auto stamp = [t](const std::exception& e) {
    std::ostringstream msg;
    msg << "simulation aborted at t = " << t << " s: " << e.what();
    return msg.str();
  };
  try {
    throw;
  } catch (const SingularPitchError& e) {
    throw SingularPitchError(stamp(e));
  } catch (const NotPositiveDefiniteError& e) {
    throw NotPositiveDefiniteError(stamp(e));
  } catch (const SimulationError& e) {
    throw SimulationError(stamp(e));
  }
}

}  // namespace

void RobotParams::validate() const {
  if (!(hub_radius > 0.0 && wheel_radius > 0.0 && net_weight_N >= 0.0 &&
        hemisphere_mass > 0.0 && hemisphere_radius > 0.0 && box_mass > 0.0 &&
        (box_size.array() > 0.0).all() && arm_rod_radius > 0.0)) {
    throw ValidationError(
        "robot dimensions and masses must be positive (net weight "
        "non-negative)");
  }
  if (!(wall_stiffness > 0.0 && wall_damping >= 0.0 && scrub_damping >= 0.0)) {
    throw ValidationError(
        "wall stiffness must be positive and damping non-negative");
  }
  motor.validate();
}

ControllerParams::ControllerParams()
    : q_diag(Eigen::VectorXd::Ones(12)), r_diag(Eigen::VectorXd::Ones(3)) {
  q_diag.head(6).setConstant(10.0);
  const GearMotor motor;
  supervisor.trigger_current_A = 0.8 * motor.rated_current_A();
  supervisor.release_current_A = 0.4 * motor.rated_current_A();
  supervisor.max_tension_N = default_max_tension(motor, anchor_lever);
}

void ControllerParams::validate() const {
  if (q_diag.size() != 12 || (q_diag.array() < 0.0).any()) {
    throw ValidationError("q_diag needs 12 non-negative entries");
  }
  if (r_diag.size() != 3 || (r_diag.array() <= 0.0).any()) {
    throw ValidationError("r_diag needs 3 positive entries");
  }
  if (!(anchor_lever > 0.0 && max_lead > 0.0)) {
    throw ValidationError("anchor lever and reference lead must be positive");
  }
  supervisor.validate();
}

void SimParams::validate() const {
  if (!(dt > 0.0 && dt <= 0.01)) throw ValidationError("dt must be in (0, 0.01] s");
  if (!(duration > 0.0)) throw ValidationError("duration must be positive");
  if (decimation < 1) throw ValidationError("decimation must be >= 1");
  if (!(cruise_speed >= 0.0)) {
    throw ValidationError("cruise speed must be non-negative");
  }
  if (!(contact_loss_timeout > 0.0)) {
    throw ValidationError("contact loss timeout must be positive");
  }
}

void ScenarioConfig::validate() const {
  robot.validate();
  spring.validate();
  pipe.validate();
  drag.validate();
  controller.validate();
  sim.validate();
  const double a = arm_length_m(spring);
  const double nominal = reach(*this, pipe.nominal_radius);
  if (!(nominal > 0.0 && nominal < kMaxReachFraction * a)) {
    std::ostringstream msg;
    msg << "pipe radius leaves an arm reach of " << nominal * 1e3
        << " mm; it must lie in (0, " << kMaxReachFraction * spring.arm_mm
        << ") mm";
    throw ValidationError(msg.str());
  }
  double lowest = pipe.nominal_radius;
  for (const Obstacle& o : pipe.obstacles) lowest -= o.height;
  if (!(reach(*this, lowest) > 0.0)) {
    throw ValidationError("obstacles leave no room for the folded arms");
  }
}

double default_max_tension(const GearMotor& motor, double anchor_lever) {
  if (!(anchor_lever > 0.0)) throw ValidationError("anchor lever must be positive");
  return motor.capacity_Nm() / anchor_lever;
}

RobotModel build_robot(const ScenarioConfig& config) {
  const RobotParams& rp = config.robot;
  const double a = arm_length_m(config.spring);
  const double beta = beta_for_reach(config.spring, reach(config, config.pipe.nominal_radius));
  const double arm_mass = config.spring.arm_weight_N / kGravity;

  std::vector<BodyComponent> parts;
  const double cap_x = 0.5 * rp.box_size.x() + 3.0 * rp.hemisphere_radius / 8.0;
  parts.push_back(make_hemisphere("front_cap", rp.hemisphere_mass,
                                  rp.hemisphere_radius,
                                  Eigen::Matrix3d::Identity(), {cap_x, 0, 0}));
  parts.push_back(make_hemisphere("rear_cap", rp.hemisphere_mass,
                                  rp.hemisphere_radius,
                                  Eigen::Vector3d(-1, -1, 1).asDiagonal(),
                                  {-cap_x, 0, 0}));
  parts.push_back(make_box("electronics", rp.box_mass, rp.box_size,
                           Eigen::Matrix3d::Identity(), {0, -rp.box_drop, 0}));
  // Joints sit behind the wheel plane so that the wheels touch at x = 0.
  const double joint_x = -a * std::cos(beta);
  for (int i = 0; i < 3; ++i) {
    const double mu = 2.0 * kPi / 3.0 * i;
    const Eigen::Vector3d radial(0.0, std::cos(mu), std::sin(mu));
    const Eigen::Vector3d tangent(0.0, -std::sin(mu), std::cos(mu));
    const Eigen::Vector3d along =
        std::cos(beta) * Eigen::Vector3d::UnitX() + std::sin(beta) * radial;
    const Eigen::Vector3d normal =
        -std::sin(beta) * Eigen::Vector3d::UnitX() + std::cos(beta) * radial;
    Eigen::Matrix3d frame;
    frame << along, normal, tangent;
    const Eigen::Vector3d joint =
        joint_x * Eigen::Vector3d::UnitX() + rp.hub_radius * radial;
    parts.push_back(make_arm("arm" + std::to_string(i + 1), arm_mass,
                             rp.arm_rod_radius, a, frame,
                             joint + 0.5 * a * along));
  }
  const Eigen::Vector3d com = center_components(parts);
  RobotModel model = RobotModel::from_components(std::move(parts), rp.wheel_radius);
  model.hub_center = -com;
  model.weight = weight_vector(config);
  return model;
}

HarnessEvaluation evaluate_harness(const ScenarioConfig& config,
                                   const RobotModel& model,
                                   const PipeProfile& pipe,
                                   const DynState& state,
                                   const Eigen::Vector3d& torque,
                                   const Eigen::Vector3d& tension) {
  const RobotParams& rp = config.robot;
  const Eigen::Matrix3d c = body_to_world(state.q);
  const Eigen::Vector3d origin = state.q.position();
  const Vector6d rates = state.qdot.as_vector();

  HarnessEvaluation out;
  ForceSet fs;
  out.drag_N = signed_drag(config.drag, -state.qdot.xd);
  fs.drag = out.drag_N;
  fs.torque = torque;
  fs.tension = tension;
  WheelContacts wc;

  std::array<Eigen::Vector3d, 3> body_points;
  for (int i = 0; i < 3; ++i) {
    ArmContact& arm = out.arms[i];
    const Eigen::Vector3d n = arm_direction(model, i);
    const Eigen::Vector3d probe = model.hub_center + pipe.nominal_radius * n;
    arm.station = (origin + c * probe).x();
    arm.pipe_radius = pipe.radius_at(arm.station);
    wc.radius[i] = arm.pipe_radius;
    arm.beta = beta_for_reach(config.spring, reach(config, arm.pipe_radius));
    arm.theta = theta_from_beta(config.spring, arm.beta);
    arm.spring_normal = normal_force(config.spring, arm.beta).newtons;
    fs.spring[i] = arm.spring_normal;
    body_points[i] = model.hub_center + arm.pipe_radius * n;
  }

  for (int i = 0; i < 3; ++i) {
    ArmContact& arm = out.arms[i];
    const Eigen::Vector3d& pb = body_points[i];
    const Eigen::Vector3d pw = origin + c * pb;
    const Eigen::Vector3d vw = point_jacobian(state.q, pb) * rates;
    const Eigen::Vector3d radial_vec(0.0, pw.y(), pw.z());
    const double dist = radial_vec.norm();
    const Eigen::Vector3d radial = radial_vec / dist;
    const Eigen::Vector3d tangent(0.0, -radial.z(), radial.y());

    const double support = rp.wall_stiffness * (dist - arm.pipe_radius) +
                           rp.wall_damping * radial.dot(vw);
    arm.effective = arm.spring_normal - tension[i];
    double total = arm.effective + support;
    if (total < 0.0) {
      // Wheel off the wall: undo the arm push and the drive traction.
      arm.lifted = true;
      total = 0.0;
      fs.extra.push_back({pb, arm.effective * (c * arm_direction(model, i))});
      fs.extra.push_back({pb, -torque[i] / rp.wheel_radius * c.col(0)});
    } else {
      fs.extra.push_back({pb, -support * radial});
    }
    arm.wall_normal = total;
    // Axial reaction of a sloped wall.
    const double slope = pipe.slope_at(arm.station);
    fs.extra.push_back({pb, total * slope * Eigen::Vector3d::UnitX()});
    fs.extra.push_back({pb, -rp.scrub_damping * tangent.dot(vw) * tangent});
  }
  out.generalized = generalized_forces(model, state.q, fs, wc);
  return out;
}

Equilibrium find_equilibrium(const ScenarioConfig& config,
                             const RobotModel& model, double x, double speed) {
  const PipeProfile flat = without_obstacles(config.pipe);
  using Vector6 = Eigen::Matrix<double, 6, 1>;
  auto make_state = [&](const Vector6& z) {
    DynState s;
    s.q = {x, z[0], z[1], z[2], 0.0, 0.0};
    s.qdot.xd = -speed;
    return s;
  };
  auto residual = [&](const Vector6& z) -> Vector6 {
    const DynState s = make_state(z);
    const Eigen::Vector3d tau = z.tail<3>();
    return forward_dynamics(model, s, [&](const DynState& st) {
      return evaluate_harness(config, model, flat, st, tau,
                              Eigen::Vector3d::Zero())
          .generalized;
    });
  };

  const double sin_a = std::sin(config.pipe.inclination);
  const double tau0 = -config.robot.wheel_radius *
                      (signed_drag(config.drag, speed) +
                       config.robot.net_weight_N * sin_a) / 3.0;
  Vector6 z;
  z << -model.hub_center.y(), -model.hub_center.z(), 0.0, tau0, tau0, tau0;
  Vector6 r = residual(z);
  constexpr double kTol = 1e-11;
  for (int iter = 0; iter < 60 && r.cwiseAbs().maxCoeff() > kTol; ++iter) {
    Eigen::Matrix<double, 6, 6> jac;
    for (int j = 0; j < 6; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(z[j]));
      Vector6 zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      jac.col(j) = (residual(zp) - residual(zm)) / (2.0 * h);
    }
    const Vector6 dz = jac.fullPivLu().solve(-r);
    // Backtracking keeps the first iterations inside the wall.
    double scale = 1.0;
    Vector6 trial = z + dz;
    Vector6 rt = residual(trial);
    while (rt.norm() > r.norm() && scale > 1e-4) {
      scale *= 0.5;
      trial = z + scale * dz;
      rt = residual(trial);
    }
    z = trial;
    r = rt;
  }
  const double res = r.cwiseAbs().maxCoeff();
  if (!(res <= 1e-8)) {
    std::ostringstream msg;
    msg << "no steady equilibrium found (residual " << res << " )";
    throw SimulationError(msg.str());
  }
  return {make_state(z), z.tail<3>(), res};
}

ControllerDesign design_controller(const ScenarioConfig& config,
                                   const RobotModel& model) {
  ControllerDesign d;
  d.equilibrium =
      find_equilibrium(config, model, config.sim.start_x, config.sim.cruise_speed);
  const PipeProfile flat = without_obstacles(config.pipe);
  const PlantFunction plant = [&](const DynState& s, const Eigen::VectorXd& u) {
    const Eigen::Vector3d tau = u;
    return forward_dynamics(model, s, [&](const DynState& st) {
      return evaluate_harness(config, model, flat, st, tau,
                              Eigen::Vector3d::Zero())
          .generalized;
    });
  };
  d.plant = linearize(plant, d.equilibrium.state, d.equilibrium.torque);
  d.gain = lqr_gain(d.plant, config.controller.q_diag.asDiagonal().toDenseMatrix(),
                    config.controller.r_diag.asDiagonal().toDenseMatrix());
  return d;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const RobotModel model = build_robot(config);
  const ControllerDesign design = design_controller(config, model);
  const SimParams& sim = config.sim;

  SupervisorConfig sup_cfg = config.controller.supervisor;
  sup_cfg.geometry = config.spring;
  const GearMotor& motor = config.robot.motor;
  const double limit = motor.capacity_Nm();

  ScenarioResult result;
  ScenarioSummary& sum = result.summary;
  sum.interval = contact_interval(config.spring);
  sum.max_tension_limit = sup_cfg.max_tension_N;
  sum.modes.push_back(SupervisorMode::kNormal);
  sum.min_tension = std::numeric_limits<double>::infinity();
  sum.max_tension = -std::numeric_limits<double>::infinity();

  DynState state = design.equilibrium.state;
  state.time = 0.0;
  SupervisorState sup;
  Eigen::Vector3d torque = design.equilibrium.torque;
  double x_ref = state.q.x;
  double outside_time = 0.0;
  const long steps = std::lround(sim.duration / sim.dt);
  const long settle_from = steps - std::lround(1.0 / sim.dt);

  for (long n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * sim.dt;
    state.time = t;
    try {
      // Sense: currents of the torques applied over the last step.
      const HarnessEvaluation sensed = evaluate_harness(
          config, model, config.pipe, state, torque, sup.tension);
      std::array<double, 3> theta{};
      for (int i = 0; i < 3; ++i) theta[i] = sensed.arms[i].theta;
      const Eigen::Matrix3d c = body_to_world(state.q);
      const double forward_speed = (c.transpose() * state.qdot.linear()).x();
      const MotorReading reading = make_reading(
          motor, torque,
          Eigen::Vector3d::Constant(forward_speed / config.robot.wheel_radius));
      if (config.controller.supervisor_enabled) {
        sup = supervisor_step(sup_cfg, sup, reading, theta, sim.dt);
        if (sup.mode != sum.modes.back()) sum.modes.push_back(sup.mode);
      }

      // Reference runs ahead at cruise speed but never further than max_lead.
      x_ref = std::clamp(x_ref - sim.cruise_speed * sim.dt,
                         state.q.x - config.controller.max_lead,
                         state.q.x + config.controller.max_lead);
      Eigen::VectorXd x_eq = design.plant.x_eq;
      x_eq[0] = x_ref;
      const StabilizerCommand cmd = stabilizer_command(
          design.gain.K, pack_state(state), x_eq, design.plant.u_eq, limit);
      torque = cmd.torque;
      sum.saturated = sum.saturated || cmd.saturated;

      const HarnessEvaluation applied = evaluate_harness(
          config, model, config.pipe, state, torque, sup.tension);
      TrajectoryRow row;
      row.t = t;
      row.q = state.q;
      row.qdot = state.qdot;
      row.torque = torque;
      row.current = make_reading(motor, torque, reading.wheel_speed).current;
      row.tension = sup.tension;
      row.mode = sup.mode;
      bool all_in = true;
      for (int i = 0; i < 3; ++i) {
        row.theta[i] = applied.arms[i].theta;
        row.contact[i] =
            sum.interval.contains(row.theta[i]) && !applied.arms[i].lifted;
        all_in = all_in && row.contact[i];
      }
      sum.min_tension = std::min(sum.min_tension, sup.tension.minCoeff());
      sum.max_tension = std::max(sum.max_tension, sup.tension.maxCoeff());

      if (sup.mode == SupervisorMode::kNormal && !all_in) {
        outside_time += sim.dt;
        if (!sum.failure_flagged &&
            outside_time >= sim.contact_loss_timeout - 1e-9) {
          sum.failure_flagged = true;
          sum.failure_time = t;
        }
      } else {
        outside_time = 0.0;
      }
      if (n >= settle_from) {
        const Vector6d qdd = forward_dynamics(
            model, state, [&](const DynState&) { return applied.generalized; });
        sum.max_settled_acceleration =
            std::max(sum.max_settled_acceleration, qdd.cwiseAbs().maxCoeff());
      }
      if (n % sim.decimation == 0) result.log.push_back(row);
      if (n == steps) {
        sum.final_theta = row.theta;
        sum.final_in_interval = all_in;
        for (const Obstacle& o : config.pipe.obstacles) {
          for (const ArmContact& arm : applied.arms) {
            if (!(arm.station < o.position)) sum.traversed = false;
          }
        }
        break;
      }

      const Eigen::Vector3d tension = sup.tension;
      state = step(model, state,
                   [&](const DynState& s) {
                     return evaluate_harness(config, model, config.pipe, s,
                                             torque, tension)
                         .generalized;
                   },
                   sim.dt);
    } catch (const SimulationError&) {
      rethrow_at(t);
    }
  }
  sum.final_x = state.q.x;
  return result;
}

}  // namespace inpipe
