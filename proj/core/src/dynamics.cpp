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

#include "inpipe/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "inpipe/error.hpp"

namespace inpipe {
namespace {

constexpr double kFirstDerivativeStep = 1e-7;

Eigen::Matrix3d body_to_world(const EulerPose& q) {
  return rotation_matrix(q).transpose().matrix();
}

double rotational_energy(const RobotModel& model, const EulerPose& q,
                         const Eigen::Vector3d& angle_rates) {
  const Eigen::Vector3d w = angular_rate_map(q) * angle_rates;
  return 0.5 * w.dot(model.inertia * w);
}

// Weight potential without the (linear) position term.
double attitude_potential(const RobotModel& model, const EulerPose& q) {
  return -model.weight.dot(body_to_world(q) * model.com_reference);
}

EulerPose shifted(const EulerPose& q, int index, double delta) {
  Vector6d v = q.as_vector();
  v[index] += delta;
  return EulerPose::from_vector(v);
}

void require_positive_definite(const Eigen::Matrix3d& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << what << " is not positive definite (min eigenvalue "
        << es.eigenvalues().minCoeff() << ")";
    throw NotPositiveDefiniteError(msg.str());
  }
}

}  // namespace

BodyComponent make_hemisphere(std::string name, double mass, double radius,
                              const Eigen::Matrix3d& orientation,
                              const Eigen::Vector3d& center) {
  BodyComponent c;
  c.name = std::move(name);
  c.shape = Shape::kHemisphere;
  c.mass = mass;
  const double axial = 0.4 * mass * radius * radius;
  const double transverse = 83.0 / 320.0 * mass * radius * radius;
  c.local_inertia = Eigen::Vector3d(axial, transverse, transverse).asDiagonal();
  c.orientation = orientation;
  c.offset = center;
  c.dims = {radius, 1.0, 0.0};
  return c;
}

BodyComponent make_arm(std::string name, double mass, double radius,
                       double length, const Eigen::Matrix3d& orientation,
                       const Eigen::Vector3d& center) {
  BodyComponent c;
  c.name = std::move(name);
  c.shape = Shape::kArm;
  c.mass = mass;
  const double axial = 0.5 * mass * radius * radius;
  const double transverse = mass * (3.0 * radius * radius + length * length) / 12.0;
  c.local_inertia = Eigen::Vector3d(axial, transverse, transverse).asDiagonal();
  c.orientation = orientation;
  c.offset = center;
  c.dims = {radius, length, 0.0};
  return c;
}

BodyComponent make_box(std::string name, double mass,
                       const Eigen::Vector3d& size,
                       const Eigen::Matrix3d& orientation,
                       const Eigen::Vector3d& center) {
  BodyComponent c;
  c.name = std::move(name);
  c.shape = Shape::kBox;
  c.mass = mass;
  const Eigen::Vector3d sq = size.cwiseProduct(size);
  c.local_inertia = (mass / 12.0 *
                     Eigen::Vector3d(sq.y() + sq.z(), sq.x() + sq.z(),
                                     sq.x() + sq.y()))
                        .asDiagonal();
  c.orientation = orientation;
  c.offset = center;
  c.dims = size;
  return c;
}

BodyComponent make_point_mass(std::string name, double mass,
                              const Eigen::Vector3d& center) {
  BodyComponent c;
  c.name = std::move(name);
  c.shape = Shape::kPoint;
  c.mass = mass;
  c.offset = center;
  return c;
}

Eigen::Vector3d center_components(std::vector<BodyComponent>& components) {
  double mass = 0.0;
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  for (const auto& c : components) {
    mass += c.mass;
    moment += c.mass * c.offset;
  }
  if (!(mass > 0.0)) throw ValidationError("components have no mass");
  const Eigen::Vector3d com = moment / mass;
  for (auto& c : components) c.offset -= com;
  return com;
}

MassProperties composite_inertia(std::span<const BodyComponent> components) {
  MassProperties out;
  for (const auto& c : components) {
    if (!(c.mass >= 0.0)) throw ValidationError("negative component mass");
    const Eigen::Matrix3d& r = c.orientation;
    const Eigen::Vector3d& d = c.offset;
    out.mass += c.mass;
    out.inertia += r * c.local_inertia * r.transpose() +
                   c.mass * (d.squaredNorm() * Eigen::Matrix3d::Identity() -
                             d * d.transpose());
  }
  out.inertia = 0.5 * (out.inertia + out.inertia.transpose());
  require_positive_definite(out.inertia, "composite inertia");
  return out;
}

RobotModel RobotModel::from_components(std::vector<BodyComponent> components,
                                       double wheel_radius) {
  if (!(wheel_radius > 0.0)) throw ValidationError("wheel radius must be positive");
  RobotModel model;
  const MassProperties mp = composite_inertia(components);
  model.components = std::move(components);
  model.mass = mp.mass;
  model.inertia = mp.inertia;
  model.weight = Eigen::Vector3d(0.0, -mp.mass * kGravity, 0.0);
  model.wheel_radius = wheel_radius;
  for (int i = 0; i < 3; ++i) {
    model.azimuths[i] = 2.0 * std::numbers::pi / 3.0 * i;
  }
  return model;
}

void ForceSet::validate() const {
  if ((tension.array() < 0.0).any()) {
    throw ValidationError("self-rescue tension must be non-negative");
  }
  if ((spring.array() < 0.0).any()) {
    throw ValidationError("spring forces must be non-negative");
  }
}

Eigen::Vector3d arm_direction(const RobotModel& model, int i) {
  const double mu = model.azimuths.at(i);
  return {0.0, std::cos(mu), std::sin(mu)};
}

Eigen::Vector3d contact_point(const RobotModel& model,
                              const WheelContacts& contacts, int i) {
  return model.hub_center + contacts.radius.at(i) * arm_direction(model, i);
}

double kinetic_energy(const RobotModel& model, const DynState& state) {
  const Eigen::Vector3d v = state.qdot.linear();
  return rotational_energy(model, state.q, state.qdot.angular()) +
         0.5 * model.mass * v.squaredNorm();
}

double potential_energy(const RobotModel& model, const EulerPose& q) {
  return -model.weight.dot(q.position()) + attitude_potential(model, q);
}

Matrix6d mass_matrix(const RobotModel& model, const EulerPose& q) {
  // T is quadratic in the rates, so evaluating it on basis vectors and their
  // pairwise sums recovers every entry of the Hessian exactly.
  auto energy = [&](const Vector6d& rates) {
    return kinetic_energy(model, {q, EulerRates::from_vector(rates), 0.0});
  };
  std::array<double, 6> diag{};
  Matrix6d m;
  for (int j = 0; j < 6; ++j) {
    diag[j] = energy(Vector6d::Unit(j));
    m(j, j) = 2.0 * diag[j];
  }
  for (int j = 0; j < 6; ++j) {
    for (int k = j + 1; k < 6; ++k) {
      const double mixed =
          energy(Vector6d::Unit(j) + Vector6d::Unit(k)) - diag[j] - diag[k];
      m(j, k) = mixed;
      m(k, j) = mixed;
    }
  }
  Eigen::LLT<Matrix6d> llt(m);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "mass matrix not positive definite at pitch " << q.pitch << " rad";
    throw NotPositiveDefiniteError(msg.str());
  }
  return m;
}

Eigen::Matrix<double, 3, 6> point_jacobian(const EulerPose& q,
                                           const Eigen::Vector3d& body_point) {
  Eigen::Matrix<double, 3, 6> j;
  j.leftCols<3>().setIdentity();
  j.rightCols<3>() = -body_to_world(q) * skew(body_point) * angular_rate_map(q);
  return j;
}

Vector6d generalized_forces(const RobotModel& model, const EulerPose& q,
                            const ForceSet& forces,
                            const WheelContacts& contacts) {
  const Eigen::Matrix3d c = body_to_world(q);
  const Eigen::Vector3d forward = c.col(0);
  Vector6d gf = point_jacobian(q, Eigen::Vector3d::Zero()).transpose() *
                (forces.drag * forward);

  const SelfRescueResult normal = apply_self_rescue(forces.spring, forces.tension);
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d p = contact_point(model, contacts, i);
    const Eigen::Vector3d f =
        -normal.effective[i] * (c * arm_direction(model, i)) +
        forces.torque[i] / model.wheel_radius * forward;
    gf += point_jacobian(q, p).transpose() * f;
  }
  for (const PointLoad& load : forces.extra) {
    gf += point_jacobian(q, load.body_point).transpose() * load.world_force;
  }
  return gf;
}

SelfRescueResult apply_self_rescue(const Eigen::Vector3d& spring,
                                   const Eigen::Vector3d& tension) {
  if ((tension.array() < 0.0).any()) {
    throw ValidationError("self-rescue tension must be non-negative");
  }
  SelfRescueResult out;
  out.effective = spring - tension;
  out.contact_lost = (out.effective.array() < 0.0).any();
  return out;
}

Vector6d bias_forces(const RobotModel& model, const DynState& state) {
  const Vector6d rates = state.qdot.as_vector();
  const Eigen::Vector3d angle_rates = state.qdot.angular();
  const double h = kFirstDerivativeStep;

  // dM/dt qd as a directional difference along the rates. M depends on the
  // angles only.
  Vector6d mdot_qd = Vector6d::Zero();
  const double spin = angle_rates.cwiseAbs().maxCoeff();
  if (spin > 0.0) {
    const double s = h / spin;
    Vector6d dir = Vector6d::Zero();
    dir.tail<3>() = angle_rates;
    const EulerPose ahead = EulerPose::from_vector(state.q.as_vector() + s * dir);
    const EulerPose behind = EulerPose::from_vector(state.q.as_vector() - s * dir);
    mdot_qd = (mass_matrix(model, ahead) - mass_matrix(model, behind)) * rates /
              (2.0 * s);
  }

  // T and the attitude part of U depend on the angles only; U is linear in
  // position with gradient -weight.
  Vector6d dt_dq = Vector6d::Zero();
  Vector6d du_dq = Vector6d::Zero();
  du_dq.head<3>() = -model.weight;
  for (int j = 3; j < 6; ++j) {
    const EulerPose plus = shifted(state.q, j, h);
    const EulerPose minus = shifted(state.q, j, -h);
    dt_dq[j] = (rotational_energy(model, plus, angle_rates) -
                rotational_energy(model, minus, angle_rates)) /
               (2.0 * h);
    du_dq[j] = (attitude_potential(model, plus) -
                attitude_potential(model, minus)) /
               (2.0 * h);
  }
  return mdot_qd - dt_dq + du_dq;
}

Vector6d forward_dynamics(const RobotModel& model, const DynState& state,
                          const GeneralizedForceFn& forces) {
  const Matrix6d m = mass_matrix(model, state.q);
  const Vector6d rhs = forces(state) - bias_forces(model, state);
  Eigen::LLT<Matrix6d> llt(m);
  const Vector6d qdd = llt.solve(rhs);
  if (!qdd.allFinite()) {
    throw SimulationError("forward dynamics produced non-finite accelerations");
  }
  return qdd;
}

Vector6d forward_dynamics(const RobotModel& model, const DynState& state,
                          const ForceSet& forces,
                          const WheelContacts& contacts) {
  return forward_dynamics(model, state, [&](const DynState& s) {
    return generalized_forces(model, s.q, forces, contacts);
  });
}

DynState step(const RobotModel& model, const DynState& state,
              const GeneralizedForceFn& forces, double dt) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    throw ValidationError("integration step must be in (0, 0.01] s");
  }
  using Vector12d = Eigen::Matrix<double, 12, 1>;
  auto pack = [](const DynState& s) {
    Vector12d y;
    y << s.q.as_vector(), s.qdot.as_vector();
    return y;
  };
  auto unpack = [](const Vector12d& y, double t) {
    return DynState{EulerPose::from_vector(y.head<6>()),
                    EulerRates::from_vector(y.tail<6>()), t};
  };
  auto deriv = [&](const Vector12d& y, double t) {
    const DynState s = unpack(y, t);
    Vector12d d;
    d << y.tail<6>(), forward_dynamics(model, s, forces);
    return d;
  };

  const double t = state.time;
  const Vector12d y0 = pack(state);
  const Vector12d k1 = deriv(y0, t);
  const Vector12d k2 = deriv(y0 + 0.5 * dt * k1, t + 0.5 * dt);
  const Vector12d k3 = deriv(y0 + 0.5 * dt * k2, t + 0.5 * dt);
  const Vector12d k4 = deriv(y0 + dt * k3, t + dt);
  const Vector12d y1 = y0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  DynState next = unpack(y1, t + dt);
  check_pitch(next.q.pitch);
  return next;
}

DynState step(const RobotModel& model, const DynState& state,
              const ForceSet& forces, const WheelContacts& contacts,
              double dt) {
  return step(model, state, [&](const DynState& s) {
    return generalized_forces(model, s.q, forces, contacts);
  }, dt);
}

}  // namespace inpipe
