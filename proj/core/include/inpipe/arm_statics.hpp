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

// Static force analysis of one spring-loaded arm.
//
// Geometry, in the arm's plane with the joint O at the origin: the spring
// runs from an anchor on the body at distance `lever` behind O to a point on
// the arm at distance `arm` from O. beta is the arm angle from the robot axis
// and theta the angle of the spring line from the radial direction. The two
// are tied by the closure
//
//   sin(theta) = (lever + arm cos(beta)) / L(beta)
//   cos(theta) =  arm sin(beta) / L(beta)
//
// so lever * cos(theta) is the distance from O to the spring line and the
// spring is at rest (theta = 0) when cos(beta) = -lever / arm.
//
// Units follow the design drawings: millimeters, newtons, N*mm.

#ifndef INPIPE_ARM_STATICS_HPP_
#define INPIPE_ARM_STATICS_HPP_

#include <vector>

namespace inpipe {

struct SpringArmGeometry {
  double lever_mm = 13.0;           // anchor A to joint O
  double arm_mm = 82.0;             // joint O to arm point B
  double stiffness_N_per_mm = 3.0;  // linear spring rate
  double arm_weight_N = 0.49;
  double total_weight_N = 6.3;      // robot weight in the operating fluid

  // sqrt(arm^2 - lever^2)
  double rest_length_mm() const;
  // beta0 with cos(beta0) = -lever / arm.
  double rest_beta() const;
  // Throws ValidationError on violated invariants.
  void validate() const;
};

// Distance A->B. beta in [0, pi].
double spring_length(const SpringArmGeometry& geom, double beta);
// Extension beyond rest length; non-negative on (0, beta0].
double spring_extension(const SpringArmGeometry& geom, double beta);
double spring_force(const SpringArmGeometry& geom, double beta);

// beta in (0, beta0].
double theta_from_beta(const SpringArmGeometry& geom, double beta);
// theta in [0, pi/2); inverse of the closure by bisection to 1e-10 rad.
double beta_from_theta(const SpringArmGeometry& geom, double theta);

// Wall normal force on the wheel. `unbounded` is set when the arm is
// (numerically) perpendicular to the robot axis, where the lever arm of the
// wall force vanishes; `newtons` is then +infinity.
struct NormalForce {
  double newtons = 0.0;
  bool unbounded = false;
};

// Moment balance about O:
//   F_N = k (L - L0) lever cos(theta) / (arm cos(beta)) + W_arm
// Defined on (0, beta0]. Past beta = 90 deg the expression goes negative:
// the arm has swung over the joint and cannot press on the wall.
NormalForce normal_force(const SpringArmGeometry& geom, double beta);
NormalForce normal_force_at_theta(const SpringArmGeometry& geom, double theta);

// beta in (0, 90 deg): arm between folded and perpendicular to the axis.
bool in_operating_range(double beta);

enum class EndpointKind {
  kRoot,        // F_N == W_total
  kSingularity, // F_N diverges (arm perpendicular to the axis)
  kDomainEdge,  // the condition still holds at the end of the theta range
};

struct ContactInterval {
  double theta_min = 0.0;
  double theta_max = 0.0;
  bool valid = false;
  EndpointKind min_kind = EndpointKind::kRoot;
  EndpointKind max_kind = EndpointKind::kRoot;

  double width() const { return valid ? theta_max - theta_min : 0.0; }
  bool contains(double theta) const {
    return valid && theta > theta_min && theta < theta_max;
  }
};

// Range of theta on which F_N exceeds the robot weight, i.e. the upper arm
// keeps a positive wall reaction. 0.1 deg sweep, then bisection of each
// endpoint to 1e-10 rad.
ContactInterval contact_interval(const SpringArmGeometry& geom);

// Moment of the spring force about the joint, F_spring * lever * cos(theta),
// in N*mm.
double retraction_moment(const SpringArmGeometry& geom, double beta);

struct RetractionTorque {
  double sweep_Nmm = 0.0;   // 0.01 deg sweep over (0, beta0]
  double sweep_beta = 0.0;
  double golden_Nmm = 0.0;  // golden-section refinement
  double golden_beta = 0.0;

  double relative_disagreement() const;
};

RetractionTorque max_retraction_torque(const SpringArmGeometry& geom);

// Ideal gearhead output torque. `efficiency` defaults to lossless.
double gearmotor_capacity(double nominal_torque, double reduction_ratio,
                          double efficiency = 1.0);

struct CapacityCheck {
  bool pass = false;
  double margin_ratio = 0.0;  // capacity / required
};

CapacityCheck check_capacity(double capacity, double required);

// One row of the beta sweep table.
struct StaticsSample {
  double beta = 0.0;
  double theta = 0.0;
  double spring_length_mm = 0.0;
  double spring_force_N = 0.0;
  NormalForce normal;
  bool contact_ok = false;
};

// Samples beta = step, 2 step, ... up to beta0 (inclusive).
std::vector<StaticsSample> statics_sweep(const SpringArmGeometry& geom,
                                         double step);

struct StiffnessDesignRow {
  double stiffness_N_per_mm = 0.0;
  ContactInterval interval;
  RetractionTorque torque;
};

std::vector<StiffnessDesignRow> stiffness_design(
    const SpringArmGeometry& geom, const std::vector<double>& stiffnesses);

}  // namespace inpipe

#endif  // INPIPE_ARM_STATICS_HPP_
