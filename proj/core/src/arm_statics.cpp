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

#include "inpipe/arm_statics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "inpipe/error.hpp"

namespace inpipe {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr double kClosureTol = 1e-10;
// |cos(beta)| below this is treated as a vanishing lever arm.
constexpr double kPerpendicularGuard = 1e-9;

void require_beta(const SpringArmGeometry& geom, double beta) {
  if (!(beta > 0.0 && beta <= geom.rest_beta() + 1e-12)) {
    std::ostringstream msg;
    msg << "arm angle " << beta / kDeg << " deg outside (0, "
        << geom.rest_beta() / kDeg << "] deg";
    throw ValidationError(msg.str());
  }
}

// Condition of the contact interval at spring angle theta.
bool upper_arm_loaded(const SpringArmGeometry& geom, double theta) {
  const NormalForce f = normal_force_at_theta(geom, theta);
  return f.unbounded || f.newtons > geom.total_weight_N;
}

// Bisection between a failing and a passing theta.
double refine_endpoint(const SpringArmGeometry& geom, double failing,
                       double passing) {
  while (std::abs(passing - failing) > kClosureTol) {
    const double mid = 0.5 * (failing + passing);
    if (upper_arm_loaded(geom, mid)) {
      passing = mid;
    } else {
      failing = mid;
    }
  }
  return passing;
}

EndpointKind classify(const SpringArmGeometry& geom, double theta) {
  const double perpendicular = theta_from_beta(geom, kPi / 2.0);
  if (std::abs(theta - perpendicular) < 1e-8) return EndpointKind::kSingularity;
  return EndpointKind::kRoot;
}

}  // namespace

double SpringArmGeometry::rest_length_mm() const {
  return std::sqrt(arm_mm * arm_mm - lever_mm * lever_mm);
}

double SpringArmGeometry::rest_beta() const {
  return std::acos(-lever_mm / arm_mm);
}

void SpringArmGeometry::validate() const {
  std::ostringstream msg;
  if (!(lever_mm > 0.0 && lever_mm < arm_mm)) {
    msg << "spring lever " << lever_mm << " mm must satisfy 0 < lever < arm ("
        << arm_mm << " mm)";
  } else if (!(stiffness_N_per_mm > 0.0)) {
    msg << "spring stiffness must be positive, got " << stiffness_N_per_mm;
  } else if (!(arm_weight_N >= 0.0)) {
    msg << "arm weight must be non-negative, got " << arm_weight_N;
  } else if (!(total_weight_N > 0.0)) {
    msg << "total weight must be positive, got " << total_weight_N;
  } else {
    return;
  }
  throw ValidationError(msg.str());
}

double spring_length(const SpringArmGeometry& geom, double beta) {
  const double along = geom.lever_mm + geom.arm_mm * std::cos(beta);
  const double across = geom.arm_mm * std::sin(beta);
  return std::hypot(along, across);
}

double spring_extension(const SpringArmGeometry& geom, double beta) {
  // L^2 - L0^2 = 2 lever (lever + arm cos(beta)); dividing by L + L0 keeps the
  // rest configuration free of cancellation.
  const double length = spring_length(geom, beta);
  const double num =
      2.0 * geom.lever_mm * (geom.lever_mm + geom.arm_mm * std::cos(beta));
  return num / (length + geom.rest_length_mm());
}

double spring_force(const SpringArmGeometry& geom, double beta) {
  return geom.stiffness_N_per_mm * spring_extension(geom, beta);
}

double theta_from_beta(const SpringArmGeometry& geom, double beta) {
  require_beta(geom, beta);
  return std::atan2(geom.lever_mm + geom.arm_mm * std::cos(beta),
                    geom.arm_mm * std::sin(beta));
}

double beta_from_theta(const SpringArmGeometry& geom, double theta) {
  if (!(theta >= 0.0 && theta < kPi / 2.0)) {
    std::ostringstream msg;
    msg << "spring angle " << theta / kDeg << " deg outside [0, 90) deg";
    throw ValidationError(msg.str());
  }
  // theta(beta) decreases from 90 deg at beta -> 0 to 0 at beta0.
  double lo = 0.0;
  double hi = geom.rest_beta();
  if (theta == 0.0) return hi;
  while (hi - lo > kClosureTol) {
    const double mid = 0.5 * (lo + hi);
    if (theta_from_beta(geom, mid) > theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

NormalForce normal_force(const SpringArmGeometry& geom, double beta) {
  require_beta(geom, beta);
  const double cb = std::cos(beta);
  if (std::abs(cb) <= kPerpendicularGuard) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  const double length = spring_length(geom, beta);
  const double cos_theta = geom.arm_mm * std::sin(beta) / length;
  const double moment = spring_force(geom, beta) * geom.lever_mm * cos_theta;
  return {moment / (geom.arm_mm * cb) + geom.arm_weight_N, false};
}

NormalForce normal_force_at_theta(const SpringArmGeometry& geom, double theta) {
  return normal_force(geom, beta_from_theta(geom, theta));
}

bool in_operating_range(double beta) { return beta > 0.0 && beta < kPi / 2.0; }

ContactInterval contact_interval(const SpringArmGeometry& geom) {
  geom.validate();
  constexpr double kStep = 0.1 * kDeg;
  constexpr int kSamples = 900;  // theta = 0 .. 89.9 deg

  int first = -1;
  int last = -1;
  for (int i = 0; i < kSamples; ++i) {
    if (upper_arm_loaded(geom, i * kStep)) {
      if (first < 0) first = i;
      last = i;
    }
  }

  ContactInterval out;
  if (first < 0) return out;
  out.valid = true;

  if (first == 0) {
    out.theta_min = 0.0;
    out.min_kind = EndpointKind::kDomainEdge;
  } else {
    out.theta_min = refine_endpoint(geom, (first - 1) * kStep, first * kStep);
    out.min_kind = classify(geom, out.theta_min);
  }

  if (last == kSamples - 1) {
    out.theta_max = kPi / 2.0;
    out.max_kind = EndpointKind::kDomainEdge;
  } else {
    out.theta_max = refine_endpoint(geom, (last + 1) * kStep, last * kStep);
    out.max_kind = classify(geom, out.theta_max);
  }
  return out;
}

double retraction_moment(const SpringArmGeometry& geom, double beta) {
  const double cos_theta =
      geom.arm_mm * std::sin(beta) / spring_length(geom, beta);
  return spring_force(geom, beta) * geom.lever_mm * cos_theta;
}

double RetractionTorque::relative_disagreement() const {
  const double scale = std::max(std::abs(sweep_Nmm), std::abs(golden_Nmm));
  if (scale == 0.0) return 0.0;
  return std::abs(sweep_Nmm - golden_Nmm) / scale;
}

RetractionTorque max_retraction_torque(const SpringArmGeometry& geom) {
  geom.validate();
  constexpr double kStep = 0.01 * kDeg;
  const double beta0 = geom.rest_beta();

  RetractionTorque out;
  out.sweep_beta = beta0;
  out.sweep_Nmm = retraction_moment(geom, beta0);
  for (int i = 1; i * kStep < beta0; ++i) {
    const double beta = i * kStep;
    const double m = retraction_moment(geom, beta);
    if (m > out.sweep_Nmm) {
      out.sweep_Nmm = m;
      out.sweep_beta = beta;
    }
  }

  // Golden-section search on the bracket around the best sample.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(out.sweep_beta - kStep, 1e-12);
  double hi = std::min(out.sweep_beta + kStep, beta0);
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = retraction_moment(geom, c);
  double fd = retraction_moment(geom, d);
  while (hi - lo > 1e-12) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = retraction_moment(geom, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = retraction_moment(geom, d);
    }
  }
  out.golden_beta = 0.5 * (lo + hi);
  out.golden_Nmm = retraction_moment(geom, out.golden_beta);
  return out;
}

double gearmotor_capacity(double nominal_torque, double reduction_ratio,
                          double efficiency) {
  if (!(nominal_torque > 0.0) || !(reduction_ratio > 0.0) ||
      !(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ValidationError(
        "gear-motor torque and ratio must be positive, efficiency in (0, 1]");
  }
  return nominal_torque * reduction_ratio * efficiency;
}

CapacityCheck check_capacity(double capacity, double required) {
  if (!(required > 0.0)) return {true, std::numeric_limits<double>::infinity()};
  return {capacity >= required, capacity / required};
}

std::vector<StaticsSample> statics_sweep(const SpringArmGeometry& geom,
                                         double step) {
  geom.validate();
  if (!(step > 0.0)) throw ValidationError("sweep step must be positive");
  const double beta0 = geom.rest_beta();
  std::vector<StaticsSample> rows;
  for (int i = 1;; ++i) {
    double beta = i * step;
    if (beta > beta0) {
      if ((i - 1) * step < beta0 - 1e-12) {
        beta = beta0;
      } else {
        break;
      }
    }
    StaticsSample s;
    s.beta = beta;
    s.theta = theta_from_beta(geom, beta);
    s.spring_length_mm = spring_length(geom, beta);
    s.spring_force_N = spring_force(geom, beta);
    s.normal = normal_force(geom, beta);
    s.contact_ok = s.normal.unbounded || s.normal.newtons > geom.total_weight_N;
    rows.push_back(s);
    if (beta == beta0) break;
  }
  return rows;
}

std::vector<StiffnessDesignRow> stiffness_design(
    const SpringArmGeometry& geom, const std::vector<double>& stiffnesses) {
  std::vector<StiffnessDesignRow> rows;
  rows.reserve(stiffnesses.size());
  for (double k : stiffnesses) {
    SpringArmGeometry g = geom;
    g.stiffness_N_per_mm = k;
    rows.push_back({k, contact_interval(g), max_retraction_torque(g)});
  }
  return rows;
}

}  // namespace inpipe
