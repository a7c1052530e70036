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

#include "inpipe/pipe.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "inpipe/error.hpp"

namespace inpipe {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double PipeProfile::radius_at(double s) const {
  double r = nominal_radius;
  for (const Obstacle& o : obstacles) {
    const double u = (s - o.position) / o.extent;
    if (u > 0.0 && u < 1.0) {
      r -= 0.5 * o.height * (1.0 - std::cos(2.0 * kPi * u));
    }
  }
  return r;
}

double PipeProfile::slope_at(double s) const {
  double d = 0.0;
  for (const Obstacle& o : obstacles) {
    const double u = (s - o.position) / o.extent;
    if (u > 0.0 && u < 1.0) {
      d -= o.height * kPi / o.extent * std::sin(2.0 * kPi * u);
    }
  }
  return d;
}

void PipeProfile::validate() const {
  std::ostringstream msg;
  if (!(nominal_radius > 0.0)) {
    msg << "pipe radius must be positive";
  } else if (!(inclination >= 0.0 && inclination <= kPi / 2.0 + 1e-12)) {
    msg << "pipe inclination must be within [0, 90] deg";
  } else {
    for (const Obstacle& o : obstacles) {
      if (!(o.height >= 0.0 && o.height < nominal_radius && o.extent > 0.0)) {
        msg << "obstacle at " << o.position
            << " m needs 0 <= height < pipe radius and positive extent";
        break;
      }
    }
    if (msg.str().empty()) return;
  }
  throw ValidationError(msg.str());
}

void DragModel::validate() const {
  if (!(c0 >= 0.0 && c2 >= 0.0)) {
    throw ValidationError("drag coefficients must be non-negative");
  }
}

double drag_force(const DragModel& model, double speed) {
  if (!(speed >= 0.0)) throw ValidationError("speed must be non-negative");
  return model.c0 + model.c2 * speed * speed;
}

double required_wheel_torque(double drag_N, double inclination,
                             double net_weight_N, double wheel_radius_m) {
  if (!(drag_N >= 0.0 && net_weight_N >= 0.0 && wheel_radius_m >= 0.0 &&
        inclination >= 0.0 && inclination <= kPi / 2.0 + 1e-12)) {
    throw ValidationError(
        "torque requirement needs non-negative inputs and inclination <= 90 "
        "deg");
  }
  return wheel_radius_m * (drag_N + net_weight_N * std::sin(inclination)) / 3.0;
}

OperatingFit fit_operating_params(std::span<const OperatingPoint> points) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = points[i].drag_N;
    a(i, 1) = std::sin(points[i].inclination);
    b[i] = points[i].torque_Nm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (n < 2 || qr.rank() < 2) {
    throw ValidationError(
        "operating points do not determine both wheel radius and net weight "
        "(need drag variation and an inclined point)");
  }
  const Eigen::Vector2d p = qr.solve(b);
  if (!(p[0] > 0.0)) {
    throw ValidationError("fit produced a non-positive wheel radius");
  }
  OperatingFit fit;
  fit.wheel_radius_m = 3.0 * p[0];
  fit.net_weight_N = p[1] / p[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double model = a.row(i).dot(p);
    fit.relative_residuals.push_back((model - b[i]) / b[i]);
  }
  return fit;
}

std::vector<OperatingPoint> reference_operating_points() {
  return {{6.3, 0.0, 0.11}, {6.3, kPi / 2.0, 0.22},
          {18.0, 0.0, 0.3}, {18.0, kPi / 2.0, 0.4}};
}

std::vector<TorqueMapCell> torque_map(std::span<const double> drag_grid,
                                      std::span<const double> inclination_grid,
                                      double net_weight_N,
                                      double wheel_radius_m,
                                      double capacity_Nm) {
  if (drag_grid.empty() || inclination_grid.empty()) {
    throw ValidationError("torque map grids must be non-empty");
  }
  std::vector<TorqueMapCell> cells;
  cells.reserve(drag_grid.size() * inclination_grid.size());
  for (double drag : drag_grid) {
    for (double alpha : inclination_grid) {
      const double tau =
          required_wheel_torque(drag, alpha, net_weight_N, wheel_radius_m);
      cells.push_back({drag, alpha, tau, tau <= capacity_Nm});
    }
  }
  return cells;
}

}  // namespace inpipe
