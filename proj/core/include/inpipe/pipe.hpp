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

// Pipe geometry, flow drag and the quasi-static wheel-torque requirement.

#ifndef INPIPE_PIPE_HPP_
#define INPIPE_PIPE_HPP_

#include <span>
#include <vector>

namespace inpipe {

// Radial bump on the pipe wall starting at axial position `position` (m),
// `extent` long, reducing the radius by up to `height` with a raised-cosine
// profile.
struct Obstacle {
  double position = 0.0;
  double height = 0.0;
  double extent = 0.0;
};

struct PipeProfile {
  double nominal_radius = 0.1524;  // m
  double inclination = 0.0;        // rad, 0 horizontal .. pi/2 vertical
  std::vector<Obstacle> obstacles;

  double radius_at(double s) const;
  // d(radius)/ds
  double slope_at(double s) const;
  void validate() const;
};

// F_D = c0 + c2 v^2.
struct DragModel {
  double c0 = 6.3;    // N
  double c2 = 130.0;  // N s^2 / m^2

  void validate() const;
};

// v is the speed relative to the still robot, v >= 0.
double drag_force(const DragModel& model, double speed);

// Per-wheel torque balancing drag plus the weight component along the pipe,
// shared by three wheels: r_w (F_D + W_net sin(alpha)) / 3.
double required_wheel_torque(double drag_N, double inclination,
                             double net_weight_N, double wheel_radius_m);

struct OperatingPoint {
  double drag_N = 0.0;
  double inclination = 0.0;  // rad
  double torque_Nm = 0.0;
};

struct OperatingFit {
  double wheel_radius_m = 0.0;
  double net_weight_N = 0.0;
  std::vector<double> relative_residuals;
};

// Least squares for tau = r_w (F_D + W sin(alpha)) / 3, linear in
// (r_w / 3, r_w W / 3). Throws ValidationError if the points cannot separate
// the two parameters (e.g. all level).
OperatingFit fit_operating_params(std::span<const OperatingPoint> points);

// The four published operating points: still/0.3 m/s against level/vertical.
std::vector<OperatingPoint> reference_operating_points();

struct TorqueMapCell {
  double drag_N = 0.0;
  double inclination = 0.0;
  double torque_Nm = 0.0;
  bool within_capacity = false;
};

// Row-major over (drag, inclination) in the order given.
std::vector<TorqueMapCell> torque_map(std::span<const double> drag_grid,
                                      std::span<const double> inclination_grid,
                                      double net_weight_N,
                                      double wheel_radius_m,
                                      double capacity_Nm);

}  // namespace inpipe

#endif  // INPIPE_PIPE_HPP_
