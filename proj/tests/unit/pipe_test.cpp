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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "inpipe/error.hpp"

namespace inpipe {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Drag, ReferenceSpeeds) {
  const DragModel d;
  EXPECT_NEAR(drag_force(d, 0.0), 6.3, 1e-12);
  EXPECT_NEAR(drag_force(d, 0.3), 18.0, 1e-12);
  EXPECT_THROW(drag_force(d, -0.1), ValidationError);
  double prev = 0.0;
  for (double v = 0.0; v < 1.0; v += 0.05) {
    EXPECT_GT(drag_force(d, v), prev);
    prev = drag_force(d, v);
  }
}

TEST(Torque, SharedEquallyByThreeWheels) {
  EXPECT_NEAR(required_wheel_torque(6.0, 0.0, 10.0, 0.05), 0.1, 1e-15);
  EXPECT_NEAR(required_wheel_torque(6.0, kPi / 2.0, 10.0, 0.05), 0.05 * 16.0 / 3.0, 1e-15);
  EXPECT_THROW(required_wheel_torque(-1.0, 0.0, 1.0, 0.05), ValidationError);
  EXPECT_THROW(required_wheel_torque(1.0, 2.0, 1.0, 0.05), ValidationError);
}

TEST(Fit, RecoversGeneratingParameters) {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double r = 0.02 + 0.08 * u(rng);
    const double w = 1.0 + 20.0 * u(rng);
    std::vector<OperatingPoint> pts;
    for (int i = 0; i < 6; ++i) {
      const double drag = 2.0 + 20.0 * u(rng);
      const double alpha = kPi / 2.0 * u(rng);
      pts.push_back({drag, alpha, required_wheel_torque(drag, alpha, w, r)});
    }
    const OperatingFit fit = fit_operating_params(pts);
    EXPECT_NEAR(fit.wheel_radius_m, r, 1e-9 * r);
    EXPECT_NEAR(fit.net_weight_N, w, 1e-9 * w);
    for (double res : fit.relative_residuals) EXPECT_NEAR(res, 0.0, 1e-9);
  }
}

TEST(Fit, ReferencePointsWithinTenPercent) {
  const std::vector<OperatingPoint> pts = reference_operating_points();
  const OperatingFit fit = fit_operating_params(pts);
  EXPECT_NEAR(fit.wheel_radius_m, 0.0496, 1e-4);
  EXPECT_NEAR(fit.net_weight_N, 6.6, 0.01);
  ASSERT_EQ(fit.relative_residuals.size(), 4u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double model =
        required_wheel_torque(pts[i].drag_N, pts[i].inclination, fit.net_weight_N, fit.wheel_radius_m);
    EXPECT_NEAR(model, pts[i].torque_Nm, 0.1 * pts[i].torque_Nm);
    EXPECT_NEAR((model - pts[i].torque_Nm) / pts[i].torque_Nm, fit.relative_residuals[i], 1e-12);
  }
}

TEST(Fit, DegenerateDesignRejected) {
  const std::vector<OperatingPoint> level = {{6.3, 0.0, 0.1}, {18.0, 0.0, 0.3}};
  EXPECT_THROW(fit_operating_params(level), ValidationError);
  const std::vector<OperatingPoint> one = {{6.3, 0.5, 0.1}};
  EXPECT_THROW(fit_operating_params(one), ValidationError);
}

TEST(TorqueMap, MonotoneInDragAndInclination) {
  const std::vector<double> drag = {6.3, 10.0, 14.0, 18.0};
  const std::vector<double> alpha = {0.0, kPi / 6.0, kPi / 3.0, kPi / 2.0};
  const std::vector<TorqueMapCell> cells = torque_map(drag, alpha, 6.6, 0.0496, 0.25);
  ASSERT_EQ(cells.size(), 16u);
  for (std::size_t i = 0; i < drag.size(); ++i) {
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      const TorqueMapCell& c = cells[i * alpha.size() + j];
      EXPECT_EQ(c.drag_N, drag[i]);
      EXPECT_EQ(c.inclination, alpha[j]);
      EXPECT_EQ(c.within_capacity, c.torque_Nm <= 0.25);
      if (i > 0) EXPECT_GT(c.torque_Nm, cells[(i - 1) * alpha.size() + j].torque_Nm);
      if (j > 0) EXPECT_GT(c.torque_Nm, cells[i * alpha.size() + j - 1].torque_Nm);
    }
  }
  EXPECT_TRUE(cells.front().within_capacity);
  EXPECT_FALSE(cells.back().within_capacity);
}

TEST(TorqueMap, SingleCellAndEmptyGrids) {
  const std::vector<double> d = {6.3};
  const std::vector<double> a = {0.0};
  const std::vector<TorqueMapCell> cells = torque_map(d, a, 6.6, 0.05, 2.3166);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_NEAR(cells[0].torque_Nm, 0.105, 1e-15);
  EXPECT_THROW(torque_map(std::span<const double>{}, a, 6.6, 0.05, 1.0), ValidationError);
}

TEST(Profile, RaisedCosineBump) {
  PipeProfile p;
  p.obstacles.push_back({0.2, 0.01, 0.1});
  EXPECT_EQ(p.radius_at(0.19), p.nominal_radius);
  EXPECT_EQ(p.radius_at(0.31), p.nominal_radius);
  EXPECT_NEAR(p.radius_at(0.25), p.nominal_radius - 0.01, 1e-15);
  EXPECT_NEAR(p.slope_at(0.25), 0.0, 1e-15);
  const double h = 1e-6;
  for (double s = 0.201; s < 0.3; s += 0.007) {
    const double fd = (p.radius_at(s + h) - p.radius_at(s - h)) / (2.0 * h);
    EXPECT_NEAR(p.slope_at(s), fd, 1e-7);
  }
}

TEST(Profile, Validation) {
  PipeProfile p;
  EXPECT_NO_THROW(p.validate());
  p.inclination = 2.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.obstacles.push_back({0.0, 0.2, 0.1});
  EXPECT_THROW(p.validate(), ValidationError);
  DragModel d;
  d.c0 = -1.0;
  EXPECT_THROW(d.validate(), ValidationError);
}

}  // namespace
}  // namespace inpipe
