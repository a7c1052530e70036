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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "inpipe/error.hpp"
#include "inpipe/scenario.hpp"
#include "oracles.hpp"

namespace inpipe {
namespace {

constexpr double kPi = std::numbers::pi;

double relative_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).norm() / want.norm();
}

TEST(Components, PointCloudInertiaPerPrimitive) {
  const Eigen::Matrix3d tilt =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const std::vector<BodyComponent> parts = {
      make_hemisphere("cap", 0.2, 0.045, Eigen::Matrix3d::Identity(), {0.1, 0, 0}),
      make_hemisphere("cap_rev", 0.2, 0.045, Eigen::Vector3d(-1, -1, 1).asDiagonal(),
                      {-0.1, 0.01, 0}),
      make_arm("rod", 0.05, 0.004, 0.082, tilt, {0.02, 0.05, -0.03}),
      make_box("box", 0.75, {0.12, 0.08, 0.08}, tilt, {0, -0.008, 0.01}),
  };
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::span<const BodyComponent> one(&parts[i], 1);
    // Both sides are about the assembly origin.
    const Eigen::Matrix3d analytic = composite_inertia(one).inertia;
    const Eigen::Matrix3d cloud = oracle::point_cloud_inertia(one, 400000, 100 + i);
    EXPECT_LT(relative_error(analytic, cloud), 0.01) << parts[i].name;
  }
}

TEST(Components, HemisphereClosedForm) {
  const double m = 0.3, r = 0.05;
  const BodyComponent h = make_hemisphere("h", m, r, Eigen::Matrix3d::Identity(),
                                          Eigen::Vector3d::Zero());
  EXPECT_NEAR(h.local_inertia(0, 0), 0.4 * m * r * r, 1e-15);
  EXPECT_NEAR(h.local_inertia(1, 1), 83.0 / 320.0 * m * r * r, 1e-15);
}

TEST(Components, ParallelAxisTextbook) {
  // Point masses on the corners of a square: I_zz = 4 m d^2 about the centre.
  std::vector<BodyComponent> parts;
  const double m = 0.5, d = 0.1;
  for (auto [x, y] : {std::pair{d, 0.0}, {-d, 0.0}, {0.0, d}, {0.0, -d}}) {
    parts.push_back(make_point_mass("p", m, {x, y, 0.0}));
  }
  parts.push_back(make_box("core", 1.0, {0.02, 0.02, 0.02}, Eigen::Matrix3d::Identity(),
                           Eigen::Vector3d::Zero()));
  const MassProperties mp = composite_inertia(parts);
  const double core = 1.0 / 12.0 * (0.02 * 0.02 * 2);
  EXPECT_NEAR(mp.inertia(2, 2), 4.0 * m * d * d + core, 1e-15);
  EXPECT_NEAR(mp.inertia(0, 0), 2.0 * m * d * d + core, 1e-15);
  EXPECT_NEAR(mp.inertia(0, 1), 0.0, 1e-15);
}

TEST(Components, CenteringRemovesFirstMoment) {
  std::vector<BodyComponent> parts = {
      make_point_mass("a", 1.0, {1, 0, 0}),
      make_point_mass("b", 3.0, {0, 2, 0}),
  };
  const Eigen::Vector3d com = center_components(parts);
  EXPECT_TRUE(com.isApprox(Eigen::Vector3d(0.25, 1.5, 0)));
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  for (const auto& p : parts) moment += p.mass * p.offset;
  EXPECT_LT(moment.norm(), 1e-15);
}

TEST(Components, DegenerateInertiaRejected) {
  std::vector<BodyComponent> parts = {make_point_mass("a", 1.0, {0, 0, 0})};
  EXPECT_THROW(composite_inertia(parts), NotPositiveDefiniteError);
}

TEST(RobotInertia, ThreeArmStarIsAxisymmetric) {
  ScenarioConfig cfg;
  cfg.robot.box_drop = 0.0;
  cfg.robot.box_size = {0.12, 0.08, 0.08};
  const RobotModel model = build_robot(cfg);
  EXPECT_NEAR(model.inertia(1, 1), model.inertia(2, 2), 1e-12 * model.inertia(1, 1));
  EXPECT_LT(std::abs(model.inertia(1, 2)), 1e-12 * model.inertia(1, 1));
}

TEST(RobotInertia, MatchesPointCloud) {
  const RobotModel model = oracle::reference_robot();
  const Eigen::Matrix3d cloud = oracle::point_cloud_inertia(model.components, 200000, 5);
  EXPECT_LT(relative_error(model.inertia, cloud), 0.01);
}

TEST(KineticEnergy, MatchesPointCloud) {
  const RobotModel model = oracle::reference_robot();
  std::mt19937_64 rng(41);
  for (int k = 0; k < 5; ++k) {
    const DynState s = oracle::random_state(rng);
    const double ke = kinetic_energy(model, s);
    const double cloud = oracle::point_cloud_kinetic_energy(model, s, 100000, 7 + k);
    EXPECT_NEAR(ke, cloud, 0.01 * ke);
  }
}

TEST(MassMatrix, SymmetricPositiveDefinite) {
  const RobotModel model = oracle::reference_robot();
  std::mt19937_64 rng(43);
  for (int k = 0; k < 200; ++k) {
    const DynState s = oracle::random_state(rng);
    const Matrix6d m = mass_matrix(model, s.q);
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix6d> es(m);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    EXPECT_TRUE((m.topLeftCorner<3, 3>().isApprox(model.mass * Eigen::Matrix3d::Identity())));
    EXPECT_LT((m.topRightCorner<3, 3>().norm()), 1e-15);
  }
}

TEST(MassMatrix, IsHessianOfKineticEnergy) {
  const RobotModel model = oracle::reference_robot();
  std::mt19937_64 rng(47);
  const DynState s = oracle::random_state(rng);
  const Matrix6d m = mass_matrix(model, s.q);
  // T is exactly quadratic in qdot, so a second difference is exact up to
  // rounding for any step.
  const double h = 0.5;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      auto ke = [&](double di, double dj) {
        DynState t = s;
        Vector6d v = Vector6d::Zero();
        v[i] += di;
        v[j] += dj;
        t.qdot = EulerRates::from_vector(v);
        return kinetic_energy(model, t);
      };
      const double fd = (ke(h, h) - ke(h, -h) - ke(-h, h) + ke(-h, -h)) / (4.0 * h * h);
      EXPECT_NEAR(m(i, j), fd, 1e-12 * m.norm());
    }
  }
}

TEST(GeneralizedForces, MatchVirtualWork) {
  const RobotModel model = oracle::reference_robot();
  std::mt19937_64 rng(53);
  for (int k = 0; k < 120; ++k) {
    const DynState s = oracle::random_state(rng);
    ForceSet f = oracle::random_forces(rng);
    f.extra.push_back({{0.03, -0.01, 0.02}, {1.0, -2.0, 0.5}});
    const WheelContacts c = oracle::random_contacts(rng);
    const Vector6d q = generalized_forces(model, s.q, f, c);
    const Vector6d w = oracle::virtual_work(model, s.q, f, c);
    EXPECT_LT((q - w).norm(), 1e-9 * std::max(1.0, w.norm())) << "state " << k;
  }
}

TEST(GeneralizedForces, PointJacobianMatchesWorldPoint) {
  std::mt19937_64 rng(59);
  for (int k = 0; k < 50; ++k) {
    const DynState s = oracle::random_state(rng);
    const Eigen::Vector3d p(0.05, -0.02, 0.11);
    const Eigen::Matrix<double, 3, 6> j = point_jacobian(s.q, p);
    const Vector6d v = s.qdot.as_vector();
    const double h = 1e-6;
    const Eigen::Vector3d fd =
        (oracle::world_point(EulerPose::from_vector(s.q.as_vector() + h * v), p) -
         oracle::world_point(EulerPose::from_vector(s.q.as_vector() - h * v), p)) /
        (2.0 * h);
    EXPECT_LT((j * v - fd).norm(), 1e-7 * std::max(1.0, fd.norm()));
  }
}

TEST(EquationsOfMotion, SatisfyLagrange) {
  RobotModel model = oracle::reference_robot();
  model.com_reference = {0.003, -0.004, 0.002};
  std::mt19937_64 rng(61);
  for (int k = 0; k < 30; ++k) {
    const DynState s = oracle::random_state(rng, 1.0);
    const ForceSet f = oracle::random_forces(rng);
    const WheelContacts c = oracle::random_contacts(rng);
    const Vector6d q = generalized_forces(model, s.q, f, c);
    const Vector6d qdd = forward_dynamics(model, s, f, c);
    EXPECT_LT(oracle::lagrange_residual(model, s, qdd, q), 1e-5) << "state " << k;
  }
}

TEST(EquationsOfMotion, FreeFall) {
  RobotModel model = oracle::reference_robot();
  DynState s;
  const Vector6d qdd = forward_dynamics(model, s, ForceSet{}, WheelContacts{});
  Vector6d expected = Vector6d::Zero();
  expected.head<3>() = model.weight / model.mass;
  EXPECT_LT((qdd - expected).norm(), 1e-12);
  EXPECT_NEAR(expected.y(), -model.weight.norm() / model.mass, 1e-15);
}

TEST(EquationsOfMotion, StepRejectsBadTimestep) {
  const RobotModel model = oracle::reference_robot();
  EXPECT_THROW(step(model, DynState{}, ForceSet{}, WheelContacts{}, 0.0), ValidationError);
  EXPECT_THROW(step(model, DynState{}, ForceSet{}, WheelContacts{}, 0.02), ValidationError);
}

TEST(EquationsOfMotion, SingularPitchRejected) {
  const RobotModel model = oracle::reference_robot();
  DynState s;
  s.q.pitch = kPi / 2.0;
  EXPECT_THROW(mass_matrix(model, s.q), SingularPitchError);
}

TEST(SelfRescue, EffectiveNormal) {
  const SelfRescueResult r = apply_self_rescue({5, 5, 5}, {0, 1, 6});
  EXPECT_TRUE(r.effective.isApprox(Eigen::Vector3d(5, 4, -1)));
  EXPECT_TRUE(r.contact_lost);
  EXPECT_FALSE(apply_self_rescue({5, 5, 5}, {1, 2, 3}).contact_lost);
  EXPECT_THROW(apply_self_rescue({5, 5, 5}, {0, -1, 0}), ValidationError);
}

TEST(SelfRescue, TensionOnlyReducesWallNormal) {
  const RobotModel model = oracle::reference_robot();
  WheelContacts c;
  c.radius = {0.15, 0.15, 0.15};
  ForceSet loose;
  loose.spring = {5, 5, 5};
  ForceSet tight = loose;
  tight.tension = {2, 2, 2};
  const Vector6d diff = generalized_forces(model, DynState{}.q, tight, c) -
                        generalized_forces(model, DynState{}.q, loose, c);
  ForceSet ref;
  ref.spring = {2, 2, 2};
  const Vector6d spring_only = generalized_forces(model, DynState{}.q, ref, c);
  EXPECT_LT((diff + spring_only).norm(), 1e-14);
}

// Mostly-roll spin of the free body, with gravity off (kinetic energy) and on
// (kinetic plus potential).
DynState spinning_state() {
  DynState s;
  s.q.pitch = 0.1;
  s.qdot.roll_rate = 2.0;
  s.qdot.pitch_rate = 0.05;
  s.qdot.yaw_rate = -0.05;
  s.qdot.xd = 0.1;
  return s;
}

TEST(Integrator, ConservesKineticEnergyWithoutLoads) {
  RobotModel model = oracle::reference_robot();
  model.weight.setZero();
  DynState s = spinning_state();
  const double e0 = kinetic_energy(model, s);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    s = step(model, s, ForceSet{}, WheelContacts{}, 1e-3);
    worst = std::max(worst, std::abs(kinetic_energy(model, s) - e0) / e0);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Integrator, ConservesTotalEnergyUnderGravity) {
  RobotModel model = oracle::reference_robot();
  model.com_reference = {0.0, -0.005, 0.0};
  DynState s = spinning_state();
  auto total = [&](const DynState& st) {
    return kinetic_energy(model, st) + potential_energy(model, st.q);
  };
  const double e0 = total(s);
  const double scale = kinetic_energy(model, s);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    s = step(model, s, ForceSet{}, WheelContacts{}, 1e-3);
    worst = std::max(worst, std::abs(total(s) - e0) / scale);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Integrator, FourthOrderConvergence) {
  RobotModel model = oracle::reference_robot();
  model.com_reference = {0.0, -0.005, 0.0};
  const DynState s0 = spinning_state();
  auto run = [&](double dt) {
    DynState s = s0;
    const int n = static_cast<int>(std::lround(0.5 / dt));
    for (int i = 0; i < n; ++i) s = step(model, s, ForceSet{}, WheelContacts{}, dt);
    Eigen::Matrix<double, 12, 1> y;
    y << s.q.as_vector(), s.qdot.as_vector();
    return y;
  };
  const auto y1 = run(0.01);
  const auto y2 = run(0.005);
  const auto y4 = run(0.0025);
  const double ratio = (y1 - y2).norm() / (y2 - y4).norm();
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

}  // namespace
}  // namespace inpipe
