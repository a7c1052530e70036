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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "inpipe/arm_statics.hpp"
#include "inpipe/config.hpp"
#include "inpipe/csv.hpp"
#include "inpipe/dynamics.hpp"
#include "inpipe/lqr.hpp"
#include "inpipe/pipe.hpp"
#include "inpipe/scenario.hpp"
#include "oracles.hpp"

namespace {

using namespace inpipe;

constexpr double kDeg = std::numbers::pi / 180.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict gearmotor() {
  const double c = gearmotor_capacity(8.58, 270.0);
  return {c == 2316.6,
          fmt("capacity %.10g N*mm, %s", c, c == 2316.6 ? "bit-exact" : "inexact")};
}

Verdict torque_corners() {
  const std::vector<OperatingPoint> pts = reference_operating_points();
  const OperatingFit fit = fit_operating_params(pts);
  bool ok = true;
  std::string d = fmt("r_w %.4f mm, W_net %.4f N; residuals", fit.wheel_radius_m * 1e3,
                      fit.net_weight_N);
  for (const OperatingPoint& p : pts) {
    const double tau =
        required_wheel_torque(p.drag_N, p.inclination, fit.net_weight_N, fit.wheel_radius_m);
    const double rel = (tau - p.torque_Nm) / p.torque_Nm;
    ok = ok && std::abs(rel) <= 0.10;
    d += fmt(" %+.1f%%", 100.0 * rel);
  }
  return {ok, d};
}

Verdict drag_endpoints() {
  const DragModel m;
  const double d0 = drag_force(m, 0.0);
  const double d3 = drag_force(m, 0.3);
  return {std::abs(d0 - 6.3) <= 1e-12 && std::abs(d3 - 18.0) <= 1e-12,
          fmt("F_D(0) = %.15g N, F_D(0.3) = %.15g N", d0, d3)};
}

Verdict rest_configuration() {
  const SpringArmGeometry g;
  const double b0 = g.rest_beta();
  const double theta = theta_from_beta(g, b0);
  const double force = spring_force(g, b0);
  const double moment = retraction_moment(g, b0);
  const double length = spring_length(g, b0);
  const double expected = std::sqrt(82.0 * 82.0 - 13.0 * 13.0);
  const bool ok = std::abs(theta) <= 1e-12 && std::abs(force) <= 1e-12 &&
                  std::abs(moment) <= 1e-12 && std::abs(length - expected) <= 1e-9 &&
                  std::abs(g.rest_length_mm() - expected) <= 1e-9;
  return {ok, fmt("theta %.3g, F_s %.3g N, moment %.3g N*mm, L0 %.12f mm", theta, force,
                  moment, length)};
}

Verdict interval_monotone() {
  const SpringArmGeometry g;
  const std::vector<StiffnessDesignRow> rows = stiffness_design(g, {1, 2, 3, 4, 5});
  bool ok = true;
  std::string d = "widths (deg)";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d += fmt(" %.2f", rows[i].interval.width() / kDeg);
    if (i > 0) ok = ok && rows[i].interval.width() >= rows[i - 1].interval.width();
  }
  const ContactInterval at3 = rows[2].interval;
  d += fmt("; k = 3 interval [%.2f, %.2f] deg vs published [20, 66] deg", at3.theta_min / kDeg,
           at3.theta_max / kDeg);
  return {ok, d};
}

Verdict retraction_torque() {
  const RetractionTorque t = max_retraction_torque(SpringArmGeometry{});
  return {t.relative_disagreement() < 1e-6,
          fmt("sweep %.4f vs golden %.4f N*mm (rel %.2e) at beta %.2f deg; published about "
              "2200 N*mm, ratio %.3f",
              t.sweep_Nmm, t.golden_Nmm, t.relative_disagreement(), t.golden_beta / kDeg,
              t.golden_Nmm / 2200.0)};
}

Verdict energy_conservation() {
  DynState s0;
  s0.q.pitch = 0.1;
  s0.qdot.roll_rate = 2.0;
  s0.qdot.pitch_rate = 0.05;
  s0.qdot.yaw_rate = -0.05;
  s0.qdot.xd = 0.1;

  RobotModel free_body = oracle::reference_robot();
  free_body.weight.setZero();
  DynState s = s0;
  const double t0 = kinetic_energy(free_body, s);
  double drift_free = 0.0;
  for (int i = 0; i < 10000; ++i) {
    s = step(free_body, s, ForceSet{}, WheelContacts{}, 1e-3);
    drift_free = std::max(drift_free, std::abs(kinetic_energy(free_body, s) - t0) / t0);
  }

  RobotModel heavy = oracle::reference_robot();
  heavy.com_reference = {0.0, -0.005, 0.0};
  auto total = [&](const DynState& st) {
    return kinetic_energy(heavy, st) + potential_energy(heavy, st.q);
  };
  s = s0;
  const double e0 = total(s);
  double drift_gravity = 0.0;
  for (int i = 0; i < 10000; ++i) {
    s = step(heavy, s, ForceSet{}, WheelContacts{}, 1e-3);
    drift_gravity = std::max(drift_gravity, std::abs(total(s) - e0) / std::abs(e0));
  }
  return {drift_free < 1e-6 && drift_gravity < 1e-6,
          fmt("max relative drift over 10 s: T %.2e, T+U %.2e", drift_free, drift_gravity)};
}

Verdict oracle_equivalences() {
  // (a) inertia of each primitive against a point cloud.
  const Eigen::Matrix3d tilt =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const std::vector<BodyComponent> parts = {
      make_hemisphere("hemisphere", 0.2, 0.045, tilt, {0.1, 0.0, 0.02}),
      make_arm("arm", 0.05, 0.004, 0.082, tilt, {0.02, 0.05, -0.03}),
      make_box("box", 0.75, {0.12, 0.08, 0.08}, tilt, {0.0, -0.008, 0.01}),
  };
  double worst_inertia = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::span<const BodyComponent> one(&parts[i], 1);
    const Eigen::Matrix3d analytic = composite_inertia(one).inertia;
    const Eigen::Matrix3d cloud = oracle::point_cloud_inertia(one, 400000, 100 + i);
    worst_inertia = std::max(worst_inertia, (analytic - cloud).norm() / cloud.norm());
  }

  // (b) generalized forces against virtual work.
  const RobotModel model = oracle::reference_robot();
  std::mt19937_64 rng(2026);
  double worst_gf = 0.0;
  constexpr int kStates = 120;
  for (int k = 0; k < kStates; ++k) {
    const DynState s = oracle::random_state(rng);
    ForceSet f = oracle::random_forces(rng);
    f.extra.push_back({{0.03, -0.01, 0.02}, {1.0, -2.0, 0.5}});
    const WheelContacts c = oracle::random_contacts(rng);
    const Vector6d q = generalized_forces(model, s.q, f, c);
    const Vector6d w = oracle::virtual_work(model, s.q, f, c);
    worst_gf = std::max(worst_gf, (q - w).norm() / std::max(1.0, w.norm()));
  }

  // (c) Lagrange residual of the forward dynamics.
  RobotModel offset = model;
  offset.com_reference = {0.003, -0.004, 0.002};
  double worst_lagrange = 0.0;
  for (int k = 0; k < 30; ++k) {
    const DynState s = oracle::random_state(rng, 1.0);
    const ForceSet f = oracle::random_forces(rng);
    const WheelContacts c = oracle::random_contacts(rng);
    const Vector6d qdd = forward_dynamics(offset, s, f, c);
    worst_lagrange = std::max(
        worst_lagrange,
        oracle::lagrange_residual(offset, s, qdd, generalized_forces(offset, s.q, f, c)));
  }
  return {worst_inertia < 0.01 && worst_gf < 1e-9 && worst_lagrange < 1e-5,
          fmt("(a) inertia %.2e (b) virtual work %.2e over %d states (c) Lagrange %.2e",
              worst_inertia, worst_gf, kStates, worst_lagrange)};
}

Verdict lqr_properties() {
  bool ok = true;
  double worst_res = 0.0;
  double worst_eig = -1e300;
  auto check = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                   const Eigen::MatrixXd& r) {
    const LqrGain g = lqr_gain(a, b, q, r);
    const double res = riccati_residual(a, b, q, r, g.P).norm() / (q.norm() + g.P.norm());
    const double eig = closed_loop_eigenvalues(a, b, g.K).real().maxCoeff();
    worst_res = std::max(worst_res, res);
    worst_eig = std::max(worst_eig, eig);
    ok = ok && res < 1e-8 && eig < 0.0;
  };

  const ScenarioConfig cfg = default_config();
  const RobotModel model = build_robot(cfg);
  const ControllerDesign design = design_controller(cfg, model);
  check(design.plant.A, design.plant.B, cfg.controller.q_diag.asDiagonal().toDenseMatrix(),
        cfg.controller.r_diag.asDiagonal().toDenseMatrix());
  const double robot_eig = worst_eig;

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const int m = 1 + trial % 3;
    Eigen::MatrixXd a(n, n), b(n, m), c(n, n);
    for (auto* mat : {&a, &b, &c}) {
      for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = n01(rng);
    }
    check(a, b, c.transpose() * c + 0.1 * Eigen::MatrixXd::Identity(n, n),
          Eigen::MatrixXd::Identity(m, m));
  }

  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const LqrGain g1 = lqr_gain(zero, one, one, one);
  const LqrGain g2 = lqr_gain(zero, one, 4.0 * one, one);
  const double scalar_err =
      std::max({std::abs(g1.P(0, 0) - 1.0), std::abs(g1.K(0, 0) - 1.0),
                std::abs(g2.P(0, 0) - 2.0), std::abs(g2.K(0, 0) - 2.0)});
  ok = ok && scalar_err <= 1e-9;
  return {ok, fmt("worst Riccati residual %.2e, worst max Re(eig) %.3g (robot %.4g), scalar "
                  "error %.1e",
                  worst_res, worst_eig, robot_eig, scalar_err)};
}

Verdict self_rescue() {
  const std::string path = std::string(INPIPE_CONFIG_DIR) + "/obstacle.ini";
  ScenarioConfig off = load_config(path);
  off.controller.supervisor_enabled = false;
  const ScenarioSummary a = run_scenario(off).summary;
  const ScenarioConfig on = load_config(path);
  const ScenarioSummary b = run_scenario(on).summary;
  const std::vector<SupervisorMode> expected = {
      SupervisorMode::kNormal, SupervisorMode::kRetracting, SupervisorMode::kTraversing,
      SupervisorMode::kExtending, SupervisorMode::kNormal};
  std::string seq;
  for (SupervisorMode m : b.modes) seq += (seq.empty() ? "" : ">") + std::string(mode_name(m));
  const bool ok = a.failure_flagged && !b.failure_flagged && b.modes == expected &&
                  b.traversed && b.final_in_interval && b.min_tension >= 0.0 &&
                  b.max_tension <= b.max_tension_limit;
  return {ok, fmt("off: flagged %s at %.3f s; on: %s, traversed %s, final theta %.2f deg, "
                  "tension [%.3f, %.3f] N of %.3f N",
                  a.failure_flagged ? "yes" : "no", a.failure_time, seq.c_str(),
                  b.traversed ? "yes" : "no", b.final_theta[0] / kDeg, b.min_tension,
                  b.max_tension, b.max_tension_limit)};
}

Verdict determinism() {
  const ScenarioConfig cfg = load_config(std::string(INPIPE_CONFIG_DIR) + "/obstacle.ini");
  std::ostringstream first, second;
  csv::write_trajectory(first, run_scenario(cfg).log);
  csv::write_trajectory(second, run_scenario(cfg).log);
  return {first.str() == second.str() && !first.str().empty(),
          fmt("%zu bytes per log", first.str().size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"gear-motor capacity 2316.6 N*mm", gearmotor},
      {"torque-map corners within 10%", torque_corners},
      {"drag endpoints 6.3 N and 18 N", drag_endpoints},
      {"statics rest configuration", rest_configuration},
      {"contact interval width monotone in stiffness", interval_monotone},
      {"retraction torque sweep vs golden section", retraction_torque},
      {"energy conservation", energy_conservation},
      {"oracle equivalences", oracle_equivalences},
      {"LQR properties", lqr_properties},
      {"self-rescue obstacle traversal", self_rescue},
      {"deterministic logs", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
