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

#include <benchmark/benchmark.h>

#include <random>

#include "inpipe/arm_statics.hpp"
#include "inpipe/config.hpp"
#include "inpipe/dynamics.hpp"
#include "inpipe/lqr.hpp"
#include "inpipe/scenario.hpp"

namespace {

using namespace inpipe;

void BM_ForwardDynamics(benchmark::State& state) {
  const RobotModel model = build_robot(ScenarioConfig{});
  DynState s;
  s.q = {0.01, -0.005, 0.002, 0.3, 0.1, -0.2};
  s.qdot = {0.1, 0.0, 0.0, 1.0, 0.2, -0.1};
  ForceSet f;
  f.drag = 6.3;
  f.spring = {4.0, 4.5, 5.0};
  f.torque = {0.1, 0.1, 0.1};
  const WheelContacts c{{0.15, 0.15, 0.15}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_dynamics(model, s, f, c));
  }
}
BENCHMARK(BM_ForwardDynamics);

void BM_HarnessStep(benchmark::State& state) {
  const ScenarioConfig cfg = default_config();
  const RobotModel model = build_robot(cfg);
  const Equilibrium eq = find_equilibrium(cfg, model, 0.0, 0.0);
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(
        model, eq.state,
        [&](const DynState& st) {
          return evaluate_harness(cfg, model, cfg.pipe, st, eq.torque, zero).generalized;
        },
        cfg.sim.dt));
  }
}
BENCHMARK(BM_HarnessStep);

void BM_LqrGainRobot(benchmark::State& state) {
  const ScenarioConfig cfg = default_config();
  const RobotModel model = build_robot(cfg);
  const ControllerDesign d = design_controller(cfg, model);
  const Eigen::MatrixXd q = cfg.controller.q_diag.asDiagonal();
  const Eigen::MatrixXd r = cfg.controller.r_diag.asDiagonal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lqr_gain(d.plant, q, r));
  }
}
BENCHMARK(BM_LqrGainRobot)->Unit(benchmark::kMillisecond);

void BM_LqrGainRandom(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd a(n, n), b(n, 2);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n01(rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = n01(rng);
  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lqr_gain(a, b, q, r));
  }
}
BENCHMARK(BM_LqrGainRandom)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_ContactInterval(benchmark::State& state) {
  const SpringArmGeometry g;
  for (auto _ : state) {
    benchmark::DoNotOptimize(contact_interval(g));
  }
}
BENCHMARK(BM_ContactInterval)->Unit(benchmark::kMicrosecond);

void BM_MaxRetractionTorque(benchmark::State& state) {
  const SpringArmGeometry g;
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_retraction_torque(g));
  }
}
BENCHMARK(BM_MaxRetractionTorque)->Unit(benchmark::kMicrosecond);

void BM_RunScenarioObstacle(benchmark::State& state) {
  const ScenarioConfig cfg = load_config(std::string(INPIPE_CONFIG_DIR) + "/obstacle.ini");
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg).summary.final_x);
  }
}
BENCHMARK(BM_RunScenarioObstacle)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
