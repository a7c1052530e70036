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

// Linearization of the body dynamics and continuous-time LQR synthesis.

#ifndef INPIPE_LQR_HPP_
#define INPIPE_LQR_HPP_

#include <functional>

#include <Eigen/Dense>

#include "inpipe/dynamics.hpp"

namespace inpipe {

// Accelerations of the loaded body for a given state and wheel-torque input.
using PlantFunction =
    std::function<Vector6d(const DynState&, const Eigen::VectorXd& input)>;

// State ordering: [q; qdot] (12 entries).
Eigen::VectorXd pack_state(const DynState& s);
DynState unpack_state(const Eigen::VectorXd& x, double time = 0.0);

struct LinearizedPlant {
  Eigen::MatrixXd A;  // 12 x 12
  Eigen::MatrixXd B;  // 12 x inputs
  Eigen::VectorXd x_eq;
  Eigen::VectorXd u_eq;
};

struct LinearizeOptions {
  double step = 1e-6;
  // Maximum |qdd| accepted at the equilibrium.
  double equilibrium_tol = 1e-6;
};

// Central differences of the plant about (x_eq, u_eq). The equilibrium may
// translate at constant velocity; only the accelerations must vanish. Throws
// ValidationError when they do not.
LinearizedPlant linearize(const PlantFunction& plant, const DynState& x_eq,
                          const Eigen::VectorXd& u_eq,
                          const LinearizeOptions& options = {});

// Plant made of the free body plus wheel torques on fixed contacts.
PlantFunction wheel_torque_plant(const RobotModel& model,
                                 const WheelContacts& contacts,
                                 const ForceSet& base_forces);

struct LqrGain {
  Eigen::MatrixXd K;
  Eigen::MatrixXd P;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  int iterations = 0;
  double residual = 0.0;  // Frobenius norm of the Riccati residual
};

struct LqrOptions {
  int max_iterations = 200;
  // On the relative change of P. An iteration whose residual has stalled at
  // round-off level also counts as converged.
  double tolerance = 1e-10;
};

// Riccati residual A^T P + P A - P B R^-1 B^T P + Q.
Eigen::MatrixXd riccati_residual(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Q,
                                 const Eigen::MatrixXd& R,
                                 const Eigen::MatrixXd& P);

// Solves A^T X + X A + C = 0.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& C);

// Stabilizing feedback for a stabilizable pair: K0 = B^T P with P the
// Riccati solution for Q = I, R = I, taken from the matrix sign function of
// the Hamiltonian. Throws LqrError when A - B K0 is not Hurwitz.
Eigen::MatrixXd stabilizing_seed(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B);

// Continuous algebraic Riccati equation by Newton-Kleinman iteration.
LqrGain lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                 const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                 const LqrOptions& options = {});
LqrGain lqr_gain(const LinearizedPlant& plant, const Eigen::MatrixXd& Q,
                 const Eigen::MatrixXd& R, const LqrOptions& options = {});

Eigen::VectorXcd closed_loop_eigenvalues(const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B,
                                         const Eigen::MatrixXd& K);

struct StabilizerCommand {
  Eigen::VectorXd torque;
  bool saturated = false;
};

// u = u_eq - K (x - x_eq), clipped to [-limit, limit] per channel.
StabilizerCommand stabilizer_command(const Eigen::MatrixXd& K,
                                     const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x_eq,
                                     const Eigen::VectorXd& u_eq,
                                     double limit);

}  // namespace inpipe

#endif  // INPIPE_LQR_HPP_
