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

#include "inpipe/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "inpipe/error.hpp"

namespace inpipe {
namespace {

Eigen::VectorXd plant_derivative(const PlantFunction& plant,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u) {
  Eigen::VectorXd f(12);
  f.head(6) = x.tail(6);
  f.tail(6) = plant(unpack_state(x), u);
  return f;
}

// Relative Riccati residual below which a stalled iteration is accepted.
constexpr double kStagnationAccept = 1e-9;

double spectral_abscissa(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw LqrError("eigenvalue decomposition failed");
  }
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace

Eigen::VectorXd pack_state(const DynState& s) {
  Eigen::VectorXd x(12);
  x << s.q.as_vector(), s.qdot.as_vector();
  return x;
}

DynState unpack_state(const Eigen::VectorXd& x, double time) {
  return {EulerPose::from_vector(x.head<6>()),
          EulerRates::from_vector(x.tail<6>()), time};
}

LinearizedPlant linearize(const PlantFunction& plant, const DynState& x_eq,
                          const Eigen::VectorXd& u_eq,
                          const LinearizeOptions& options) {
  const Eigen::VectorXd x0 = pack_state(x_eq);
  const Vector6d qdd = plant(x_eq, u_eq);
  if (!(qdd.cwiseAbs().maxCoeff() < options.equilibrium_tol)) {
    std::ostringstream msg;
    msg << "equilibrium is not stationary: max |qdd| = "
        << qdd.cwiseAbs().maxCoeff();
    throw ValidationError(msg.str());
  }

  const double h = options.step;
  const Eigen::Index m = u_eq.size();
  LinearizedPlant out;
  out.x_eq = x0;
  out.u_eq = u_eq;
  out.A = Eigen::MatrixXd::Zero(12, 12);
  out.B = Eigen::MatrixXd::Zero(12, m);
  out.A.topRightCorner(6, 6).setIdentity();
  for (int j = 0; j < 12; ++j) {
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(12);
    dx[j] = h;
    out.A.col(j).tail(6) = (plant_derivative(plant, x0 + dx, u_eq) -
                            plant_derivative(plant, x0 - dx, u_eq))
                               .tail(6) /
                           (2.0 * h);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd du = Eigen::VectorXd::Zero(m);
    du[j] = h;
    out.B.col(j).tail(6) =
        (plant(x_eq, u_eq + du) - plant(x_eq, u_eq - du)) / (2.0 * h);
  }
  return out;
}

PlantFunction wheel_torque_plant(const RobotModel& model,
                                 const WheelContacts& contacts,
                                 const ForceSet& base_forces) {
  return [model, contacts, base_forces](const DynState& s,
                                        const Eigen::VectorXd& u) {
    ForceSet f = base_forces;
    f.torque = u.head<3>();
    return forward_dynamics(model, s, f, contacts);
  };
}

Eigen::MatrixXd riccati_residual(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Q,
                                 const Eigen::MatrixXd& R,
                                 const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd rinv_bt = R.ldlt().solve(B.transpose());
  return A.transpose() * P + P * A - P * B * rinv_bt * P + Q;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& C) {
  // vec(A^T X + X A) = (I kron A^T + A^T kron I) vec(X)
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd at = A.transpose();
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // Block (i, j) of I kron A^T is delta_ij A^T; of A^T kron I is
      // A^T(i, j) I.
      auto block = kron.block(i * n, j * n, n, n);
      if (i == j) block += at;
      block.diagonal().array() += at(i, j);
    }
  }
  const Eigen::VectorXd rhs =
      -Eigen::Map<const Eigen::VectorXd>(C.data(), n * n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(kron);
  Eigen::VectorXd vec_x = lu.solve(rhs);
  // One step of iterative refinement.
  vec_x += lu.solve(rhs - kron * vec_x);
  Eigen::MatrixXd x = Eigen::Map<Eigen::MatrixXd>(vec_x.data(), n, n);
  if (!x.allFinite()) throw LqrError("Lyapunov equation is singular");
  return 0.5 * (x + x.transpose());
}

Eigen::MatrixXd stabilizing_seed(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd z(2 * n, 2 * n);
  z << A, -B * B.transpose(), -id, -A.transpose();

  // Newton iteration for sign(H) with determinant scaling.
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(z);
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) break;
    const double log_det =
        lu.matrixLU().diagonal().cwiseAbs().array().log().sum();
    const double c = std::exp(-log_det / static_cast<double>(2 * n));
    const Eigen::MatrixXd next = 0.5 * (c * z + inv / c);
    const double change = (next - z).norm();
    z = next;
    if (change <= 1e-13 * z.norm()) {
      converged = true;
      break;
    }
  }
  if (!converged || !z.allFinite()) {
    throw LqrError(
        "pair (A, B) is not stabilizable: Hamiltonian sign iteration failed");
  }

  // Stable invariant subspace: [W12; W22 + I] P = -[W11 + I; W21].
  Eigen::MatrixXd lhs(2 * n, n), rhs(2 * n, n);
  lhs << z.topRightCorner(n, n), z.bottomRightCorner(n, n) + id;
  rhs << z.topLeftCorner(n, n) + id, z.bottomLeftCorner(n, n);
  const Eigen::MatrixXd p = -lhs.colPivHouseholderQr().solve(rhs);
  const Eigen::MatrixXd k0 = B.transpose() * (0.5 * (p + p.transpose()));

  const double abscissa = spectral_abscissa(A - B * k0);
  if (!(abscissa < 0.0) || !k0.allFinite()) {
    std::ostringstream msg;
    msg << "pair (A, B) is not stabilizable: seed closed-loop abscissa "
        << abscissa;
    throw LqrError(msg.str());
  }
  return k0;
}

LqrGain lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                 const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                 const LqrOptions& options) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols()) {
    throw ValidationError("LQR matrix dimensions do not agree");
  }
  Eigen::LLT<Eigen::MatrixXd> r_llt(R);
  if (r_llt.info() != Eigen::Success) {
    throw ValidationError("R must be positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q_es(0.5 * (Q + Q.transpose()));
  if (q_es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q.norm())) {
    throw ValidationError("Q must be positive semi-definite");
  }

  LqrGain out;
  out.Q = Q;
  out.R = R;
  Eigen::MatrixXd k = stabilizing_seed(A, B);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  const double q_norm = Q.norm();
  auto relative_residual = [&](const Eigen::MatrixXd& x) {
    return riccati_residual(A, B, Q, R, x).norm() /
           std::max(q_norm + x.norm(), 1e-300);
  };
  // On ill-conditioned problems the Lyapunov solves stop improving P before
  // the relative change reaches the tolerance; the iteration then ends when
  // the residual has not improved for a few steps, keeping the best iterate.
  constexpr int kStagnationSteps = 4;
  Eigen::MatrixXd best_p;
  double best_residual = std::numeric_limits<double>::infinity();
  int since_best = 0;
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd closed = A - B * k;
    const Eigen::MatrixXd next =
        solve_lyapunov(closed, Q + k.transpose() * R * k);
    const double change = (next - p).norm();
    p = next;
    k = r_llt.solve(B.transpose() * p);
    out.iterations = it;
    const double residual = relative_residual(p);
    if (residual < best_residual) {
      best_residual = residual;
      best_p = p;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (change <= options.tolerance * std::max(p.norm(), 1e-300)) {
      converged = true;
      break;
    }
    if (since_best >= kStagnationSteps && best_residual <= kStagnationAccept) {
      p = best_p;
      k = r_llt.solve(B.transpose() * p);
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Newton-Kleinman iteration did not converge in "
        << options.max_iterations << " steps";
    throw LqrError(msg.str());
  }
  out.P = p;
  out.K = k;
  out.residual = riccati_residual(A, B, Q, R, p).norm();
  if (!(spectral_abscissa(A - B * k) < 0.0)) {
    throw LqrError("LQR closed loop is not stable");
  }
  return out;
}

LqrGain lqr_gain(const LinearizedPlant& plant, const Eigen::MatrixXd& Q,
                 const Eigen::MatrixXd& R, const LqrOptions& options) {
  return lqr_gain(plant.A, plant.B, Q, R, options);
}

Eigen::VectorXcd closed_loop_eigenvalues(const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B,
                                         const Eigen::MatrixXd& K) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A - B * K, false);
  return es.eigenvalues();
}

StabilizerCommand stabilizer_command(const Eigen::MatrixXd& K,
                                     const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x_eq,
                                     const Eigen::VectorXd& u_eq,
                                     double limit) {
  StabilizerCommand out;
  out.torque = u_eq - K * (x - x_eq);
  for (Eigen::Index i = 0; i < out.torque.size(); ++i) {
    if (std::abs(out.torque[i]) > limit) {
      out.torque[i] = std::copysign(limit, out.torque[i]);
      out.saturated = true;
    }
  }
  return out;
}

}  // namespace inpipe
