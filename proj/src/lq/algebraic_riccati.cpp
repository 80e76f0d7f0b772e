// Copyright 2026 The octrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "octrl/lq/algebraic_riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {
namespace {

void check_shapes(const char* who, const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() ||
      R.cols() != B.cols()) {
    throw ConfigurationError(std::string(who) + ": inconsistent matrix dimensions");
  }
}

double inf_norm(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

// B R^-1 B'
Matrix control_weight(const Matrix& B, const Matrix& R) {
  Eigen::LLT<Matrix> llt(R);
  if (llt.info() != Eigen::Success) throw SingularityFault("solve_care: R is not positive definite");
  return B * llt.solve(B.transpose());
}

Matrix care_rate(const Matrix& A, const Matrix& W, const Matrix& Q, const Matrix& P) {
  return A.transpose() * P + P * A - P * W * P + Q;
}

}  // namespace

double care_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, const Matrix& P) {
  return inf_norm(care_rate(A, control_weight(B, R), Q, P));
}

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, const Matrix& P) {
  const Matrix H = R + B.transpose() * P * B;
  const Matrix G = B.transpose() * P * A;
  const Matrix next = Q + A.transpose() * P * A - G.transpose() * H.ldlt().solve(G);
  return inf_norm(next - P);
}

LqrSolution solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                       const RiccatiSettings& settings) {
  check_shapes("solve_care", A, B, Q, R);
  if (!(settings.care_dt > 0.0)) throw ConfigurationError("solve_care: care_dt must be > 0");
  const Matrix W = control_weight(B, R);
  Matrix P = symmetrize(Q);
  double residual = inf_norm(care_rate(A, W, Q, P));
  long it = 0;
  // Reverse-time integration of dP/dtau = A'P + PA - PWP + Q; its rate is the ARE residual.
  while (residual >= settings.tol) {
    if (it >= settings.max_iters) {
      throw ConvergenceFault("solve_care: no convergence after " + std::to_string(it) + " steps", residual);
    }
    // The linearized flow has eigenvalues l_i + l_j of A - WP; keep h |l| <= 2 inside the RK4 region.
    const double row_sum = (A - W * P).cwiseAbs().rowwise().sum().maxCoeff();
    const double h = std::min(settings.care_dt, 1.0 / row_sum);
    const Matrix k1 = care_rate(A, W, Q, P);
    const Matrix k2 = care_rate(A, W, Q, P + 0.5 * h * k1);
    const Matrix k3 = care_rate(A, W, Q, P + 0.5 * h * k2);
    const Matrix k4 = care_rate(A, W, Q, P + h * k3);
    P = symmetrize(P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    residual = inf_norm(care_rate(A, W, Q, P));
    ++it;
    if (!std::isfinite(residual)) throw ConvergenceFault("solve_care: Riccati flow diverged", residual);
  }
  LqrSolution out;
  out.K = R.llt().solve(B.transpose() * P);
  out.P = std::move(P);
  out.residual = residual;
  out.iterations = it;
  return out;
}

LqrSolution solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                       const RiccatiSettings& settings) {
  check_shapes("solve_dare", A, B, Q, R);
  Matrix P = symmetrize(Q);
  double delta = std::numeric_limits<double>::infinity();
  long it = 0;
  while (true) {
    if (it >= settings.max_iters) {
      throw ConvergenceFault("solve_dare: no convergence after " + std::to_string(it) + " iterations", delta);
    }
    const Matrix H = R + B.transpose() * P * B;
    Eigen::LDLT<Matrix> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        (H.size() > 0 && ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * inf_norm(H))) {
      throw SingularityFault("solve_dare: R + B'PB is singular");
    }
    const Matrix G = B.transpose() * P * A;
    const Matrix next = symmetrize(Q + A.transpose() * P * A - G.transpose() * ldlt.solve(G));
    delta = inf_norm(next - P);
    P = next;
    ++it;
    if (!std::isfinite(delta) || !P.allFinite()) throw ConvergenceFault("solve_dare: iteration diverged", delta);
    if (delta < settings.tol) break;
  }
  const double residual = dare_residual(A, B, Q, R, P);
  if (!(residual < 10.0 * settings.tol)) throw ConvergenceFault("solve_dare: residual check failed", residual);
  LqrSolution out;
  const Matrix H = R + B.transpose() * P * B;
  out.K = H.ldlt().solve(B.transpose() * P * A);
  out.P = std::move(P);
  out.residual = residual;
  out.iterations = it;
  return out;
}

}  // namespace octrl
