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

#include "octrl/lq/gn_riccati_solver.hpp"

#include <algorithm>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {

LQOCProblem LQOCProblem::zeros(int N, Eigen::Index nx, Eigen::Index nu) {
  if (N < 1) throw ConfigurationError("LQOCProblem: N must be >= 1");
  LQOCProblem p;
  p.N = N;
  const auto n = static_cast<std::size_t>(N);
  p.A.assign(n, Matrix::Zero(nx, nx));
  p.B.assign(n, Matrix::Zero(nx, nu));
  p.q.assign(n + 1, 0.0);
  p.q_x.assign(n + 1, Vector::Zero(nx));
  p.q_u.assign(n, Vector::Zero(nu));
  p.Q.assign(n + 1, Matrix::Zero(nx, nx));
  p.R.assign(n, Matrix::Zero(nu, nu));
  p.P.assign(n, Matrix::Zero(nu, nx));
  p.d.assign(n, Vector::Zero(nx));
  return p;
}

void LQOCProblem::validate() const {
  if (N < 1) throw ConfigurationError("LQOCProblem: N must be >= 1");
  const auto n = static_cast<std::size_t>(N);
  if (A.size() != n || B.size() != n || q_u.size() != n || R.size() != n || P.size() != n || d.size() != n ||
      q.size() != n + 1 || q_x.size() != n + 1 || Q.size() != n + 1) {
    throw ConfigurationError("LQOCProblem: stage sequences do not match N = " + std::to_string(N));
  }
  const Eigen::Index nx = state_dim();
  const Eigen::Index nu = control_dim();
  for (std::size_t k = 0; k <= n; ++k) {
    if (Q[k].rows() != nx || Q[k].cols() != nx || q_x[k].size() != nx) {
      throw ConfigurationError("LQOCProblem: state blocks inconsistent at stage " + std::to_string(k));
    }
    if (k == n) break;
    if (A[k].rows() != nx || A[k].cols() != nx || B[k].rows() != nx || B[k].cols() != nu || R[k].rows() != nu ||
        R[k].cols() != nu || P[k].rows() != nu || P[k].cols() != nx || q_u[k].size() != nu || d[k].size() != nx) {
      throw ConfigurationError("LQOCProblem: blocks inconsistent at stage " + std::to_string(k));
    }
  }
  if ((u_lb && u_lb->size() != nu) || (u_ub && u_ub->size() != nu)) {
    throw ConfigurationError("LQOCProblem: control bounds have wrong dimension");
  }
}

RiccatiSolution gn_riccati_solve(const LQOCProblem& p, const RiccatiSettings& settings) {
  p.validate();
  const auto N = static_cast<std::size_t>(p.N);
  const Eigen::Index nx = p.state_dim();
  const Eigen::Index nu = p.control_dim();

  RiccatiSolution sol;
  sol.u_ff_delta.resize(N);
  sol.K.resize(N);
  sol.S.resize(N + 1);
  sol.s.resize(N + 1);
  sol.S[N] = p.Q[N];
  sol.s[N] = p.q_x[N];

  for (std::size_t k = N; k-- > 0;) {
    const Matrix& A = p.A[k];
    const Matrix& B = p.B[k];
    const Matrix& S = sol.S[k + 1];
    const Vector sd = sol.s[k + 1] + S * p.d[k];
    const Matrix SA = S * A;
    const Matrix SB = S * B;

    const Vector gx = p.q_x[k] + A.transpose() * sd;
    const Vector gu = p.q_u[k] + B.transpose() * sd;
    const Matrix Hxx = p.Q[k] + A.transpose() * SA;
    Matrix Huu = p.R[k] + B.transpose() * SB;
    Huu = 0.5 * (Huu + Huu.transpose());
    const Matrix Hux = p.P[k] + B.transpose() * SA;

    Eigen::LLT<Matrix> llt(Huu);
    if (llt.info() != Eigen::Success) {
      double lambda = settings.lambda0;
      while (true) {
        if (lambda > settings.lambda_max) {
          throw RegularizationFault("gn_riccati_solve: control Hessian not positive definite at stage " +
                                        std::to_string(k) + " even with lambda = " + std::to_string(settings.lambda_max),
                                    static_cast<std::ptrdiff_t>(k), lambda);
        }
        llt.compute(Huu + lambda * Matrix::Identity(nu, nu));
        if (llt.info() == Eigen::Success) break;
        lambda *= 10.0;
      }
      sol.max_lambda = std::max(sol.max_lambda, lambda);
    }

    Vector l = -llt.solve(gu);
    Matrix K = -llt.solve(Hux);
    const Matrix HK = Huu * K;
    Matrix Sk = Hxx + K.transpose() * HK + K.transpose() * Hux + Hux.transpose() * K;
    sol.S[k] = 0.5 * (Sk + Sk.transpose());
    sol.s[k] = gx + K.transpose() * (Huu * l) + K.transpose() * gu + Hux.transpose() * l;
    sol.u_ff_delta[k] = std::move(l);
    sol.K[k] = std::move(K);
  }

  // Forward pass from dx_0 = 0 and model change along the step.
  sol.dx.resize(N + 1);
  sol.du.resize(N);
  sol.dx[0] = Vector::Zero(nx);
  double dV1 = 0.0;
  double dV2 = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const Vector& dx = sol.dx[k];
    Vector du = sol.u_ff_delta[k] + sol.K[k] * dx;
    dV1 += p.q_x[k].dot(dx) + p.q_u[k].dot(du);
    dV2 += 0.5 * dx.dot(p.Q[k] * dx) + 0.5 * du.dot(p.R[k] * du) + du.dot(p.P[k] * dx);
    sol.dx[k + 1] = p.A[k] * dx + p.B[k] * du + p.d[k];
    sol.du[k] = std::move(du);
  }
  dV1 += p.q_x[N].dot(sol.dx[N]);
  dV2 += 0.5 * sol.dx[N].dot(p.Q[N] * sol.dx[N]);
  sol.dV1 = dV1;
  sol.dV2 = dV2;
  return sol;
}

}  // namespace octrl
