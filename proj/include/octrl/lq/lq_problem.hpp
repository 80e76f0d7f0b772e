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

#pragma once

#include <optional>
#include <vector>

#include "octrl/core/types.hpp"

namespace octrl {

/// Affine-quadratic optimal control problem in deviation coordinates:
///
///   min  sum_n [ q_n + q_x,n' dx_n + q_u,n' du_n + 1/2 dx_n' Q_n dx_n + 1/2 du_n' R_n du_n + du_n' P_n dx_n ]
///        + q_N + q_x,N' dx_N + 1/2 dx_N' Q_N dx_N
///   s.t. dx_{n+1} = A_n dx_n + B_n du_n + d_n,   dx_0 = 0
///
/// The defect d_n is the gap (rollout end of interval n) - (state node n+1); zero for single shooting.
struct LQOCProblem {
  int N = 0;
  std::vector<Matrix> A, B;
  std::vector<double> q;
  std::vector<Vector> q_x, q_u;
  std::vector<Matrix> Q, R, P;
  std::vector<Vector> d;
  std::optional<Vector> u_lb, u_ub;

  /// All-zero problem with identity-free (zero) dynamics of the given shape.
  static LQOCProblem zeros(int N, Eigen::Index nx, Eigen::Index nu);

  Eigen::Index state_dim() const { return Q.empty() ? 0 : Q.front().rows(); }
  Eigen::Index control_dim() const { return R.empty() ? 0 : R.front().rows(); }

  /// Throws ConfigurationError on inconsistent sizes.
  void validate() const;
};

}  // namespace octrl
