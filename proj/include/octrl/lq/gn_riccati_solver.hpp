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

#include <vector>

#include "octrl/lq/algebraic_riccati.hpp"
#include "octrl/lq/lq_problem.hpp"

namespace octrl {

/// Solution of an LQOCProblem. The step is du_n = u_ff_delta_n + K_n dx_n, i.e. the feedback
/// sign is folded into K (K = -K_lqr for the equivalent finite-horizon LQR).
struct RiccatiSolution {
  std::vector<Vector> u_ff_delta;  // N
  std::vector<Matrix> K;           // N
  std::vector<Matrix> S;           // N + 1 cost-to-go Hessians
  std::vector<Vector> s;           // N + 1 cost-to-go gradients
  std::vector<Vector> dx;          // N + 1 forward-pass state steps, dx[0] = 0
  std::vector<Vector> du;          // N forward-pass control steps
  double dV1 = 0.0;                // linear part of the model change along (dx, du)
  double dV2 = 0.0;                // quadratic part
  double max_lambda = 0.0;         // largest regularization applied (0 if none)

  /// Predicted decrease of the quadratic model for the full step, -(dV1 + dV2).
  double expected_decrease() const { return -(dV1 + dV2); }
};

/// Backward Riccati sweep with defects, followed by the forward pass. Stage Hessians that are not
/// positive definite get lambda*I added, starting at settings.lambda0 and growing 10x per retry;
/// beyond settings.lambda_max a RegularizationFault is thrown.
RiccatiSolution gn_riccati_solve(const LQOCProblem& problem, const RiccatiSettings& settings = {});

}  // namespace octrl
