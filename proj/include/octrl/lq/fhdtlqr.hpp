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

#include "octrl/core/types.hpp"

namespace octrl {

/// Time-varying finite-horizon LQR for  sum_n x'Q_n x + u'R_n u + 2 u'P_n x  +  x_N' Q_f x_N.
/// The optimal law is u_n = -K_n x_n.
struct FhdtlqrSolution {
  std::vector<Matrix> K;  // N gains
  std::vector<Matrix> S;  // N + 1 cost-to-go matrices, S[N] = Q_f
};

/// Empty `P` means no cross terms. Throws SingularityFault (with the stage) if R_n + B_n' S B_n
/// cannot be factored.
FhdtlqrSolution solve_fhdtlqr(const std::vector<Matrix>& A, const std::vector<Matrix>& B, const std::vector<Matrix>& Q,
                              const std::vector<Matrix>& R, const std::vector<Matrix>& P, const Matrix& Q_final);

}  // namespace octrl
