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

#include "octrl/lq/fhdtlqr.hpp"

#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {

FhdtlqrSolution solve_fhdtlqr(const std::vector<Matrix>& A, const std::vector<Matrix>& B, const std::vector<Matrix>& Q,
                              const std::vector<Matrix>& R, const std::vector<Matrix>& P, const Matrix& Q_final) {
  const std::size_t N = A.size();
  if (B.size() != N || Q.size() != N || R.size() != N || (!P.empty() && P.size() != N)) {
    throw ConfigurationError("solve_fhdtlqr: stage sequences have different lengths");
  }
  FhdtlqrSolution out;
  out.K.resize(N);
  out.S.resize(N + 1);
  out.S[N] = Q_final;
  for (std::size_t k = N; k-- > 0;) {
    const Matrix& S = out.S[k + 1];
    const Eigen::Index nx = A[k].rows();
    const Eigen::Index nu = B[k].cols();
    if (A[k].cols() != nx || B[k].rows() != nx || S.rows() != nx || Q[k].rows() != nx || R[k].rows() != nu ||
        (!P.empty() && (P[k].rows() != nu || P[k].cols() != nx))) {
      throw ConfigurationError("solve_fhdtlqr: inconsistent dimensions at stage " + std::to_string(k));
    }
    const Matrix H = R[k] + B[k].transpose() * S * B[k];
    Matrix G = B[k].transpose() * S * A[k];
    if (!P.empty()) G += P[k];
    Eigen::LLT<Matrix> llt(H);
    if (llt.info() != Eigen::Success) {
      throw SingularityFault("solve_fhdtlqr: stage Hessian is not positive definite at stage " + std::to_string(k),
                             static_cast<std::ptrdiff_t>(k));
    }
    out.K[k] = llt.solve(G);
    const Matrix Sk = Q[k] + A[k].transpose() * S * A[k] - out.K[k].transpose() * H * out.K[k];
    out.S[k] = 0.5 * (Sk + Sk.transpose());
  }
  return out;
}

}  // namespace octrl
