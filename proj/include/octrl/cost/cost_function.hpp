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

#include <memory>
#include <vector>

#include "octrl/cost/terms.hpp"

namespace octrl {

enum class CostPhase { kIntermediate, kFinal };
enum class CostDerivatives { kAnalytic, kAutoDiff };

/// Sum of intermediate terms l(x, u, t) and final terms l_f(x, T). Immutable after assembly and safe
/// to evaluate from several threads.
class CostFunction {
 public:
  using TermPtr = std::shared_ptr<const CostTerm>;

  CostFunction(Eigen::Index state_dim, Eigen::Index control_dim);

  Eigen::Index state_dim() const { return nx_; }
  Eigen::Index control_dim() const { return nu_; }

  /// Throws ConfigurationError on dimension mismatch.
  void add_intermediate(TermPtr term);
  /// Also throws ConfigurationError if the term depends on u.
  void add_final(TermPtr term);

  const std::vector<TermPtr>& intermediate_terms() const { return intermediate_; }
  const std::vector<TermPtr>& final_terms() const { return final_; }

  double evaluate_intermediate(const StateVector& x, const ControlVector& u, double t) const;
  double evaluate_final(const StateVector& x, double t) const;

  /// For the final phase `u` is ignored and the control blocks are zero.
  QuadraticApproximation quadratic_approximation(const StateVector& x, const ControlVector& u, double t,
                                                 CostPhase phase,
                                                 CostDerivatives deriv = CostDerivatives::kAnalytic) const;

 private:
  Eigen::Index nx_;
  Eigen::Index nu_;
  std::vector<TermPtr> intermediate_;
  std::vector<TermPtr> final_;
};

}  // namespace octrl
