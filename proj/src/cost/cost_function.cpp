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

#include "octrl/cost/cost_function.hpp"

#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {

CostFunction::CostFunction(Eigen::Index state_dim, Eigen::Index control_dim) : nx_(state_dim), nu_(control_dim) {
  if (nx_ <= 0 || nu_ < 0) throw ConfigurationError("cost function: invalid dimensions");
}

namespace {

void check_term(const CostFunction::TermPtr& term, Eigen::Index nx, Eigen::Index nu) {
  if (!term) throw ConfigurationError("cost function: null term");
  if (term->state_dim() != nx || term->control_dim() != nu) {
    throw ConfigurationError(std::string("cost function: ") + to_string(term->kind()) + " term is for x[" +
                             std::to_string(term->state_dim()) + "], u[" + std::to_string(term->control_dim()) +
                             "], expected x[" + std::to_string(nx) + "], u[" + std::to_string(nu) + "]");
  }
}

}  // namespace

void CostFunction::add_intermediate(TermPtr term) {
  check_term(term, nx_, nu_);
  intermediate_.push_back(std::move(term));
}

void CostFunction::add_final(TermPtr term) {
  check_term(term, nx_, nu_);
  if (term->depends_on_control()) {
    throw ConfigurationError(std::string("cost function: final ") + to_string(term->kind()) +
                             " term must not depend on the control");
  }
  final_.push_back(std::move(term));
}

double CostFunction::evaluate_intermediate(const StateVector& x, const ControlVector& u, double t) const {
  double acc = 0.0;
  for (const auto& term : intermediate_) acc += term->evaluate(x, u, t);
  return acc;
}

double CostFunction::evaluate_final(const StateVector& x, double t) const {
  const Vector u = Vector::Zero(nu_);
  double acc = 0.0;
  for (const auto& term : final_) acc += term->evaluate(x, u, t);
  return acc;
}

QuadraticApproximation CostFunction::quadratic_approximation(const StateVector& x, const ControlVector& u, double t,
                                                             CostPhase phase, CostDerivatives deriv) const {
  QuadraticApproximation acc = QuadraticApproximation::zero(nx_, nu_);
  const bool final_phase = phase == CostPhase::kFinal;
  const Vector u_eval = final_phase ? Vector(Vector::Zero(nu_)) : Vector(u);
  for (const auto& term : final_phase ? final_ : intermediate_) {
    if (deriv == CostDerivatives::kAnalytic) {
      term->accumulate_analytic(x, u_eval, t, acc);
    } else {
      term->accumulate_ad(x, u_eval, t, acc);
    }
  }
  return acc;
}

}  // namespace octrl
