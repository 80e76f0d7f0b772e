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

#include "octrl/core/types.hpp"
#include "octrl/cost/cost_function.hpp"
#include "octrl/diff/dual.hpp"
#include "octrl/io/ini.hpp"

namespace octrl {

enum class ConstraintKind { kControlBox, kStateBox, kLinearPath };
enum class ConstraintPhase { kIntermediate, kTerminal };

const char* to_string(ConstraintKind kind);

/// Vector constraint lb <= g(x, u, t) <= ub. Equalities use lb == ub.
class ConstraintTerm {
 public:
  ConstraintTerm(Eigen::Index state_dim, Eigen::Index control_dim, Vector lb, Vector ub);
  virtual ~ConstraintTerm() = default;

  virtual ConstraintKind kind() const = 0;
  virtual bool depends_on_control() const = 0;

  Eigen::Index state_dim() const { return nx_; }
  Eigen::Index control_dim() const { return nu_; }
  Eigen::Index output_dim() const { return lb_.size(); }
  const Vector& lower() const { return lb_; }
  const Vector& upper() const { return ub_; }

  virtual Vector evaluate(const StateVector& x, const ControlVector& u, double t) const = 0;
  virtual DualVector evaluate(const DualVector& x, const DualVector& u, double t) const = 0;
  virtual Dual2Vector evaluate(const Dual2Vector& x, const Dual2Vector& u, double t) const = 0;
  /// Hand-derived Jacobians (J_x, J_u).
  virtual void jacobians(const StateVector& x, const ControlVector& u, double t, Matrix& J_x,
                         Matrix& J_u) const = 0;

 protected:
  Eigen::Index nx_;
  Eigen::Index nu_;

 private:
  Vector lb_, ub_;
};

/// g = u.
class ControlBoxConstraint final : public ConstraintTerm {
 public:
  ControlBoxConstraint(Eigen::Index state_dim, Vector lb, Vector ub);

  ConstraintKind kind() const override { return ConstraintKind::kControlBox; }
  bool depends_on_control() const override { return true; }
  Vector evaluate(const StateVector& x, const ControlVector& u, double t) const override;
  DualVector evaluate(const DualVector& x, const DualVector& u, double t) const override;
  Dual2Vector evaluate(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void jacobians(const StateVector& x, const ControlVector& u, double t, Matrix& J_x, Matrix& J_u) const override;
};

/// g = x.
class StateBoxConstraint final : public ConstraintTerm {
 public:
  StateBoxConstraint(Eigen::Index control_dim, Vector lb, Vector ub);

  ConstraintKind kind() const override { return ConstraintKind::kStateBox; }
  bool depends_on_control() const override { return false; }
  Vector evaluate(const StateVector& x, const ControlVector& u, double t) const override;
  DualVector evaluate(const DualVector& x, const DualVector& u, double t) const override;
  Dual2Vector evaluate(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void jacobians(const StateVector& x, const ControlVector& u, double t, Matrix& J_x, Matrix& J_u) const override;
};

/// g = C x + D u + e.
class LinearPathConstraint final : public ConstraintTerm {
 public:
  LinearPathConstraint(Matrix C, Matrix D, Vector e, Vector lb, Vector ub);

  ConstraintKind kind() const override { return ConstraintKind::kLinearPath; }
  bool depends_on_control() const override { return !D_.isZero(0.0); }
  Vector evaluate(const StateVector& x, const ControlVector& u, double t) const override;
  DualVector evaluate(const DualVector& x, const DualVector& u, double t) const override;
  Dual2Vector evaluate(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void jacobians(const StateVector& x, const ControlVector& u, double t, Matrix& J_x, Matrix& J_u) const override;

 private:
  Matrix C_, D_;
  Vector e_;
};

struct ConstraintEvaluation {
  Vector g, lb, ub;
};

struct ConstraintJacobians {
  Matrix J_x, J_u;
};

enum class ConstraintDerivatives { kAnalytic, kAutoDiff };

/// Soft version of a constraint term: alpha * sum_i (max(0, g_i - ub_i)^2 + max(0, lb_i - g_i)^2).
/// The analytic Hessian is the Gauss-Newton one, exact for the affine built-in constraints.
class ConstraintPenaltyTerm final : public CostTerm {
 public:
  ConstraintPenaltyTerm(std::shared_ptr<const ConstraintTerm> constraint, double alpha);

  TermKind kind() const override { return TermKind::kConstraintPenalty; }
  bool depends_on_control() const override { return constraint_->depends_on_control(); }

 protected:
  double value(const StateVector& x, const ControlVector& u, double t) const override;
  Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                       QuadraticApproximation& acc) const override;

 private:
  std::shared_ptr<const ConstraintTerm> constraint_;
  double alpha_;
};

struct PenaltyTerm {
  CostPhase phase;
  CostFunction::TermPtr term;
};

/// Ordered stack of constraint terms for the intermediate and terminal phases.
class ConstraintContainer {
 public:
  using TermPtr = std::shared_ptr<const ConstraintTerm>;

  ConstraintContainer(Eigen::Index state_dim, Eigen::Index control_dim);

  Eigen::Index state_dim() const { return nx_; }
  Eigen::Index control_dim() const { return nu_; }

  void add_intermediate(TermPtr term);
  /// Terminal terms must not depend on u (ConfigurationError otherwise).
  void add_terminal(TermPtr term);

  const std::vector<TermPtr>& terms(ConstraintPhase phase) const;
  Eigen::Index dimension(ConstraintPhase phase) const;
  bool empty() const { return intermediate_.empty() && terminal_.empty(); }

  ConstraintEvaluation evaluate(const StateVector& x, const ControlVector& u, double t, ConstraintPhase phase) const;
  ConstraintJacobians jacobians(const StateVector& x, const ControlVector& u, double t, ConstraintPhase phase,
                                ConstraintDerivatives deriv = ConstraintDerivatives::kAnalytic) const;
  /// L1 distance to the feasible box; 0 iff feasible.
  double violation(const StateVector& x, const ControlVector& u, double t, ConstraintPhase phase) const;

  /// One quadratic-penalty cost term per constraint term; state boxes become StateBarrier terms.
  std::vector<PenaltyTerm> to_penalty_terms(double alpha) const;

 private:
  void check(const TermPtr& term) const;

  Eigen::Index nx_;
  Eigen::Index nu_;
  std::vector<TermPtr> intermediate_;
  std::vector<TermPtr> terminal_;
};

/// Free functions mirroring the container methods.
ConstraintEvaluation evaluate_constraints(const ConstraintContainer& cc, const StateVector& x, const ControlVector& u,
                                          double t, ConstraintPhase phase);
ConstraintJacobians constraint_jacobians(const ConstraintContainer& cc, const StateVector& x, const ControlVector& u,
                                         double t, ConstraintPhase phase,
                                         ConstraintDerivatives deriv = ConstraintDerivatives::kAnalytic);
double violation(const ConstraintContainer& cc, const StateVector& x, const ControlVector& u, double t,
                 ConstraintPhase phase);
std::vector<PenaltyTerm> to_penalty_terms(const ConstraintContainer& cc, double alpha);

/// Builds constraints from every `[constraint.<name>]` section of `doc`.
///
///   kind  = control_box | state_box | linear_path
///   phase = intermediate (default) | terminal
///   lb, ub (may contain inf / -inf)
///   linear_path: C, D, e (D and e default to zero)
ConstraintContainer load_constraints(const io::IniDocument& doc, Eigen::Index state_dim, Eigen::Index control_dim);

}  // namespace octrl
