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

#include "octrl/constraint/constraint.hpp"

#include <algorithm>
#include <string>

#include "octrl/core/errors.hpp"
#include "octrl/diff/derivatives.hpp"

namespace octrl {
namespace {

template <typename S>
VectorX<S> affine(const Matrix& C, const Matrix& D, const Vector& e, const VectorX<S>& x, const VectorX<S>& u) {
  VectorX<S> g(C.rows());
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    S acc(e(i));
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      if (C(i, j) != 0.0) acc = acc + S(C(i, j)) * x(j);
    }
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
      if (D(i, j) != 0.0) acc = acc + S(D(i, j)) * u(j);
    }
    g(i) = acc;
  }
  return g;
}

void check_size(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw ConfigurationError(std::string(what) + ": got dimension " + std::to_string(v.size()) + ", expected " +
                             std::to_string(n));
  }
}

}  // namespace

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kControlBox:
      return "control_box";
    case ConstraintKind::kStateBox:
      return "state_box";
    case ConstraintKind::kLinearPath:
      return "linear_path";
  }
  return "?";
}

ConstraintTerm::ConstraintTerm(Eigen::Index state_dim, Eigen::Index control_dim, Vector lb, Vector ub)
    : nx_(state_dim), nu_(control_dim), lb_(std::move(lb)), ub_(std::move(ub)) {
  check_size(ub_, lb_.size(), "constraint upper bound");
  if ((lb_.array() > ub_.array()).any()) throw ConfigurationError("constraint: lb must not exceed ub");
}

// --- Control box ---------------------------------------------------------------------------

ControlBoxConstraint::ControlBoxConstraint(Eigen::Index state_dim, Vector lb, Vector ub)
    : ConstraintTerm(state_dim, lb.size(), lb, ub) {}

Vector ControlBoxConstraint::evaluate(const StateVector&, const ControlVector& u, double) const { return u; }
DualVector ControlBoxConstraint::evaluate(const DualVector&, const DualVector& u, double) const { return u; }
Dual2Vector ControlBoxConstraint::evaluate(const Dual2Vector&, const Dual2Vector& u, double) const { return u; }

void ControlBoxConstraint::jacobians(const StateVector&, const ControlVector&, double, Matrix& J_x,
                                     Matrix& J_u) const {
  J_x = Matrix::Zero(nu_, nx_);
  J_u = Matrix::Identity(nu_, nu_);
}

// --- State box -----------------------------------------------------------------------------

StateBoxConstraint::StateBoxConstraint(Eigen::Index control_dim, Vector lb, Vector ub)
    : ConstraintTerm(lb.size(), control_dim, lb, ub) {}

Vector StateBoxConstraint::evaluate(const StateVector& x, const ControlVector&, double) const { return x; }
DualVector StateBoxConstraint::evaluate(const DualVector& x, const DualVector&, double) const { return x; }
Dual2Vector StateBoxConstraint::evaluate(const Dual2Vector& x, const Dual2Vector&, double) const { return x; }

void StateBoxConstraint::jacobians(const StateVector&, const ControlVector&, double, Matrix& J_x,
                                   Matrix& J_u) const {
  J_x = Matrix::Identity(nx_, nx_);
  J_u = Matrix::Zero(nx_, nu_);
}

// --- Linear path ---------------------------------------------------------------------------

LinearPathConstraint::LinearPathConstraint(Matrix C, Matrix D, Vector e, Vector lb, Vector ub)
    : ConstraintTerm(C.cols(), D.cols(), std::move(lb), std::move(ub)),
      C_(std::move(C)),
      D_(std::move(D)),
      e_(std::move(e)) {
  if (D_.rows() != C_.rows()) throw ConfigurationError("linear path constraint: C and D row counts differ");
  check_size(e_, C_.rows(), "linear path constraint offset");
  check_size(lower(), C_.rows(), "linear path constraint bounds");
}

Vector LinearPathConstraint::evaluate(const StateVector& x, const ControlVector& u, double) const {
  return C_ * x + D_ * u + e_;
}

DualVector LinearPathConstraint::evaluate(const DualVector& x, const DualVector& u, double) const {
  return affine(C_, D_, e_, x, u);
}

Dual2Vector LinearPathConstraint::evaluate(const Dual2Vector& x, const Dual2Vector& u, double) const {
  return affine(C_, D_, e_, x, u);
}

void LinearPathConstraint::jacobians(const StateVector&, const ControlVector&, double, Matrix& J_x,
                                     Matrix& J_u) const {
  J_x = C_;
  J_u = D_;
}

// --- Penalty -------------------------------------------------------------------------------

ConstraintPenaltyTerm::ConstraintPenaltyTerm(std::shared_ptr<const ConstraintTerm> constraint, double alpha)
    : CostTerm(constraint ? constraint->state_dim() : 0, constraint ? constraint->control_dim() : 0, {}),
      constraint_(std::move(constraint)),
      alpha_(alpha) {
  if (!constraint_) throw ConfigurationError("constraint penalty: null constraint");
  if (!(alpha_ > 0.0)) throw ConfigurationError("constraint penalty: alpha must be > 0");
}

double ConstraintPenaltyTerm::value(const StateVector& x, const ControlVector& u, double t) const {
  const Vector g = constraint_->evaluate(x, u, t);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double over = std::max(0.0, g(i) - constraint_->upper()(i));
    const double under = std::max(0.0, constraint_->lower()(i) - g(i));
    acc += over * over + under * under;
  }
  return alpha_ * acc;
}

Dual2 ConstraintPenaltyTerm::value(const Dual2Vector& x, const Dual2Vector& u, double t) const {
  const Dual2Vector g = constraint_->evaluate(x, u, t);
  Dual2 acc(0.0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Dual2 ub(constraint_->upper()(i));
    const Dual2 lb(constraint_->lower()(i));
    if (g(i) > ub) acc = acc + (g(i) - ub) * (g(i) - ub);
    if (g(i) < lb) acc = acc + (lb - g(i)) * (lb - g(i));
  }
  return Dual2(alpha_) * acc;
}

void ConstraintPenaltyTerm::add_derivatives(const StateVector& x, const ControlVector& u, double t,
                                            QuadraticApproximation& acc) const {
  const Vector g = constraint_->evaluate(x, u, t);
  Matrix J_x, J_u;
  constraint_->jacobians(x, u, t, J_x, J_u);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double r = 0.0;
    if (g(i) > constraint_->upper()(i)) {
      r = g(i) - constraint_->upper()(i);
    } else if (g(i) < constraint_->lower()(i)) {
      r = g(i) - constraint_->lower()(i);
    } else {
      continue;
    }
    const auto jx = J_x.row(i);
    const auto ju = J_u.row(i);
    acc.q_x += 2.0 * alpha_ * r * jx.transpose();
    acc.q_u += 2.0 * alpha_ * r * ju.transpose();
    acc.Q_xx += 2.0 * alpha_ * jx.transpose() * jx;
    acc.R_uu += 2.0 * alpha_ * ju.transpose() * ju;
    acc.P_ux += 2.0 * alpha_ * ju.transpose() * jx;
  }
}

// --- Container -----------------------------------------------------------------------------

ConstraintContainer::ConstraintContainer(Eigen::Index state_dim, Eigen::Index control_dim)
    : nx_(state_dim), nu_(control_dim) {}

void ConstraintContainer::check(const TermPtr& term) const {
  if (!term) throw ConfigurationError("constraint container: null term");
  if (term->state_dim() != nx_ || term->control_dim() != nu_) {
    throw ConfigurationError(std::string("constraint container: ") + to_string(term->kind()) + " term is for x[" +
                             std::to_string(term->state_dim()) + "], u[" + std::to_string(term->control_dim()) +
                             "], expected x[" + std::to_string(nx_) + "], u[" + std::to_string(nu_) + "]");
  }
}

void ConstraintContainer::add_intermediate(TermPtr term) {
  check(term);
  intermediate_.push_back(std::move(term));
}

void ConstraintContainer::add_terminal(TermPtr term) {
  check(term);
  if (term->depends_on_control()) {
    throw ConfigurationError(std::string("constraint container: terminal ") + to_string(term->kind()) +
                             " term must not depend on the control");
  }
  terminal_.push_back(std::move(term));
}

const std::vector<ConstraintContainer::TermPtr>& ConstraintContainer::terms(ConstraintPhase phase) const {
  return phase == ConstraintPhase::kTerminal ? terminal_ : intermediate_;
}

Eigen::Index ConstraintContainer::dimension(ConstraintPhase phase) const {
  Eigen::Index n = 0;
  for (const auto& term : terms(phase)) n += term->output_dim();
  return n;
}

ConstraintEvaluation ConstraintContainer::evaluate(const StateVector& x, const ControlVector& u, double t,
                                                   ConstraintPhase phase) const {
  if (x.size() != nx_ || u.size() != nu_) throw ConfigurationError("constraint container: dimension mismatch");
  const Eigen::Index m = dimension(phase);
  ConstraintEvaluation out{Vector(m), Vector(m), Vector(m)};
  Eigen::Index row = 0;
  for (const auto& term : terms(phase)) {
    const Eigen::Index k = term->output_dim();
    out.g.segment(row, k) = term->evaluate(x, u, t);
    out.lb.segment(row, k) = term->lower();
    out.ub.segment(row, k) = term->upper();
    row += k;
  }
  return out;
}

ConstraintJacobians ConstraintContainer::jacobians(const StateVector& x, const ControlVector& u, double t,
                                                   ConstraintPhase phase, ConstraintDerivatives deriv) const {
  if (x.size() != nx_ || u.size() != nu_) throw ConfigurationError("constraint container: dimension mismatch");
  const Eigen::Index m = dimension(phase);
  ConstraintJacobians out{Matrix(m, nx_), Matrix(m, nu_)};
  Eigen::Index row = 0;
  Vector z(nx_ + nu_);
  z << x, u;
  for (const auto& term : terms(phase)) {
    const Eigen::Index k = term->output_dim();
    Matrix J_x, J_u;
    if (deriv == ConstraintDerivatives::kAnalytic) {
      term->jacobians(x, u, t, J_x, J_u);
    } else {
      const DualVector zd = seed_duals(z);
      const DualVector g = term->evaluate(DualVector(zd.head(nx_)), DualVector(zd.tail(nu_)), t);
      J_x.setZero(k, nx_);
      J_u.setZero(k, nu_);
      for (Eigen::Index i = 0; i < k; ++i) {
        const auto& d = g(i).derivatives();
        for (std::size_t j = 0; j < d.size(); ++j) {
          const auto col = static_cast<Eigen::Index>(j);
          if (col < nx_) {
            J_x(i, col) = d[j];
          } else {
            J_u(i, col - nx_) = d[j];
          }
        }
      }
    }
    out.J_x.middleRows(row, k) = J_x;
    out.J_u.middleRows(row, k) = J_u;
    row += k;
  }
  return out;
}

double ConstraintContainer::violation(const StateVector& x, const ControlVector& u, double t,
                                      ConstraintPhase phase) const {
  const ConstraintEvaluation e = evaluate(x, u, t, phase);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.g.size(); ++i) {
    acc += std::max(0.0, e.g(i) - e.ub(i)) + std::max(0.0, e.lb(i) - e.g(i));
  }
  return acc;
}

std::vector<PenaltyTerm> ConstraintContainer::to_penalty_terms(double alpha) const {
  if (!(alpha > 0.0)) throw ConfigurationError("to_penalty_terms: alpha must be > 0");
  std::vector<PenaltyTerm> out;
  for (const ConstraintPhase phase : {ConstraintPhase::kIntermediate, ConstraintPhase::kTerminal}) {
    const CostPhase cost_phase = phase == ConstraintPhase::kTerminal ? CostPhase::kFinal : CostPhase::kIntermediate;
    for (const auto& term : terms(phase)) {
      if (term->kind() == ConstraintKind::kStateBox) {
        out.push_back({cost_phase, std::make_shared<StateBarrierTerm>(term->lower(), term->upper(), alpha, nu_)});
      } else {
        out.push_back({cost_phase, std::make_shared<ConstraintPenaltyTerm>(term, alpha)});
      }
    }
  }
  return out;
}

ConstraintEvaluation evaluate_constraints(const ConstraintContainer& cc, const StateVector& x, const ControlVector& u,
                                          double t, ConstraintPhase phase) {
  return cc.evaluate(x, u, t, phase);
}

ConstraintJacobians constraint_jacobians(const ConstraintContainer& cc, const StateVector& x, const ControlVector& u,
                                         double t, ConstraintPhase phase, ConstraintDerivatives deriv) {
  return cc.jacobians(x, u, t, phase, deriv);
}

double violation(const ConstraintContainer& cc, const StateVector& x, const ControlVector& u, double t,
                 ConstraintPhase phase) {
  return cc.violation(x, u, t, phase);
}

std::vector<PenaltyTerm> to_penalty_terms(const ConstraintContainer& cc, double alpha) {
  return cc.to_penalty_terms(alpha);
}

// --- Loading -------------------------------------------------------------------------------

ConstraintContainer load_constraints(const io::IniDocument& doc, Eigen::Index nx, Eigen::Index nu) {
  ConstraintContainer cc(nx, nu);
  for (const io::IniSection* section : doc.with_prefix("constraint")) {
    io::SectionReader r(*section);
    const std::string kind = r.text("kind");
    const std::string phase = r.text("phase", "intermediate");
    if (phase != "intermediate" && phase != "terminal") {
      throw ValidationError(r.location("phase"), "expected 'intermediate' or 'terminal', got '" + phase + "'",
                            r.line("phase"));
    }
    ConstraintContainer::TermPtr term;
    if (kind == "control_box") {
      Vector lb = r.vector("lb", nu);
      Vector ub = r.vector("ub", nu);
      if ((lb.array() > ub.array()).any()) throw ValidationError(r.location("ub"), "lb exceeds ub", r.line("ub"));
      term = std::make_shared<ControlBoxConstraint>(nx, std::move(lb), std::move(ub));
    } else if (kind == "state_box") {
      Vector lb = r.vector("lb", nx);
      Vector ub = r.vector("ub", nx);
      if ((lb.array() > ub.array()).any()) throw ValidationError(r.location("ub"), "lb exceeds ub", r.line("ub"));
      term = std::make_shared<StateBoxConstraint>(nu, std::move(lb), std::move(ub));
    } else if (kind == "linear_path") {
      Matrix C = r.matrix("C", -1, nx);
      const Eigen::Index m = C.rows();
      Matrix D = r.optional_matrix("D", m, nu).value_or(Matrix::Zero(m, nu));
      Vector e = r.optional_vector("e", m).value_or(Vector::Zero(m));
      Vector lb = r.vector("lb", m);
      Vector ub = r.vector("ub", m);
      if ((lb.array() > ub.array()).any()) throw ValidationError(r.location("ub"), "lb exceeds ub", r.line("ub"));
      term = std::make_shared<LinearPathConstraint>(std::move(C), std::move(D), std::move(e), std::move(lb),
                                                    std::move(ub));
    } else {
      throw ValidationError(r.location("kind"), "unknown constraint kind '" + kind + "'", r.line("kind"));
    }
    r.finish();
    if (phase == "terminal") {
      if (term->depends_on_control()) {
        throw ValidationError(r.location("phase"), "terminal constraints must not depend on the control",
                              r.line("phase"));
      }
      cc.add_terminal(std::move(term));
    } else {
      cc.add_intermediate(std::move(term));
    }
  }
  return cc;
}

}  // namespace octrl
