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

#include "octrl/cost/terms.hpp"

#include <string>

#include "octrl/core/errors.hpp"
#include "octrl/diff/derivatives.hpp"

namespace octrl {
namespace {

template <typename S>
VectorX<S> deviation(const VectorX<S>& v, const Vector& ref) {
  VectorX<S> e(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) e(i) = v(i) - S(ref(i));
  return e;
}

// e' M f, skipping structural zeros of M.
template <typename S>
S bilinear(const VectorX<S>& e, const Matrix& M, const VectorX<S>& f) {
  S acc(0.0);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (M(i, j) != 0.0) acc = acc + S(M(i, j)) * e(i) * f(j);
    }
  }
  return acc;
}

template <typename S>
S relu(const S& v) {
  return v > S(0.0) ? v : S(0.0);
}

void require_symmetric(const Matrix& M, const char* name) {
  if (M.rows() != M.cols()) throw ConfigurationError(std::string(name) + " must be square");
  if (!M.isApprox(M.transpose(), 1e-12) && !(M - M.transpose()).isZero(1e-14)) {
    throw ConfigurationError(std::string(name) + " must be symmetric");
  }
}

void require_size(const Vector& v, Eigen::Index n, const char* name) {
  if (v.size() != n) {
    throw ConfigurationError(std::string(name) + " has dimension " + std::to_string(v.size()) + ", expected " +
                             std::to_string(n));
  }
}

template <typename S>
S quadratic_value(const Matrix& Q, const Matrix& R, const VectorX<S>& x, const VectorX<S>& u, const Vector& x_ref,
                  const Vector& u_ref) {
  const VectorX<S> e = deviation(x, x_ref);
  const VectorX<S> f = deviation(u, u_ref);
  return bilinear(e, Q, e) + bilinear(f, R, f);
}

void quadratic_derivatives(const Matrix& Q, const Matrix& R, const Vector& e, const Vector& f,
                           QuadraticApproximation& acc) {
  acc.q_x += 2.0 * (Q * e);
  acc.q_u += 2.0 * (R * f);
  acc.Q_xx += 2.0 * Q;
  acc.R_uu += 2.0 * R;
}

}  // namespace

const char* to_string(TermKind kind) {
  switch (kind) {
    case TermKind::kQuadratic:
      return "quadratic";
    case TermKind::kLinear:
      return "linear";
    case TermKind::kMixed:
      return "mixed";
    case TermKind::kQuadTracking:
      return "quad_tracking";
    case TermKind::kStateBarrier:
      return "state_barrier";
    case TermKind::kConstraintPenalty:
      return "constraint_penalty";
  }
  return "?";
}

QuadraticApproximation QuadraticApproximation::zero(Eigen::Index nx, Eigen::Index nu) {
  QuadraticApproximation a;
  a.q_x = Vector::Zero(nx);
  a.q_u = Vector::Zero(nu);
  a.Q_xx = Matrix::Zero(nx, nx);
  a.R_uu = Matrix::Zero(nu, nu);
  a.P_ux = Matrix::Zero(nu, nx);
  return a;
}

QuadraticApproximation& QuadraticApproximation::operator+=(const QuadraticApproximation& o) {
  q += o.q;
  q_x += o.q_x;
  q_u += o.q_u;
  Q_xx += o.Q_xx;
  R_uu += o.R_uu;
  P_ux += o.P_ux;
  return *this;
}

QuadraticApproximation& QuadraticApproximation::operator*=(double s) {
  q *= s;
  q_x *= s;
  q_u *= s;
  Q_xx *= s;
  R_uu *= s;
  P_ux *= s;
  return *this;
}

CostTerm::CostTerm(Eigen::Index state_dim, Eigen::Index control_dim, ActivationWindow window)
    : state_dim_(state_dim), control_dim_(control_dim), window_(window) {
  if (!(window_.t_on < window_.t_off)) throw ConfigurationError("cost term: activation requires t_on < t_off");
}

void CostTerm::check_dims(const StateVector& x, const ControlVector& u) const {
  if (x.size() != state_dim_ || u.size() != control_dim_) {
    throw ConfigurationError(std::string(to_string(kind())) + " term: got x[" + std::to_string(x.size()) + "], u[" +
                             std::to_string(u.size()) + "], expected x[" + std::to_string(state_dim_) + "], u[" +
                             std::to_string(control_dim_) + "]");
  }
}

double CostTerm::evaluate(const StateVector& x, const ControlVector& u, double t) const {
  check_dims(x, u);
  return window_.active(t) ? value(x, u, t) : 0.0;
}

void CostTerm::accumulate_analytic(const StateVector& x, const ControlVector& u, double t,
                                   QuadraticApproximation& acc) const {
  check_dims(x, u);
  if (!window_.active(t)) return;
  acc.q += value(x, u, t);
  add_derivatives(x, u, t, acc);
}

void CostTerm::accumulate_ad(const StateVector& x, const ControlVector& u, double t,
                             QuadraticApproximation& acc) const {
  check_dims(x, u);
  if (!window_.active(t)) return;
  const Eigen::Index nx = state_dim_;
  const Eigen::Index nu = control_dim_;
  Vector z(nx + nu);
  z << x, u;
  const Dual2Vector zd = seed_dual2(z);
  const SecondOrderExpansion exp = expand_dual2(value(Dual2Vector(zd.head(nx)), Dual2Vector(zd.tail(nu)), t), nx + nu);
  acc.q += exp.value;
  acc.q_x += exp.gradient.head(nx);
  acc.q_u += exp.gradient.tail(nu);
  acc.Q_xx += exp.hessian.topLeftCorner(nx, nx);
  acc.R_uu += exp.hessian.bottomRightCorner(nu, nu);
  acc.P_ux += exp.hessian.bottomLeftCorner(nu, nx);
}

// --- Quadratic -----------------------------------------------------------------------------

QuadraticTerm::QuadraticTerm(Matrix Q, Matrix R, Vector x_ref, Vector u_ref, ActivationWindow window)
    : CostTerm(Q.rows(), R.rows(), window),
      Q_(std::move(Q)),
      R_(std::move(R)),
      x_ref_(std::move(x_ref)),
      u_ref_(std::move(u_ref)) {
  require_symmetric(Q_, "quadratic term Q");
  require_symmetric(R_, "quadratic term R");
  require_size(x_ref_, Q_.rows(), "quadratic term x_ref");
  require_size(u_ref_, R_.rows(), "quadratic term u_ref");
}

double QuadraticTerm::value(const StateVector& x, const ControlVector& u, double) const {
  const Vector e = x - x_ref_;
  const Vector f = u - u_ref_;
  return e.dot(Q_ * e) + f.dot(R_ * f);
}

Dual2 QuadraticTerm::value(const Dual2Vector& x, const Dual2Vector& u, double) const {
  return quadratic_value(Q_, R_, x, u, x_ref_, u_ref_);
}

void QuadraticTerm::add_derivatives(const StateVector& x, const ControlVector& u, double,
                                    QuadraticApproximation& acc) const {
  quadratic_derivatives(Q_, R_, x - x_ref_, u - u_ref_, acc);
}

// --- Linear --------------------------------------------------------------------------------

LinearTerm::LinearTerm(Vector a, Vector b, ActivationWindow window)
    : CostTerm(a.size(), b.size(), window), a_(std::move(a)), b_(std::move(b)) {}

double LinearTerm::value(const StateVector& x, const ControlVector& u, double) const {
  return a_.dot(x) + b_.dot(u);
}

Dual2 LinearTerm::value(const Dual2Vector& x, const Dual2Vector& u, double) const {
  Dual2 acc(0.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) acc = acc + Dual2(a_(i)) * x(i);
  for (Eigen::Index i = 0; i < u.size(); ++i) acc = acc + Dual2(b_(i)) * u(i);
  return acc;
}

void LinearTerm::add_derivatives(const StateVector&, const ControlVector&, double, QuadraticApproximation& acc) const {
  acc.q_x += a_;
  acc.q_u += b_;
}

// --- Mixed ---------------------------------------------------------------------------------

MixedTerm::MixedTerm(Matrix P, Vector x_ref, Vector u_ref, ActivationWindow window)
    : CostTerm(P.cols(), P.rows(), window), P_(std::move(P)), x_ref_(std::move(x_ref)), u_ref_(std::move(u_ref)) {
  require_size(x_ref_, P_.cols(), "mixed term x_ref");
  require_size(u_ref_, P_.rows(), "mixed term u_ref");
}

double MixedTerm::value(const StateVector& x, const ControlVector& u, double) const {
  return 2.0 * (u - u_ref_).dot(P_ * (x - x_ref_));
}

Dual2 MixedTerm::value(const Dual2Vector& x, const Dual2Vector& u, double) const {
  return Dual2(2.0) * bilinear(deviation(u, u_ref_), P_, deviation(x, x_ref_));
}

void MixedTerm::add_derivatives(const StateVector& x, const ControlVector& u, double,
                                QuadraticApproximation& acc) const {
  acc.q_x += 2.0 * (P_.transpose() * (u - u_ref_));
  acc.q_u += 2.0 * (P_ * (x - x_ref_));
  acc.P_ux += 2.0 * P_;
}

// --- Tracking ------------------------------------------------------------------------------

QuadTrackingTerm::QuadTrackingTerm(Matrix Q, Matrix R, StateTrajectory x_ref, ControlTrajectory u_ref,
                                   ActivationWindow window)
    : CostTerm(Q.rows(), R.rows(), window),
      Q_(std::move(Q)),
      R_(std::move(R)),
      x_ref_(std::move(x_ref)),
      u_ref_(std::move(u_ref)) {
  require_symmetric(Q_, "tracking term Q");
  require_symmetric(R_, "tracking term R");
  if (x_ref_.empty() || u_ref_.empty()) throw ConfigurationError("tracking term: references must be non-empty");
  require_size(x_ref_.front(), Q_.rows(), "tracking term x_ref");
  require_size(u_ref_.front(), R_.rows(), "tracking term u_ref");
}

double QuadTrackingTerm::value(const StateVector& x, const ControlVector& u, double t) const {
  const Vector e = x - x_ref_.interpolate(t);
  const Vector f = u - u_ref_.interpolate(t);
  return e.dot(Q_ * e) + f.dot(R_ * f);
}

Dual2 QuadTrackingTerm::value(const Dual2Vector& x, const Dual2Vector& u, double t) const {
  return quadratic_value(Q_, R_, x, u, x_ref_.interpolate(t), u_ref_.interpolate(t));
}

void QuadTrackingTerm::add_derivatives(const StateVector& x, const ControlVector& u, double t,
                                       QuadraticApproximation& acc) const {
  quadratic_derivatives(Q_, R_, x - x_ref_.interpolate(t), u - u_ref_.interpolate(t), acc);
}

// --- State barrier -------------------------------------------------------------------------

StateBarrierTerm::StateBarrierTerm(Vector lb, Vector ub, double alpha, Eigen::Index control_dim,
                                   ActivationWindow window)
    : CostTerm(lb.size(), control_dim, window), lb_(std::move(lb)), ub_(std::move(ub)), alpha_(alpha) {
  require_size(ub_, lb_.size(), "state barrier ub");
  if (!(alpha_ > 0.0)) throw ConfigurationError("state barrier: alpha must be > 0");
  if ((lb_.array() > ub_.array()).any()) throw ConfigurationError("state barrier: lb must not exceed ub");
}

double StateBarrierTerm::value(const StateVector& x, const ControlVector&, double) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double over = relu(x(i) - ub_(i));
    const double under = relu(lb_(i) - x(i));
    acc += over * over + under * under;
  }
  return alpha_ * acc;
}

Dual2 StateBarrierTerm::value(const Dual2Vector& x, const Dual2Vector&, double) const {
  Dual2 acc(0.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > Dual2(ub_(i))) {
      const Dual2 over = x(i) - Dual2(ub_(i));
      acc = acc + over * over;
    }
    if (x(i) < Dual2(lb_(i))) {
      const Dual2 under = Dual2(lb_(i)) - x(i);
      acc = acc + under * under;
    }
  }
  return Dual2(alpha_) * acc;
}

void StateBarrierTerm::add_derivatives(const StateVector& x, const ControlVector&, double,
                                       QuadraticApproximation& acc) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > ub_(i)) {
      acc.q_x(i) += 2.0 * alpha_ * (x(i) - ub_(i));
      acc.Q_xx(i, i) += 2.0 * alpha_;
    } else if (x(i) < lb_(i)) {
      acc.q_x(i) -= 2.0 * alpha_ * (lb_(i) - x(i));
      acc.Q_xx(i, i) += 2.0 * alpha_;
    }
  }
}

}  // namespace octrl
