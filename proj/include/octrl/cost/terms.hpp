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

#include <limits>
#include <memory>
#include <string>

#include "octrl/core/discrete_trajectory.hpp"
#include "octrl/core/types.hpp"
#include "octrl/diff/dual.hpp"

namespace octrl {

enum class TermKind { kQuadratic, kLinear, kMixed, kQuadTracking, kStateBarrier, kConstraintPenalty };

const char* to_string(TermKind kind);

/// Rectangular time window [t_on, t_off]; always on by default.
struct ActivationWindow {
  double t_on = -std::numeric_limits<double>::infinity();
  double t_off = std::numeric_limits<double>::infinity();

  bool active(double t) const { return t >= t_on && t <= t_off; }
};

/// Second-order expansion of a cost around (x, u):
/// q + q_x' dx + q_u' du + 1/2 dx' Q_xx dx + 1/2 du' R_uu du + du' P_ux dx.
struct QuadraticApproximation {
  double q = 0.0;
  Vector q_x;
  Vector q_u;
  Matrix Q_xx;
  Matrix R_uu;
  Matrix P_ux;

  static QuadraticApproximation zero(Eigen::Index nx, Eigen::Index nu);
  QuadraticApproximation& operator+=(const QuadraticApproximation& o);
  QuadraticApproximation& operator*=(double s);
};

/// Scalar cost building block l(x, u, t). Evaluates to zero outside its activation window.
class CostTerm {
 public:
  CostTerm(Eigen::Index state_dim, Eigen::Index control_dim, ActivationWindow window);
  virtual ~CostTerm() = default;

  virtual TermKind kind() const = 0;
  /// True if the term varies with u (such terms are rejected as final terms).
  virtual bool depends_on_control() const = 0;

  Eigen::Index state_dim() const { return state_dim_; }
  Eigen::Index control_dim() const { return control_dim_; }
  const ActivationWindow& window() const { return window_; }

  double evaluate(const StateVector& x, const ControlVector& u, double t) const;
  /// Adds value, gradient and Hessian from the hand-derived formulas.
  void accumulate_analytic(const StateVector& x, const ControlVector& u, double t,
                           QuadraticApproximation& acc) const;
  /// Adds value, gradient and Hessian computed by nested forward-mode AD.
  void accumulate_ad(const StateVector& x, const ControlVector& u, double t, QuadraticApproximation& acc) const;
  /// The term over second-order duals (ignores the activation window).
  Dual2 evaluate_dual2(const Dual2Vector& x, const Dual2Vector& u, double t) const { return value(x, u, t); }

 protected:
  virtual double value(const StateVector& x, const ControlVector& u, double t) const = 0;
  virtual Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const = 0;
  /// Gradient/Hessian contributions only; the value is added by the caller.
  virtual void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                               QuadraticApproximation& acc) const = 0;

  void check_dims(const StateVector& x, const ControlVector& u) const;

 private:
  Eigen::Index state_dim_;
  Eigen::Index control_dim_;
  ActivationWindow window_;
};

/// (x - x_ref)' Q (x - x_ref) + (u - u_ref)' R (u - u_ref). No 1/2 factor.
class QuadraticTerm final : public CostTerm {
 public:
  QuadraticTerm(Matrix Q, Matrix R, Vector x_ref, Vector u_ref, ActivationWindow window = {});

  TermKind kind() const override { return TermKind::kQuadratic; }
  bool depends_on_control() const override { return !R_.isZero(0.0); }
  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }
  const Vector& x_ref() const { return x_ref_; }
  const Vector& u_ref() const { return u_ref_; }

 protected:
  double value(const StateVector& x, const ControlVector& u, double t) const override;
  Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                       QuadraticApproximation& acc) const override;

 private:
  Matrix Q_, R_;
  Vector x_ref_, u_ref_;
};

/// a' x + b' u.
class LinearTerm final : public CostTerm {
 public:
  LinearTerm(Vector a, Vector b, ActivationWindow window = {});

  TermKind kind() const override { return TermKind::kLinear; }
  bool depends_on_control() const override { return !b_.isZero(0.0); }

 protected:
  double value(const StateVector& x, const ControlVector& u, double t) const override;
  Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                       QuadraticApproximation& acc) const override;

 private:
  Vector a_, b_;
};

/// Cross term 2 (u - u_ref)' P (x - x_ref), P of shape control_dim x state_dim.
class MixedTerm final : public CostTerm {
 public:
  MixedTerm(Matrix P, Vector x_ref, Vector u_ref, ActivationWindow window = {});

  TermKind kind() const override { return TermKind::kMixed; }
  bool depends_on_control() const override { return !P_.isZero(0.0); }

 protected:
  double value(const StateVector& x, const ControlVector& u, double t) const override;
  Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                       QuadraticApproximation& acc) const override;

 private:
  Matrix P_;
  Vector x_ref_, u_ref_;
};

/// Quadratic penalty on deviation from time-varying references x_ref(t), u_ref(t).
class QuadTrackingTerm final : public CostTerm {
 public:
  QuadTrackingTerm(Matrix Q, Matrix R, StateTrajectory x_ref, ControlTrajectory u_ref, ActivationWindow window = {});

  TermKind kind() const override { return TermKind::kQuadTracking; }
  bool depends_on_control() const override { return !R_.isZero(0.0); }

 protected:
  double value(const StateVector& x, const ControlVector& u, double t) const override;
  Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                       QuadraticApproximation& acc) const override;

 private:
  Matrix Q_, R_;
  StateTrajectory x_ref_;
  ControlTrajectory u_ref_;
};

/// Soft state bounds: alpha * sum_i (max(0, x_i - ub_i)^2 + max(0, lb_i - x_i)^2).
/// Zero strictly inside the box and C^1 across its faces. Infinite bounds are allowed.
class StateBarrierTerm final : public CostTerm {
 public:
  StateBarrierTerm(Vector lb, Vector ub, double alpha, Eigen::Index control_dim, ActivationWindow window = {});

  TermKind kind() const override { return TermKind::kStateBarrier; }
  bool depends_on_control() const override { return false; }
  const Vector& lower() const { return lb_; }
  const Vector& upper() const { return ub_; }
  double alpha() const { return alpha_; }

 protected:
  double value(const StateVector& x, const ControlVector& u, double t) const override;
  Dual2 value(const Dual2Vector& x, const Dual2Vector& u, double t) const override;
  void add_derivatives(const StateVector& x, const ControlVector& u, double t,
                       QuadraticApproximation& acc) const override;

 private:
  Vector lb_, ub_;
  double alpha_;
};

}  // namespace octrl
