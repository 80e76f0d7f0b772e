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

#include "octrl/core/discrete_trajectory.hpp"
#include "octrl/core/types.hpp"

namespace octrl {

/// A control law u(x, t).
class Controller {
 public:
  virtual ~Controller() = default;

  virtual int control_dim() const = 0;
  virtual ControlVector compute_control(const StateVector& x, double t) = 0;
  virtual std::unique_ptr<Controller> clone() const = 0;
};

class ConstantController final : public Controller {
 public:
  explicit ConstantController(ControlVector u) : u_(std::move(u)) {}

  int control_dim() const override { return static_cast<int>(u_.size()); }
  ControlVector compute_control(const StateVector& /*x*/, double /*t*/) override { return u_; }
  std::unique_ptr<Controller> clone() const override { return std::make_unique<ConstantController>(*this); }

  const ControlVector& control() const { return u_; }

 private:
  ControlVector u_;
};

/// Result of a state-feedback lookup; `extrapolated` is set when t lies outside the stored horizon
/// and the edge values were held.
struct FeedbackEvaluation {
  ControlVector u;
  bool extrapolated = false;
};

/// u(t) = u_ff(t) + K(t) (x - x_ref(t)), all three series zero-order held on shared stamps.
class StateFeedbackController final : public Controller {
 public:
  StateFeedbackController(ControlTrajectory u_ff, FeedbackTrajectory gains, StateTrajectory x_ref);

  int control_dim() const override { return static_cast<int>(u_ff_.front().size()); }
  ControlVector compute_control(const StateVector& x, double t) override { return evaluate(x, t).u; }
  std::unique_ptr<Controller> clone() const override { return std::make_unique<StateFeedbackController>(*this); }

  FeedbackEvaluation evaluate(const StateVector& x, double t) const;

  const ControlTrajectory& feedforward() const { return u_ff_; }
  const FeedbackTrajectory& gains() const { return gains_; }
  const StateTrajectory& reference() const { return x_ref_; }
  double start_time() const { return u_ff_.front_time(); }

 private:
  ControlTrajectory u_ff_;
  FeedbackTrajectory gains_;
  StateTrajectory x_ref_;
};

/// Per-channel PID gains. Channel i regulates state component `state_index[i]` towards
/// `setpoint[i]` and drives control component i.
struct PidGains {
  Vector kp;
  Vector ki;
  Vector kd;
  Vector integral_limit;
  std::vector<int> state_index;
};

/// Classical PID with clamped integral (anti-windup) and a backward-difference derivative.
///
/// Not thread-safe: the integral and last error are mutated by every update.
class PIDController final : public Controller {
 public:
  PIDController(PidGains gains, Vector setpoint);

  int control_dim() const override { return static_cast<int>(gains_.kp.size()); }
  /// Derives dt from the previous call's time; the first call has no integral/derivative action.
  ControlVector compute_control(const StateVector& x, double t) override;
  std::unique_ptr<Controller> clone() const override { return std::make_unique<PIDController>(*this); }

  /// One update with an explicit sample period. dt <= 0 skips integral and derivative action.
  ControlVector update(const StateVector& x, double dt);

  void reset();
  void set_setpoint(Vector setpoint);
  const Vector& integral_state() const { return integral_; }

 private:
  PidGains gains_;
  Vector setpoint_;
  Vector integral_;
  Vector last_error_;
  bool has_last_ = false;
  double last_time_ = 0.0;
};

}  // namespace octrl
