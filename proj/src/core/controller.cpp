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

#include "octrl/core/controller.hpp"

#include <algorithm>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {

StateFeedbackController::StateFeedbackController(ControlTrajectory u_ff, FeedbackTrajectory gains,
                                                 StateTrajectory x_ref)
    : u_ff_(std::move(u_ff)), gains_(std::move(gains)), x_ref_(std::move(x_ref)) {
  if (u_ff_.empty()) throw ConfigurationError("state feedback: empty feedforward");
  if (u_ff_.times() != gains_.times() || u_ff_.times() != x_ref_.times()) {
    throw ConfigurationError("state feedback: feedforward, gains and reference must share timestamps");
  }
  const auto nu = u_ff_.front().size();
  const auto nx = x_ref_.front().size();
  if (gains_.front().rows() != nu || gains_.front().cols() != nx) {
    throw ConfigurationError("state feedback: gain is " + std::to_string(gains_.front().rows()) + "x" +
                             std::to_string(gains_.front().cols()) + ", expected " + std::to_string(nu) +
                             "x" + std::to_string(nx));
  }
  u_ff_.set_mode(InterpolationMode::kZeroOrderHold);
  gains_.set_mode(InterpolationMode::kZeroOrderHold);
  x_ref_.set_mode(InterpolationMode::kZeroOrderHold);
}

FeedbackEvaluation StateFeedbackController::evaluate(const StateVector& x, double t) const {
  if (x.size() != x_ref_.front().size()) {
    throw ConfigurationError("state feedback: state has dimension " + std::to_string(x.size()) + ", expected " +
                             std::to_string(x_ref_.front().size()));
  }
  const std::size_t i = u_ff_.index_at(t);
  FeedbackEvaluation out;
  out.u = u_ff_[i] + gains_[i] * (x - x_ref_[i]);
  out.extrapolated = t < u_ff_.front_time() || t > u_ff_.back_time();
  return out;
}

PIDController::PIDController(PidGains gains, Vector setpoint) : gains_(std::move(gains)) {
  const auto n = gains_.kp.size();
  if (gains_.ki.size() != n || gains_.kd.size() != n || gains_.integral_limit.size() != n ||
      static_cast<Eigen::Index>(gains_.state_index.size()) != n) {
    throw ConfigurationError("PID: all gain vectors must have one entry per channel");
  }
  if ((gains_.integral_limit.array() < 0.0).any()) throw ConfigurationError("PID: integral_limit must be >= 0");
  set_setpoint(std::move(setpoint));
  reset();
}

void PIDController::reset() {
  integral_ = Vector::Zero(gains_.kp.size());
  last_error_ = Vector::Zero(gains_.kp.size());
  has_last_ = false;
}

void PIDController::set_setpoint(Vector setpoint) {
  if (setpoint.size() != gains_.kp.size()) throw ConfigurationError("PID: setpoint needs one entry per channel");
  setpoint_ = std::move(setpoint);
}

ControlVector PIDController::compute_control(const StateVector& x, double t) {
  const double dt = has_last_ ? t - last_time_ : 0.0;
  last_time_ = t;
  return update(x, dt);
}

ControlVector PIDController::update(const StateVector& x, double dt) {
  const auto n = gains_.kp.size();
  Vector error(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int idx = gains_.state_index[static_cast<std::size_t>(i)];
    if (idx < 0 || idx >= x.size()) throw ConfigurationError("PID: state index out of range");
    error(i) = setpoint_(i) - x(idx);
  }
  Vector derivative = Vector::Zero(n);
  if (dt > 0.0 && has_last_) {
    integral_ += dt * error;
    derivative = (error - last_error_) / dt;
  }
  integral_ = integral_.cwiseMax(-gains_.integral_limit).cwiseMin(gains_.integral_limit);
  last_error_ = error;
  has_last_ = true;
  return gains_.kp.cwiseProduct(error) + gains_.ki.cwiseProduct(integral_) + gains_.kd.cwiseProduct(derivative);
}

}  // namespace octrl
