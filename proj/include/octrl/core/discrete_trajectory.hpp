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

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "octrl/core/errors.hpp"
#include "octrl/core/types.hpp"

namespace octrl {

enum class InterpolationMode { kZeroOrderHold, kLinear };

/// Time-stamped series of vectors (or matrices) with strictly increasing stamps.
///
/// Lookups outside [front_time(), back_time()] hold the nearest edge value;
/// `covers()` lets callers detect that case.
template <typename Value>
class DiscreteTrajectory {
 public:
  DiscreteTrajectory() = default;

  explicit DiscreteTrajectory(InterpolationMode mode) : mode_(mode) {}

  DiscreteTrajectory(std::vector<double> times, std::vector<Value> values,
                     InterpolationMode mode = InterpolationMode::kLinear)
      : times_(std::move(times)), values_(std::move(values)), mode_(mode) {
    if (times_.size() != values_.size()) {
      throw ConfigurationError("trajectory: " + std::to_string(times_.size()) + " timestamps but " +
                               std::to_string(values_.size()) + " values");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1])) {
        throw ConfigurationError("trajectory: timestamps must be strictly increasing (index " +
                                 std::to_string(i) + ")");
      }
      check_shape(values_[i]);
    }
  }

  void push_back(double t, Value v) {
    if (!times_.empty() && !(t > times_.back())) {
      throw ConfigurationError("trajectory: timestamp " + std::to_string(t) +
                               " does not advance past " + std::to_string(times_.back()));
    }
    if (!values_.empty()) check_shape(v);
    times_.push_back(t);
    values_.push_back(std::move(v));
  }

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Value>& values() const { return values_; }
  const Value& operator[](std::size_t i) const { return values_[i]; }
  double time(std::size_t i) const { return times_[i]; }
  double front_time() const { return times_.front(); }
  double back_time() const { return times_.back(); }
  const Value& front() const { return values_.front(); }
  const Value& back() const { return values_.back(); }
  InterpolationMode mode() const { return mode_; }
  void set_mode(InterpolationMode mode) { mode_ = mode; }

  bool covers(double t) const { return !empty() && t >= times_.front() && t <= times_.back(); }

  /// Value at time t. Exact stamps return the stored value unchanged.
  Value interpolate(double t) const {
    if (empty()) throw ConfigurationError("trajectory: interpolate on empty trajectory");
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    if (mode_ == InterpolationMode::kZeroOrderHold || times_[lo] == t) return values_[lo];
    const double a = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return Value((1.0 - a) * values_[lo] + a * values_[hi]);
  }

  /// Index of the greatest stamp <= t, clamped to [0, size()-1].
  std::size_t index_at(double t) const {
    if (empty() || t <= times_.front()) return 0;
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
  }

 private:
  void check_shape(const Value& v) const {
    const Value& ref = values_.front();
    if (v.rows() != ref.rows() || v.cols() != ref.cols()) {
      throw ConfigurationError("trajectory: all values must share one dimension");
    }
  }

  std::vector<double> times_;
  std::vector<Value> values_;
  InterpolationMode mode_ = InterpolationMode::kLinear;
};

using StateTrajectory = DiscreteTrajectory<Vector>;
using ControlTrajectory = DiscreteTrajectory<Vector>;
using FeedbackTrajectory = DiscreteTrajectory<Matrix>;

}  // namespace octrl
