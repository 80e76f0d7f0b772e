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

#include "octrl/cost/cost_function.hpp"
#include "octrl/io/ini.hpp"

namespace octrl {

/// Builds a cost function from every `[cost.<name>]` section of `doc`, in file order.
///
///   kind  = quadratic | linear | mixed | quad_tracking | state_barrier
///   phase = intermediate (default) | final
///   t_on, t_off            optional activation window
///   quadratic       Q, R (R optional for final terms), x_ref, u_ref
///   linear          a, b (b optional for final terms)
///   mixed           P (control_dim x state_dim), x_ref, u_ref
///   quad_tracking   Q, R, times, x_ref (one row per time), u_ref (one row per time)
///   state_barrier   lb, ub, alpha
///
/// Syntax errors raise ParseError; bad shapes, asymmetric weights and unknown keys raise
/// ValidationError naming `cost.<name>.<key>`.
CostFunction load_costfunction(const io::IniDocument& doc, Eigen::Index state_dim, Eigen::Index control_dim);

/// Reads optional `t_on` / `t_off` keys.
ActivationWindow read_activation(io::SectionReader& reader);

}  // namespace octrl
