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

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "octrl/constraint/constraint.hpp"
#include "octrl/cost/cost_function.hpp"
#include "octrl/integrate/integrator.hpp"
#include "octrl/io/ini.hpp"
#include "octrl/lq/algebraic_riccati.hpp"
#include "octrl/mpc/mpc.hpp"
#include "octrl/nloc/solver.hpp"

namespace octrl::cli {

struct ModelConfig {
  std::string name;
  std::map<std::string, double> parameters;  // overrides of catalog defaults
  Matrix A, B;                               // only for name = linear
};

struct MpcConfig {
  MpcSettings settings;
  double control_dt = 0.02;
  double duration = 5.0;
  std::string disturbance_csv;  // resolved path, empty for none
};

struct IntegrateConfig {
  IntegratorSettings settings;
  double t_final = 1.0;
  Vector u;  // constant input
};

struct LqrConfig {
  bool discrete = false;
  Matrix A, B, Q, R;
  RiccatiSettings settings;
};

/// Parsed and validated configuration file. Sections other than [model] are optional; each
/// command checks for the ones it needs.
struct ProblemConfig {
  std::string path;
  std::optional<ModelConfig> model;
  std::shared_ptr<ControlledSystem> system;
  int state_dim = 0;
  int control_dim = 0;
  Vector x0;
  std::optional<CostFunction> cost;
  std::optional<ConstraintContainer> constraints;
  bool has_solver = false;
  NLOCSettings solver;
  double horizon = 1.0;
  double t0 = 0.0;
  std::optional<MpcConfig> mpc;
  std::optional<IntegrateConfig> integrate;
  std::optional<LqrConfig> lqr;
  std::string output_directory = ".";

  /// The optimal control problem assembled from model, initial state, cost and constraints.
  OptConProblem problem() const;
  /// Symplectic form of the model, for models that provide one.
  std::optional<SymplecticSystem> symplectic_model() const;
};

/// Throws ParseError for syntax errors (with line) and ValidationError for semantic errors
/// (naming `section.key`).
ProblemConfig parse_config(const std::string& path);
/// `base_dir` resolves relative file references such as mpc.disturbance.
ProblemConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

}  // namespace octrl::cli
