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

#include "octrl/cli/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "octrl/core/errors.hpp"
#include "octrl/cost/load.hpp"
#include "octrl/models/models.hpp"

namespace octrl::cli {
namespace {

template <typename Enum>
Enum choice(io::SectionReader& r, const char* key, const std::vector<std::pair<const char*, Enum>>& options,
            Enum fallback) {
  const auto v = r.raw(key);
  if (!v) return fallback;
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (*v == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ValidationError(r.location(key), "unknown value '" + *v + "' (expected one of: " + allowed + ")", r.line(key));
}

double positive(io::SectionReader& r, const char* key, double fallback) {
  const double v = r.number(key, fallback);
  if (!(v > 0.0)) throw ValidationError(r.location(key), "must be > 0", r.line(key));
  return v;
}

double non_negative(io::SectionReader& r, const char* key, double fallback) {
  const double v = r.number(key, fallback);
  if (!(v >= 0.0)) throw ValidationError(r.location(key), "must be >= 0", r.line(key));
  return v;
}

long at_least(io::SectionReader& r, const char* key, long fallback, long minimum) {
  const long v = r.integer(key, fallback);
  if (v < minimum) {
    throw ValidationError(r.location(key), "must be >= " + std::to_string(minimum), r.line(key));
  }
  return v;
}

bool known_section(const std::string& name) {
  static const char* fixed[] = {"model", "initial_state", "solver", "mpc", "integrator", "lqr", "output"};
  for (const char* f : fixed) {
    if (name == f) return true;
  }
  return name.rfind("cost.", 0) == 0 || name.rfind("constraint.", 0) == 0;
}

// Converts a ConfigurationError raised while building an object into a location-bearing error.
template <typename F>
auto located(const std::string& location, int line, F&& f) {
  try {
    return f();
  } catch (const ConfigurationError& e) {
    throw ValidationError(location, e.what(), line);
  }
}

void parse_model(const io::IniSection& section, ProblemConfig& cfg) {
  io::SectionReader r(section);
  ModelConfig m;
  m.name = r.text("name");
  if (m.name == "linear") {
    m.A = r.matrix("A");
    if (m.A.rows() != m.A.cols()) throw ValidationError(r.location("A"), "must be square", r.line("A"));
    m.B = r.matrix("B", m.A.rows());
    cfg.system = std::make_shared<ControlledSystem>(models::linear_system(m.A, m.B));
  } else {
    const models::ModelCatalogEntry* entry = nullptr;
    for (const auto& e : models::catalog()) {
      if (e.name == m.name) entry = &e;
    }
    if (!entry) throw ValidationError(r.location("name"), "unknown model '" + m.name + "'", r.line("name"));
    for (const auto& param : entry->parameters) {
      if (r.has(param.name)) m.parameters[param.name] = r.number(param.name);
    }
    cfg.system = located(r.location("name"), r.line("name"),
                         [&] { return std::make_shared<ControlledSystem>(models::make_model(m.name, m.parameters)); });
  }
  r.finish();
  cfg.state_dim = cfg.system->state_dim();
  cfg.control_dim = cfg.system->control_dim();
  cfg.model = std::move(m);
}

void parse_solver(const io::IniSection& section, ProblemConfig& cfg) {
  io::SectionReader r(section);
  NLOCSettings& s = cfg.solver;
  s.algorithm = choice<Algorithm>(r, "algorithm", {{"ilqr", Algorithm::kILQR}, {"gnms", Algorithm::kGNMS}},
                                  Algorithm::kGNMS);
  s.N = static_cast<int>(at_least(r, "N", s.N, 1));
  cfg.horizon = r.number("horizon", cfg.horizon);
  if (!(cfg.horizon > 0.0)) throw ValidationError(r.location("horizon"), "must be > 0", r.line("horizon"));
  cfg.t0 = r.number("t0", cfg.t0);
  s.sensitivity = choice<DiscretizationMethod>(r, "sensitivity",
                                               {{"forward_euler", DiscretizationMethod::kForwardEuler},
                                                {"backward_euler", DiscretizationMethod::kBackwardEuler},
                                                {"tustin", DiscretizationMethod::kTustin},
                                                {"exact", DiscretizationMethod::kExactIntegrated}},
                                               s.sensitivity);
  s.dynamics_derivatives = choice<DerivativeMethod>(r, "derivatives",
                                                    {{"auto", DerivativeMethod::kAuto},
                                                     {"analytic", DerivativeMethod::kAnalytic},
                                                     {"ad", DerivativeMethod::kAutoDiff},
                                                     {"fd", DerivativeMethod::kFiniteDifference}},
                                                    s.dynamics_derivatives);
  s.cost_derivatives = choice<CostDerivatives>(
      r, "cost_derivatives", {{"analytic", CostDerivatives::kAnalytic}, {"ad", CostDerivatives::kAutoDiff}},
      s.cost_derivatives);
  s.substeps = static_cast<int>(at_least(r, "substeps", s.substeps, 1));
  s.max_iterations = static_cast<int>(at_least(r, "max_iterations", s.max_iterations, 0));
  s.convergence_tol = positive(r, "convergence_tol", s.convergence_tol);
  s.defect_tol = positive(r, "defect_tol", s.defect_tol);
  if (r.has("alphas")) {
    const Vector a = r.vector("alphas");
    s.alphas.assign(a.data(), a.data() + a.size());
  }
  s.merit_defect_weight = r.number("merit_weight", s.merit_defect_weight);
  s.armijo = r.boolean("armijo", s.armijo);
  s.armijo_c = positive(r, "armijo_c", s.armijo_c);
  s.workers = static_cast<int>(at_least(r, "workers", 0, 0));
  s.u_lb = r.optional_vector("u_lb", cfg.control_dim);
  s.u_ub = r.optional_vector("u_ub", cfg.control_dim);
  s.constraint_penalty = positive(r, "constraint_penalty", s.constraint_penalty);
  s.riccati.lambda0 = positive(r, "lambda0", s.riccati.lambda0);
  s.riccati.lambda_max = positive(r, "lambda_max", s.riccati.lambda_max);
  r.finish();
  const int workers = s.workers;
  s.workers = 1;
  located(section.name, section.line, [&] {
    s.validate();
    return 0;
  });
  s.workers = workers;  // 0 = resolved at run time
  cfg.has_solver = true;
}

void parse_mpc(const io::IniSection& section, const std::string& base_dir, ProblemConfig& cfg) {
  io::SectionReader r(section);
  MpcConfig m;
  m.settings.horizon_mode = choice<HorizonMode>(
      r, "horizon_mode", {{"receding", HorizonMode::kReceding}, {"fixed_end_time", HorizonMode::kFixedEndTime}},
      m.settings.horizon_mode);
  m.settings.min_horizon = positive(r, "min_horizon", m.settings.min_horizon);
  m.settings.delay_estimate = non_negative(r, "delay", m.settings.delay_estimate);
  m.settings.iterations_per_step = static_cast<int>(at_least(r, "iterations_per_step", 1, 1));
  m.settings.warm_start = r.boolean("warm_start", true);
  m.control_dt = positive(r, "control_dt", m.control_dt);
  m.duration = positive(r, "duration", m.duration);
  if (const auto path = r.raw("disturbance")) {
    const std::filesystem::path p(*path);
    m.disturbance_csv = p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
  }
  r.finish();
  cfg.mpc = std::move(m);
}

void parse_integrator(const io::IniSection& section, ProblemConfig& cfg) {
  io::SectionReader r(section);
  IntegrateConfig c;
  c.settings.scheme = choice<IntegrationScheme>(r, "scheme",
                                                {{"euler", IntegrationScheme::kEuler},
                                                 {"rk4", IntegrationScheme::kRk4},
                                                 {"rk45", IntegrationScheme::kRk45Adaptive},
                                                 {"symplectic_euler", IntegrationScheme::kSymplecticEuler}},
                                                c.settings.scheme);
  c.settings.dt = positive(r, "dt", c.settings.dt);
  c.settings.abs_tol = positive(r, "abs_tol", c.settings.abs_tol);
  c.settings.rel_tol = positive(r, "rel_tol", c.settings.rel_tol);
  c.settings.max_steps = at_least(r, "max_steps", c.settings.max_steps, 1);
  c.t_final = r.number("t_final", cfg.t0 + c.t_final);
  if (!(c.t_final > cfg.t0)) throw ValidationError(r.location("t_final"), "must be after t0", r.line("t_final"));
  c.u = r.optional_vector("u", cfg.control_dim).value_or(Vector::Zero(cfg.control_dim));
  r.finish();
  cfg.integrate = std::move(c);
}

void parse_lqr(const io::IniSection& section, ProblemConfig& cfg) {
  io::SectionReader r(section);
  LqrConfig c;
  c.discrete = choice<bool>(r, "type", {{"continuous", false}, {"discrete", true}}, false);
  c.A = r.matrix("A");
  if (c.A.rows() != c.A.cols()) throw ValidationError(r.location("A"), "must be square", r.line("A"));
  const Eigen::Index n = c.A.rows();
  c.B = r.matrix("B", n);
  const Eigen::Index m = c.B.cols();
  c.Q = r.matrix("Q", n, n);
  c.R = r.matrix("R", m, m);
  c.settings.tol = positive(r, "tol", c.settings.tol);
  c.settings.max_iters = at_least(r, "max_iters", c.settings.max_iters, 1);
  c.settings.care_dt = positive(r, "care_dt", c.settings.care_dt);
  r.finish();
  cfg.lqr = std::move(c);
}

}  // namespace

OptConProblem ProblemConfig::problem() const {
  if (!system) throw ValidationError("model.name", "a [model] section is required");
  if (!cost) throw ValidationError("cost", "at least one [cost.<name>] section is required");
  if (x0.size() != state_dim) throw ValidationError("initial_state.x0", "an [initial_state] section is required");
  return OptConProblem{*system, *cost, constraints, x0, horizon, t0};
}

std::optional<SymplecticSystem> ProblemConfig::symplectic_model() const {
  if (!model) return std::nullopt;
  auto param = [&](const char* key, double fallback) {
    const auto it = model->parameters.find(key);
    return it == model->parameters.end() ? fallback : it->second;
  };
  if (model->name == "oscillator") return models::oscillator(param("k", 1.0));
  if (model->name == "pendulum") {
    models::PendulumParams p;
    p = {param("m", p.m), param("l", p.l), param("b", p.b), param("g", p.g)};
    return models::pendulum_symplectic(p);
  }
  return std::nullopt;
}

ProblemConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  const io::IniDocument doc = io::IniDocument::parse(text);
  ProblemConfig cfg;
  for (const auto& section : doc.sections()) {
    if (!known_section(section.name)) {
      throw ValidationError(section.name, "unknown section [" + section.name + "]", section.line);
    }
  }
  if (const auto* s = doc.find("model")) parse_model(*s, cfg);
  const bool needs_model = doc.find("initial_state") || !doc.with_prefix("cost").empty() ||
                           !doc.with_prefix("constraint").empty() || doc.find("integrator");
  if (needs_model && !cfg.system) throw ValidationError("model.name", "a [model] section is required");

  if (const auto* s = doc.find("initial_state")) {
    io::SectionReader r(*s);
    cfg.x0 = r.vector("x0", cfg.state_dim);
    r.finish();
  }
  if (cfg.system) {
    cfg.cost = load_costfunction(doc, cfg.state_dim, cfg.control_dim);
    cfg.constraints = load_constraints(doc, cfg.state_dim, cfg.control_dim);
    if (cfg.constraints->empty()) cfg.constraints.reset();
  }
  if (const auto* s = doc.find("solver")) parse_solver(*s, cfg);
  if (const auto* s = doc.find("mpc")) parse_mpc(*s, base_dir, cfg);
  if (const auto* s = doc.find("integrator")) parse_integrator(*s, cfg);
  if (const auto* s = doc.find("lqr")) parse_lqr(*s, cfg);
  if (const auto* s = doc.find("output")) {
    io::SectionReader r(*s);
    cfg.output_directory = r.text("directory", cfg.output_directory);
    r.finish();
  }
  return cfg;
}

ProblemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  ProblemConfig cfg = parse_config_text(ss.str(), base_dir.empty() ? "." : base_dir);
  cfg.path = path;
  return cfg;
}

}  // namespace octrl::cli
