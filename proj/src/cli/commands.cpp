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

#include "octrl/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "octrl/core/errors.hpp"
#include "octrl/io/csv.hpp"
#include "octrl/models/models.hpp"

namespace octrl::cli {
namespace {

using io::format_number;

std::filesystem::path output_dir(const ProblemConfig& cfg, const CommandOptions& opts) {
  std::filesystem::path dir = opts.out_dir.empty() ? std::filesystem::path(cfg.output_directory)
                                                   : std::filesystem::path(opts.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write '" + path.string() + "'");
  return out;
}

NLOCSettings solver_settings(const ProblemConfig& cfg, const CommandOptions& opts) {
  if (!cfg.has_solver) throw ValidationError("solver", "a [solver] section is required");
  NLOCSettings s = cfg.solver;
  s.workers = resolve_workers(opts.workers > 0 ? opts.workers : s.workers);
  return s;
}

void print_matrix(std::ostream& out, const char* name, const Matrix& M) {
  out << name << " =\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? " " : "") << format_number(M(i, j));
    out << '\n';
  }
}

void log_iteration(std::ostream& log, const IterationLog& it, bool verbose) {
  log << "iter " << it.iteration << "  cost " << format_number(it.cost) << "  defect "
      << format_number(it.defect_norm) << "  alpha " << format_number(it.alpha) << "  lambda "
      << format_number(it.lambda);
  if (verbose) {
    log << "  merit " << format_number(it.merit) << "  expected " << format_number(it.expected_decrease);
  }
  log << '\n';
}

}  // namespace

void write_gains_csv(std::ostream& out, const FeedbackTrajectory& gains) {
  const Eigen::Index rows = gains.empty() ? 0 : gains.front().rows();
  const Eigen::Index cols = gains.empty() ? 0 : gains.front().cols();
  out << "stage,t";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out << ",K" << i << '_' << j;
  }
  out << '\n';
  for (std::size_t k = 0; k < gains.size(); ++k) {
    out << k << ',' << format_number(gains.time(k));
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) out << ',' << format_number(gains[k](i, j));
    }
    out << '\n';
  }
}

void write_iterations_csv(std::ostream& out, const std::vector<IterationLog>& iterations) {
  out << "iteration,cost,defect,merit,alpha,lambda,expected_decrease\n";
  for (const auto& it : iterations) {
    out << it.iteration << ',' << format_number(it.cost) << ',' << format_number(it.defect_norm) << ','
        << format_number(it.merit) << ',' << format_number(it.alpha) << ',' << format_number(it.lambda) << ','
        << format_number(it.expected_decrease) << '\n';
  }
}

void write_mpc_stats_csv(std::ostream& out, const std::vector<MpcStepStats>& stats) {
  out << "step,t,cost,defect,solve_ms,alpha\n";
  for (const auto& s : stats) {
    out << s.step << ',' << format_number(s.t) << ',' << format_number(s.cost) << ',' << format_number(s.defect)
        << ',' << format_number(s.solve_ms) << ',' << format_number(s.alpha) << '\n';
  }
}

std::vector<Vector> load_disturbance(const std::string& path, int state_dim, long steps) {
  io::CsvTable table;
  try {
    table = io::read_csv(path, true);
  } catch (const ParseError& e) {
    throw ValidationError("mpc.disturbance", e.what());
  }
  if (static_cast<long>(table.rows.size()) != steps) {
    throw ValidationError("mpc.disturbance", "expected " + std::to_string(steps) + " rows (one per control step), got " +
                                                 std::to_string(table.rows.size()));
  }
  std::vector<Vector> out;
  out.reserve(table.rows.size());
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    if (static_cast<int>(row.size()) != state_dim) {
      throw ValidationError("mpc.disturbance", "row " + std::to_string(k + 1) + " has " + std::to_string(row.size()) +
                                                   " cells, expected " + std::to_string(state_dim));
    }
    Vector d(state_dim);
    for (int i = 0; i < state_dim; ++i) d(i) = row[static_cast<std::size_t>(i)].value_or(0.0);
    out.push_back(std::move(d));
  }
  return out;
}

int cmd_solve(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const OptConProblem problem = cfg.problem();
  const NLOCSettings settings = solver_settings(cfg, opts);
  const NLOCSolution sol = solve(problem, settings);
  for (const auto& it : sol.iterations) log_iteration(log, it, opts.verbose);

  const auto dir = output_dir(cfg, opts);
  {
    auto out = open_output(dir / "trajectory.csv");
    io::write_trajectory_csv(out, sol.x_traj, sol.u_traj);
  }
  {
    auto out = open_output(dir / "gains.csv");
    write_gains_csv(out, sol.K);
  }
  {
    auto out = open_output(dir / "iterations.csv");
    write_iterations_csv(out, sol.iterations);
  }
  log << "status " << to_string(sol.status) << "  accepted_iterations " << sol.accepted_iterations << "  cost "
      << format_number(sol.cost) << "  defect " << format_number(sol.defect_norm) << '\n';
  switch (sol.status) {
    case SolveStatus::kConverged:
      return kExitSuccess;
    case SolveStatus::kMaxIterations:
      return kExitMaxIterations;
    case SolveStatus::kLineSearchFailed:
      break;
  }
  log << sol.message << '\n';
  return kExitFault;
}

int cmd_mpc_sim(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  if (!cfg.mpc) throw ValidationError("mpc", "an [mpc] section is required");
  const OptConProblem problem = cfg.problem();
  const NLOCSettings settings = solver_settings(cfg, opts);
  const MpcConfig& m = *cfg.mpc;
  const double t_end = cfg.t0 + m.duration;
  const long steps = closed_loop_steps(cfg.t0, t_end, m.control_dt);
  std::vector<Vector> disturbance;
  if (!m.disturbance_csv.empty()) disturbance = load_disturbance(m.disturbance_csv, cfg.state_dim, steps);

  Mpc mpc(problem, settings, m.settings);
  const NLOCSolution& first = mpc.initialize(cfg.x0, cfg.t0);
  log << "initial solve: " << to_string(first.status) << "  cost " << format_number(first.cost) << '\n';
  const IntegratorSettings plant = cfg.integrate ? cfg.integrate->settings : IntegratorSettings{};
  const ClosedLoopResult result = run_closed_loop(mpc, *cfg.system, cfg.x0, cfg.t0, t_end, m.control_dt,
                                                  disturbance, plant);

  const auto dir = output_dir(cfg, opts);
  {
    auto out = open_output(dir / "closed_loop.csv");
    io::write_trajectory_csv(out, result.states, result.controls);
  }
  {
    auto out = open_output(dir / "mpc_stats.csv");
    write_mpc_stats_csv(out, result.stats);
  }
  long degraded = 0;
  for (const auto& s : result.stats) {
    degraded += s.degraded ? 1 : 0;
    if (opts.verbose) {
      log << "step " << s.step << "  t " << format_number(s.t) << "  cost " << format_number(s.cost) << "  alpha "
          << format_number(s.alpha) << (s.degraded ? "  degraded" : "") << '\n';
    }
  }
  log << "steps " << result.stats.size() << "  degraded " << degraded << "  final state";
  const Vector& xf = result.states.back();
  for (Eigen::Index i = 0; i < xf.size(); ++i) log << ' ' << format_number(xf(i));
  log << '\n';
  return kExitSuccess;
}

int cmd_lqr(const ProblemConfig& cfg, const CommandOptions&, std::ostream& log) {
  if (!cfg.lqr) throw ValidationError("lqr", "an [lqr] section is required");
  const LqrConfig& c = *cfg.lqr;
  const LqrSolution sol =
      c.discrete ? solve_dare(c.A, c.B, c.Q, c.R, c.settings) : solve_care(c.A, c.B, c.Q, c.R, c.settings);
  log << (c.discrete ? "discrete" : "continuous") << " algebraic Riccati equation\n";
  print_matrix(log, "P", sol.P);
  print_matrix(log, "K", sol.K);
  log << "residual " << format_number(sol.residual) << "\niterations " << sol.iterations << '\n';
  return kExitSuccess;
}

int cmd_integrate(const ProblemConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  if (!cfg.system) throw ValidationError("model.name", "a [model] section is required");
  if (!cfg.integrate) throw ValidationError("integrator", "an [integrator] section is required");
  if (cfg.x0.size() != cfg.state_dim) throw ValidationError("initial_state.x0", "an [initial_state] section is required");
  const IntegrateConfig& c = *cfg.integrate;
  StateTrajectory states;
  if (c.settings.scheme == IntegrationScheme::kSymplecticEuler) {
    const auto sym = cfg.symplectic_model();
    if (!sym) throw ValidationError("integrator.scheme", "model '" + cfg.system->name() + "' has no symplectic form");
    states = integrate_symplectic(*sym, cfg.x0, cfg.t0, c.t_final, c.settings, c.u);
  } else {
    const ControlledSystem& sys = *cfg.system;
    const Vector u = c.u;
    const VectorField f = [&sys, u](const Vector& x, double t) { return sys.evaluate_dynamics(x, u, t); };
    states = integrate(f, cfg.x0, cfg.t0, c.t_final, c.settings);
  }
  ControlTrajectory controls(InterpolationMode::kZeroOrderHold);
  if (cfg.control_dim > 0) {
    for (std::size_t k = 0; k + 1 < states.size(); ++k) controls.push_back(states.time(k), c.u);
  }
  const auto dir = output_dir(cfg, opts);
  {
    auto out = open_output(dir / "trajectory.csv");
    io::write_trajectory_csv(out, states, controls);
  }
  log << "steps " << states.size() - 1 << "  final state";
  for (Eigen::Index i = 0; i < states.back().size(); ++i) log << ' ' << format_number(states.back()(i));
  log << '\n';

  if (cfg.model && (cfg.model->name == "oscillator" || cfg.model->name == "pendulum")) {
    auto energy = [&](const Vector& x) {
      if (cfg.model->name == "oscillator") {
        const auto it = cfg.model->parameters.find("k");
        return models::oscillator_energy(it == cfg.model->parameters.end() ? 1.0 : it->second, x);
      }
      models::PendulumParams p;
      auto get = [&](const char* key, double fallback) {
        const auto it = cfg.model->parameters.find(key);
        return it == cfg.model->parameters.end() ? fallback : it->second;
      };
      p = {get("m", p.m), get("l", p.l), get("b", p.b), get("g", p.g)};
      return models::pendulum_energy(p, x);
    };
    const double e0 = energy(states.front());
    double worst = 0.0;
    for (const auto& x : states.values()) worst = std::max(worst, std::abs(energy(x) - e0));
    log << "energy initial " << format_number(e0) << "  final " << format_number(energy(states.back()))
        << "  max_relative_deviation " << format_number(e0 != 0.0 ? worst / std::abs(e0) : worst) << '\n';
  }
  return kExitSuccess;
}

int run_command(const std::string& command, const std::string& config_path, const CommandOptions& opts,
                std::ostream& log, std::ostream& err) {
  try {
    const ProblemConfig cfg = parse_config(config_path);
    if (command == "solve") return cmd_solve(cfg, opts, log);
    if (command == "mpc-sim") return cmd_mpc_sim(cfg, opts, log);
    if (command == "lqr") return cmd_lqr(cfg, opts, log);
    if (command == "integrate") return cmd_integrate(cfg, opts, log);
    err << "error: unknown command '" << command << "'\n";
    return kExitFault;
  } catch (const ParseError& e) {
    err << "error: " << config_path << ": " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitFault;
}

}  // namespace octrl::cli
