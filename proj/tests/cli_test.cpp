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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "octrl/cli/commands.hpp"
#include "octrl/cli/config.hpp"
#include "octrl/core/errors.hpp"
#include "octrl/cost/terms.hpp"
#include "octrl/io/csv.hpp"
#include "support/util.hpp"

namespace octrl::cli {
namespace {

namespace fs = std::filesystem;
using testing::vec;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory per test, removed afterwards.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("octrl_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  struct Run {
    int code;
    std::string log;
    std::string err;
  };

  Run run(const std::string& command, const std::string& config, const std::string& out_sub = "out",
          int workers = 0) const {
    CommandOptions opts;
    opts.out_dir = (dir_ / out_sub).string();
    opts.workers = workers;
    std::ostringstream log, err;
    const int code = run_command(command, config, opts, log, err);
    return {code, log.str(), err.str()};
  }

  fs::path dir_;
};

const char* kMinimalPendulum =
    "[model]\nname = pendulum\n[initial_state]\nx0 = 0.1, 0\n"
    "[cost.term0]\nkind = quadratic\nQ = diag(1, 2)\nR = diag(0.5)\n"
    "[solver]\n";

TEST(ParseConfig, GoldenDoubleIntegrator) {
  const auto cfg = parse_config("data/double_integrator_lq.ini");
  ASSERT_TRUE(cfg.model);
  EXPECT_EQ(cfg.model->name, "double_integrator");
  EXPECT_EQ(cfg.state_dim, 2);
  EXPECT_EQ(cfg.control_dim, 1);
  EXPECT_EQ(cfg.x0, vec({1, 0}));
  EXPECT_TRUE(cfg.has_solver);
  EXPECT_EQ(cfg.solver.algorithm, Algorithm::kGNMS);
  EXPECT_EQ(cfg.solver.N, 100);
  EXPECT_EQ(cfg.horizon, 2.0);
  EXPECT_EQ(cfg.t0, 0.0);
  EXPECT_EQ(cfg.solver.sensitivity, DiscretizationMethod::kExactIntegrated);
  EXPECT_EQ(cfg.output_directory, "out");
  ASSERT_TRUE(cfg.cost);
  ASSERT_EQ(cfg.cost->intermediate_terms().size(), 1u);
  ASSERT_EQ(cfg.cost->final_terms().size(), 1u);
  const auto* stage = dynamic_cast<const QuadraticTerm*>(cfg.cost->intermediate_terms()[0].get());
  ASSERT_NE(stage, nullptr);
  EXPECT_EQ(stage->Q(), Matrix(vec({1, 1}).asDiagonal()));
  EXPECT_EQ(stage->R(), Matrix(vec({0.1}).asDiagonal()));
  EXPECT_FALSE(cfg.constraints);
  EXPECT_FALSE(cfg.mpc);
  EXPECT_FALSE(cfg.lqr);
}

TEST(ParseConfig, MinimalPendulumGetsDefaults) {
  const auto cfg = parse_config_text(kMinimalPendulum);
  const NLOCSettings defaults;
  EXPECT_EQ(cfg.solver.algorithm, defaults.algorithm);
  EXPECT_EQ(cfg.solver.N, defaults.N);
  EXPECT_EQ(cfg.solver.max_iterations, defaults.max_iterations);
  EXPECT_EQ(cfg.solver.convergence_tol, defaults.convergence_tol);
  EXPECT_EQ(cfg.solver.alphas, defaults.alphas);
  EXPECT_EQ(cfg.solver.workers, 0);
  EXPECT_EQ(cfg.horizon, 1.0);
  EXPECT_EQ(cfg.output_directory, ".");
  const auto* term = dynamic_cast<const QuadraticTerm*>(cfg.cost->intermediate_terms()[0].get());
  ASSERT_NE(term, nullptr);
  Matrix Q(2, 2);
  Q << 1, 0, 0, 2;
  EXPECT_EQ(term->Q(), Q);
  EXPECT_EQ(term->x_ref(), vec({0, 0}));
  const auto problem = cfg.problem();
  EXPECT_EQ(problem.T, 1.0);
  EXPECT_EQ(problem.x0, vec({0.1, 0}));
}

TEST(ParseConfig, ValueSyntax) {
  EXPECT_EQ(io::parse_matrix("1, 2; 3, 4"), (Matrix(2, 2) << 1, 2, 3, 4).finished());
  EXPECT_EQ(io::parse_matrix("diag(1, 2)"), Matrix(vec({1, 2}).asDiagonal()));
  EXPECT_EQ(io::parse_vector("1, -2.5, 3e2"), vec({1, -2.5, 300}));
  EXPECT_EQ(io::parse_number("pi"), M_PI);
  EXPECT_EQ(io::parse_number("-inf"), -INFINITY);
  EXPECT_THROW(io::parse_number("1.2.3"), std::invalid_argument);
}

TEST(ParseConfig, ValidationErrorsNameTheKey) {
  auto expect_location = [](const std::string& text, const std::string& location) {
    try {
      parse_config_text(text);
      ADD_FAILURE() << "no error for:\n" << text;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.location(), location) << e.what();
      EXPECT_GT(e.line(), 0) << e.what();
    }
  };
  std::string bad_q = kMinimalPendulum;
  bad_q.replace(bad_q.find("diag(1, 2)"), 10, "diag(1, 2, 3)");
  expect_location(bad_q, "cost.term0.Q");
  expect_location(std::string(kMinimalPendulum) + "N = 0\n", "solver.N");
  expect_location(std::string(kMinimalPendulum) + "horizon = 0\n", "solver.horizon");
  expect_location(std::string(kMinimalPendulum) + "colour = red\n", "solver.colour");
  expect_location(std::string(kMinimalPendulum) + "algorithm = sqp\n", "solver.algorithm");
  expect_location(std::string(kMinimalPendulum) + "[integrator]\nscheme = leapfrog\n", "integrator.scheme");
  expect_location(std::string(kMinimalPendulum) + "[plotting]\nstyle = dark\n", "plotting");
  expect_location("[model]\nname = cartpole\n", "model.name");
  expect_location("[model]\nname = pendulum\n[initial_state]\nx0 = 1, 2, 3\n", "initial_state.x0");
  expect_location(std::string(kMinimalPendulum) + "[mpc]\ncontrol_dt = -1\n", "mpc.control_dt");
}

TEST(ParseConfig, SyntaxErrorsCarryLine) {
  try {
    parse_config_text("[model]\nname = pendulum\nthis line has no equals sign\n");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_config_text("x0 = 1\n"), ParseError);
  EXPECT_THROW(parse_config_text("[model]\nname = pendulum\n[model]\nname = pendulum\n"), ParseError);
  EXPECT_THROW(parse_config("data/does_not_exist.ini"), ParseError);
}

TEST(CsvRoundTrip, BitExactAtSeventeenDigits) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  StateTrajectory x(InterpolationMode::kLinear);
  ControlTrajectory u(InterpolationMode::kZeroOrderHold);
  auto draw = [&] { return std::ldexp(mantissa(rng), exponent(rng)); };
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.1 * k + 1e-17 * k;
    x.push_back(t, vec({draw(), draw(), k == 3 ? -0.0 : draw()}));
    if (k < 50) u.push_back(t, vec({draw(), 5e-324}));
  }
  std::ostringstream out;
  io::write_trajectory_csv(out, x, u);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,x0,x1,x2,u0,u1");
  // final row carries no control
  const std::string last = text.substr(text.rfind('\n', text.size() - 2) + 1);
  EXPECT_EQ(last.substr(last.size() - 3), ",,\n");

  const auto back = io::parse_trajectory_csv(text, 3, 2);
  ASSERT_EQ(back.states.size(), x.size());
  ASSERT_EQ(back.controls.size(), u.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    EXPECT_EQ(std::memcmp(&back.states.times()[k], &x.times()[k], sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(back.states[k].data(), x[k].data(), 3 * sizeof(double)), 0) << "row " << k;
    if (k < u.size()) EXPECT_EQ(std::memcmp(back.controls[k].data(), u[k].data(), 2 * sizeof(double)), 0);
  }
}

TEST(CsvRoundTrip, FormatNumber) {
  EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_number(1.0), "1");
  EXPECT_EQ(io::format_number(-2.5), "-2.5");
  EXPECT_EQ(std::stod(io::format_number(M_PI)), M_PI);
}

TEST(CsvRoundTrip, MalformedCellReportsLine) {
  try {
    io::parse_csv("a,b\n1,2\n3,x\n");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST_F(CliTest, SolveLqConvergesInOneIterationAndWritesFiles) {
  const auto r = run("solve", "data/double_integrator_lq.ini");
  EXPECT_EQ(r.code, kExitSuccess) << r.err;
  EXPECT_NE(r.log.find("accepted_iterations 1"), std::string::npos) << r.log;
  const std::string traj = slurp(dir_ / "out" / "trajectory.csv");
  EXPECT_EQ(traj.substr(0, traj.find('\n')), "t,x0,x1,u0");
  const auto table = io::parse_trajectory_csv(traj, 2, 1);
  EXPECT_EQ(table.states.size(), 101u);
  EXPECT_EQ(table.controls.size(), 100u);
  const auto gains = io::parse_csv(slurp(dir_ / "out" / "gains.csv"));
  EXPECT_EQ(gains.header, (std::vector<std::string>{"stage", "t", "K0_0", "K0_1"}));
  EXPECT_EQ(gains.rows.size(), 100u);
  const auto iters = io::parse_csv(slurp(dir_ / "out" / "iterations.csv"));
  EXPECT_EQ(iters.header, (std::vector<std::string>{"iteration", "cost", "defect", "merit", "alpha", "lambda",
                                                    "expected_decrease"}));
  EXPECT_EQ(iters.rows.size(), 3u);  // initial guess, accepted step, convergence check
}

TEST_F(CliTest, SwingUpBelowRecordedBaseline) {
  const auto r = run("solve", "data/pendulum_swingup.ini");
  ASSERT_EQ(r.code, kExitSuccess) << r.err;
  const auto iters = io::parse_csv(slurp(dir_ / "out" / "iterations.csv"));
  const double final_cost = *iters.rows.back()[1];
  // recorded from the first verified run: 4.0639377357
  EXPECT_LT(final_cost, 4.064);
  EXPECT_GT(final_cost, 4.0);
}

TEST_F(CliTest, OutputIdenticalAcrossRunsAndWorkers) {
  ASSERT_EQ(run("solve", "data/pendulum_swingup.ini", "a", 1).code, 0);
  ASSERT_EQ(run("solve", "data/pendulum_swingup.ini", "b", 1).code, 0);
  ASSERT_EQ(run("solve", "data/pendulum_swingup.ini", "c", 3).code, 0);
  for (const char* f : {"trajectory.csv", "gains.csv", "iterations.csv"}) {
    const std::string a = slurp(dir_ / "a" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
    EXPECT_EQ(a, slurp(dir_ / "c" / f)) << f;
  }
}

TEST_F(CliTest, LqrPrintsRiccatiSolutions) {
  const auto d = run("lqr", "data/scalar_dare.ini");
  EXPECT_EQ(d.code, kExitSuccess) << d.err;
  EXPECT_NE(d.log.find("discrete"), std::string::npos);
  const auto p = d.log.find("P =\n");
  ASSERT_NE(p, std::string::npos) << d.log;
  EXPECT_NEAR(std::stod(d.log.substr(p + 4)), (1 + std::sqrt(5.0)) / 2, 1e-10) << d.log;
  const auto c = run("lqr", "data/scalar_care.ini");
  EXPECT_EQ(c.code, kExitSuccess) << c.err;
  EXPECT_NE(c.log.find("continuous"), std::string::npos);
  const auto q = c.log.find("P =\n");
  ASSERT_NE(q, std::string::npos) << c.log;
  EXPECT_NEAR(std::stod(c.log.substr(q + 4)), 1.0, 1e-8) << c.log;
}

TEST_F(CliTest, IntegrateDecayMatchesExponential) {
  const auto cfg = write("decay.ini",
                         "[model]\nname = linear\nA = -1\nB = 0\n[initial_state]\nx0 = 1\n"
                         "[integrator]\nscheme = rk4\ndt = 0.01\nt_final = 1\n");
  const auto r = run("integrate", cfg);
  ASSERT_EQ(r.code, kExitSuccess) << r.err;
  const auto table = io::parse_trajectory_csv(slurp(dir_ / "out" / "trajectory.csv"), 1, 1);
  EXPECT_NEAR(table.states.back_time(), 1.0, 1e-12);
  EXPECT_NEAR(table.states.back()(0), std::exp(-1.0), 1e-9);
}

TEST_F(CliTest, IntegrateSymplecticReportsEnergy) {
  const auto cfg = write("osc.ini",
                         "[model]\nname = oscillator\n[initial_state]\nx0 = 1, 0\n"
                         "[integrator]\nscheme = symplectic_euler\ndt = 0.01\nt_final = 100\n");
  const auto r = run("integrate", cfg);
  ASSERT_EQ(r.code, kExitSuccess) << r.err;
  const auto pos = r.log.find("max_relative_deviation ");
  ASSERT_NE(pos, std::string::npos) << r.log;
  EXPECT_LT(std::stod(r.log.substr(pos + 23)), 0.02);
}

TEST_F(CliTest, MpcSimStabilizesPendulum) {
  const auto r = run("mpc-sim", "data/pendulum_mpc.ini");
  ASSERT_EQ(r.code, kExitSuccess) << r.err;
  const auto table = io::parse_trajectory_csv(slurp(dir_ / "out" / "closed_loop.csv"), 2, 1);
  EXPECT_LT(std::abs(table.states.back()(0) - M_PI), 0.05);
  const auto stats = io::parse_csv(slurp(dir_ / "out" / "mpc_stats.csv"));
  EXPECT_EQ(stats.header, (std::vector<std::string>{"step", "t", "cost", "defect", "solve_ms", "alpha"}));
  EXPECT_EQ(stats.rows.size(), 400u);
}

// One row per (config, command) pair of the documented exit-code table.
TEST_F(CliTest, ExitCodeMatrix) {
  std::string swing = slurp("data/pendulum_swingup.ini");
  swing.replace(swing.find("max_iterations = 200"), 20, "max_iterations = 1");
  std::string mismatch = slurp("data/pendulum_mpc.ini");
  mismatch.replace(mismatch.find("duration = 8"), 12, "duration = 8\ndisturbance = short.csv");
  write("short.csv", "a,b\n0,0\n0,0\n");
  std::string bad_q = kMinimalPendulum;
  bad_q.replace(bad_q.find("diag(1, 2)"), 10, "diag(1, 2, 3)");

  struct Case {
    const char* command;
    std::string config;
    int code;
    const char* err_contains;
  };
  const std::vector<Case> cases = {
      {"solve", "data/double_integrator_lq.ini", kExitSuccess, ""},
      {"solve", write("maxit.ini", swing), kExitMaxIterations, ""},
      {"solve", write("section.ini", std::string(kMinimalPendulum) + "[plotting]\nstyle = dark\n"), kExitFault,
       "plotting"},
      {"solve", write("badq.ini", bad_q), kExitFault, "cost.term0.Q"},
      {"solve", write("nosolver.ini", "[model]\nname = pendulum\n"), kExitFault, "error"},
      {"integrate", write("scheme.ini", std::string(kMinimalPendulum) + "[integrator]\nscheme = leapfrog\n"),
       kExitFault, "integrator.scheme"},
      {"integrate", write("symp.ini", "[model]\nname = double_integrator\n[initial_state]\nx0 = 1, 0\n"
                                      "[integrator]\nscheme = symplectic_euler\n"),
       kExitFault, "integrator.scheme"},
      {"lqr", write("unstab.ini", "[lqr]\ntype = discrete\nA = 2\nB = 0\nQ = 1\nR = 1\nmax_iters = 10000\n"),
       kExitFault, "error"},
      {"lqr", "data/scalar_dare.ini", kExitSuccess, ""},
      {"mpc-sim", write("zero.ini", std::string(kMinimalPendulum) + "horizon = 0\n[mpc]\n"), kExitFault,
       "solver.horizon"},
      {"mpc-sim", write("mismatch.ini", mismatch), kExitFault, "mpc.disturbance"},
      {"mpc-sim", "data/double_integrator_lq.ini", kExitFault, "mpc"},
      {"solve", "data/missing.ini", kExitFault, "missing.ini"},
      {"fly", "data/double_integrator_lq.ini", kExitFault, "unknown command"},
  };
  for (const auto& c : cases) {
    const auto r = run(c.command, c.config);
    EXPECT_EQ(r.code, c.code) << c.command << " " << c.config << "\n" << r.err;
    if (c.code == kExitFault) {
      EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
      EXPECT_NE(r.err.find(c.err_contains), std::string::npos) << r.err;
    } else {
      EXPECT_TRUE(r.err.empty()) << r.err;
    }
  }
}

TEST(LoadDisturbance, RowCountAndWidth) {
  const fs::path p = fs::temp_directory_path() / "octrl_disturbance.csv";
  std::ofstream(p) << "a,b\n0,1\n2,3\n";
  const auto d = load_disturbance(p.string(), 2, 2);
  EXPECT_EQ(d[1], vec({2, 3}));
  EXPECT_THROW(load_disturbance(p.string(), 2, 3), ValidationError);
  EXPECT_THROW(load_disturbance(p.string(), 3, 2), ValidationError);
  fs::remove(p);
}

}  // namespace
}  // namespace octrl::cli
