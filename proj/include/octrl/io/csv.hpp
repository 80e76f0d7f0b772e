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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octrl/core/discrete_trajectory.hpp"

namespace octrl::io {

/// Shortest round-trip-safe text: 17 significant digits, `%.17g` style.
std::string format_number(double v);

/// Numeric CSV with a header row; empty cells are std::nullopt.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

/// Throws ParseError with a 1-based line number on malformed cells.
CsvTable parse_csv(std::string_view text, bool has_header = true);
CsvTable read_csv(const std::string& path, bool has_header = true);

/// Writes `t,x0..x{n-1},u0..u{m-1}`; rows where `controls` has no knot leave the control cells empty.
void write_trajectory_csv(std::ostream& out, const StateTrajectory& states, const ControlTrajectory& controls);

struct TrajectoryTable {
  StateTrajectory states;
  ControlTrajectory controls;
};

/// Inverse of write_trajectory_csv.
TrajectoryTable parse_trajectory_csv(std::string_view text, int state_dim, int control_dim);

}  // namespace octrl::io
