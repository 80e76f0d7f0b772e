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

#include "octrl/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "octrl/core/errors.hpp"
#include "octrl/io/ini.hpp"

namespace octrl::io {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable parse_csv(std::string_view text, bool has_header) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (has_header && table.header.empty()) {
      table.header = cells;
      continue;
    }
    std::vector<std::optional<double>> row;
    for (const auto& c : cells) {
      if (c.find_first_not_of(" \t") == std::string::npos) {
        row.emplace_back();
        continue;
      }
      try {
        row.emplace_back(parse_number(c));
      } catch (const std::invalid_argument& ex) {
        throw ParseError(std::string("csv: ") + ex.what(), line_no);
      }
    }
    if (!table.header.empty() && row.size() != table.header.size()) {
      throw ParseError("csv: expected " + std::to_string(table.header.size()) + " cells, got " +
                           std::to_string(row.size()),
                       line_no);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open csv file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), has_header);
}

void write_trajectory_csv(std::ostream& out, const StateTrajectory& states, const ControlTrajectory& controls) {
  const Eigen::Index nx = states.empty() ? 0 : states.front().size();
  const Eigen::Index nu = controls.empty() ? 0 : controls.front().size();
  out << "t";
  for (Eigen::Index i = 0; i < nx; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < nu; ++i) out << ",u" << i;
  out << '\n';
  std::size_t ui = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double t = states.time(k);
    out << format_number(t);
    for (Eigen::Index i = 0; i < nx; ++i) out << ',' << format_number(states[k](i));
    while (ui < controls.size() && controls.time(ui) < t) ++ui;
    const bool has_u = ui < controls.size() && controls.time(ui) == t;
    for (Eigen::Index i = 0; i < nu; ++i) {
      out << ',';
      if (has_u) out << format_number(controls[ui](i));
    }
    out << '\n';
  }
}

TrajectoryTable parse_trajectory_csv(std::string_view text, int state_dim, int control_dim) {
  const CsvTable table = parse_csv(text, true);
  const auto expected = static_cast<std::size_t>(1 + state_dim + control_dim);
  if (table.header.size() != expected) {
    throw ParseError("trajectory csv: expected " + std::to_string(expected) + " columns");
  }
  TrajectoryTable out;
  out.controls.set_mode(InterpolationMode::kZeroOrderHold);
  for (const auto& row : table.rows) {
    if (!row[0]) throw ParseError("trajectory csv: missing time");
    const double t = *row[0];
    Vector x(state_dim);
    for (int i = 0; i < state_dim; ++i) {
      if (!row[static_cast<std::size_t>(1 + i)]) throw ParseError("trajectory csv: missing state cell");
      x(i) = *row[static_cast<std::size_t>(1 + i)];
    }
    out.states.push_back(t, x);
    if (control_dim > 0 && row[static_cast<std::size_t>(1 + state_dim)]) {
      Vector u(control_dim);
      for (int i = 0; i < control_dim; ++i) {
        const auto& cell = row[static_cast<std::size_t>(1 + state_dim + i)];
        if (!cell) throw ParseError("trajectory csv: partially empty control row");
        u(i) = *cell;
      }
      out.controls.push_back(t, u);
    }
  }
  return out;
}

}  // namespace octrl::io
