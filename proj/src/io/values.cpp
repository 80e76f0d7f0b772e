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

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "octrl/io/ini.hpp"

namespace octrl::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

double parse_number(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  double sign = 1.0;
  std::string_view body = s;
  if (body.front() == '-' || body.front() == '+') {
    sign = body.front() == '-' ? -1.0 : 1.0;
    body.remove_prefix(1);
  }
  if (body == "pi") return sign * std::numbers::pi;
  if (body == "inf") return sign * std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // from_chars rejects a leading '+'.
    if (s.front() == '+' && body.size() + 1 == s.size()) return parse_number(body);
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  }
  return value;
}

Vector parse_vector(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) return Vector(0);
  const auto parts = split(s, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_number(parts[i]);
  return v;
}

Matrix parse_matrix(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty matrix");
  if (s.substr(0, 5) == "diag(") {
    if (s.back() != ')') throw std::invalid_argument("unterminated diag(...)");
    const Vector d = parse_vector(s.substr(5, s.size() - 6));
    if (d.size() == 0) throw std::invalid_argument("empty diag()");
    return d.asDiagonal();
  }
  const auto rows = split(s, ';');
  std::vector<Vector> parsed;
  for (const auto row : rows) parsed.push_back(parse_vector(row));
  const Eigen::Index cols = parsed.front().size();
  if (cols == 0) throw std::invalid_argument("empty matrix row");
  Matrix M(static_cast<Eigen::Index>(parsed.size()), cols);
  for (std::size_t r = 0; r < parsed.size(); ++r) {
    if (parsed[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    M.row(static_cast<Eigen::Index>(r)) = parsed[r].transpose();
  }
  return M;
}

}  // namespace octrl::io
