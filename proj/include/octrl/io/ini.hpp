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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "octrl/core/types.hpp"

namespace octrl::io {

struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;

  const IniEntry* find(std::string_view key) const;
};

/// INI-style document: `[section]` headers followed by `key = value` lines.
/// `#` starts a comment anywhere on a line; blank lines are ignored. Duplicate sections
/// or keys, and keys outside a section, are syntax errors.
class IniDocument {
 public:
  static IniDocument parse(std::string_view text);
  /// Throws ParseError if the file cannot be read.
  static IniDocument load(const std::string& path);

  const std::vector<IniSection>& sections() const { return sections_; }
  const IniSection* find(std::string_view name) const;
  /// Sections named `prefix.<something>`, in file order.
  std::vector<const IniSection*> with_prefix(std::string_view prefix) const;

 private:
  std::vector<IniSection> sections_;
};

/// Typed, validating access to one section. Every key read is marked; `finish()` rejects the
/// rest as unknown.
class SectionReader {
 public:
  explicit SectionReader(const IniSection& section);

  const std::string& name() const { return section_.name; }
  bool has(std::string_view key) const { return section_.find(key) != nullptr; }
  std::string location(std::string_view key) const { return section_.name + "." + std::string(key); }
  int line(std::string_view key) const;

  std::optional<std::string> raw(std::string_view key);
  std::string text(std::string_view key);
  std::string text(std::string_view key, std::string fallback);
  double number(std::string_view key);
  double number(std::string_view key, double fallback);
  long integer(std::string_view key);
  long integer(std::string_view key, long fallback);
  bool boolean(std::string_view key, bool fallback);
  /// Vector of any length; or of exactly `dim` entries when dim >= 0.
  Vector vector(std::string_view key, Eigen::Index dim = -1);
  std::optional<Vector> optional_vector(std::string_view key, Eigen::Index dim = -1);
  /// Matrix of the given shape (negative = any). A scalar is accepted for 1x1.
  Matrix matrix(std::string_view key, Eigen::Index rows = -1, Eigen::Index cols = -1);
  std::optional<Matrix> optional_matrix(std::string_view key, Eigen::Index rows = -1, Eigen::Index cols = -1);

  /// Throws ValidationError for the first key that was never read.
  void finish() const;

 private:
  const IniEntry& require(std::string_view key);

  const IniSection& section_;
  std::set<std::string, std::less<>> used_;
};

// Value syntax shared by the config format.
//   number : decimal literal, `inf`, `pi`, optionally signed
//   vector : `1, 2, 3`
//   matrix : `diag(1, 2)` or row-major rows separated by `;` (`1, 0; 0, 2`)

/// Throws std::invalid_argument on malformed text.
double parse_number(std::string_view text);
Vector parse_vector(std::string_view text);
Matrix parse_matrix(std::string_view text);

}  // namespace octrl::io
