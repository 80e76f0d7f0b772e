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

#include "octrl/io/ini.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "octrl/core/errors.hpp"

namespace octrl::io {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

const IniEntry* IniSection::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

IniDocument IniDocument::parse(std::string_view text) {
  IniDocument doc;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ParseError("invalid section name '" + name + "'", line_no);
      if (doc.find(name)) throw ParseError("duplicate section [" + name + "]", line_no, name);
      doc.sections_.push_back(IniSection{name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value' but found '" + line + "'", line_no,
                       doc.sections_.empty() ? std::string() : doc.sections_.back().name);
    }
    if (doc.sections_.empty()) throw ParseError("key outside of any [section]", line_no);
    IniSection& section = doc.sections_.back();
    const std::string key = trim(line.substr(0, eq));
    if (!valid_name(key)) throw ParseError("invalid key '" + key + "'", line_no, section.name);
    if (section.find(key)) throw ParseError("duplicate key '" + key + "'", line_no, section.name);
    section.entries.push_back(IniEntry{key, trim(line.substr(eq + 1)), line_no});
  }
  return doc;
}

IniDocument IniDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const IniSection* IniDocument::find(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const IniSection*> IniDocument::with_prefix(std::string_view prefix) const {
  std::vector<const IniSection*> out;
  const std::string p = std::string(prefix) + ".";
  for (const auto& s : sections_) {
    if (s.name.rfind(p, 0) == 0) out.push_back(&s);
  }
  return out;
}

SectionReader::SectionReader(const IniSection& section) : section_(section) {}

int SectionReader::line(std::string_view key) const {
  const IniEntry* e = section_.find(key);
  return e ? e->line : section_.line;
}

const IniEntry& SectionReader::require(std::string_view key) {
  const IniEntry* e = section_.find(key);
  if (!e) throw ValidationError(location(key), "missing required key", section_.line);
  used_.insert(std::string(key));
  return *e;
}

std::optional<std::string> SectionReader::raw(std::string_view key) {
  const IniEntry* e = section_.find(key);
  if (!e) return std::nullopt;
  used_.insert(std::string(key));
  return e->value;
}

std::string SectionReader::text(std::string_view key) { return require(key).value; }

std::string SectionReader::text(std::string_view key, std::string fallback) {
  return raw(key).value_or(std::move(fallback));
}

double SectionReader::number(std::string_view key) {
  const IniEntry& e = require(key);
  try {
    return parse_number(e.value);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(location(key) + ": " + ex.what(), e.line, section_.name);
  }
}

double SectionReader::number(std::string_view key, double fallback) {
  return has(key) ? number(key) : fallback;
}

long SectionReader::integer(std::string_view key) {
  const double v = number(key);
  if (v != static_cast<double>(static_cast<long>(v))) {
    throw ValidationError(location(key), "expected an integer", line(key));
  }
  return static_cast<long>(v);
}

long SectionReader::integer(std::string_view key, long fallback) { return has(key) ? integer(key) : fallback; }

bool SectionReader::boolean(std::string_view key, bool fallback) {
  const auto v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ValidationError(location(key), "expected a boolean, got '" + *v + "'", line(key));
}

Vector SectionReader::vector(std::string_view key, Eigen::Index dim) {
  const IniEntry& e = require(key);
  Vector v;
  try {
    v = parse_vector(e.value);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(location(key) + ": " + ex.what(), e.line, section_.name);
  }
  if (dim >= 0 && v.size() != dim) {
    throw ValidationError(location(key),
                          "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()), e.line);
  }
  return v;
}

std::optional<Vector> SectionReader::optional_vector(std::string_view key, Eigen::Index dim) {
  if (!has(key)) return std::nullopt;
  return vector(key, dim);
}

Matrix SectionReader::matrix(std::string_view key, Eigen::Index rows, Eigen::Index cols) {
  const IniEntry& e = require(key);
  Matrix M;
  try {
    M = parse_matrix(e.value);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(location(key) + ": " + ex.what(), e.line, section_.name);
  }
  if ((rows >= 0 && M.rows() != rows) || (cols >= 0 && M.cols() != cols)) {
    throw ValidationError(location(key),
                          "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix, got " +
                              std::to_string(M.rows()) + "x" + std::to_string(M.cols()),
                          e.line);
  }
  return M;
}

std::optional<Matrix> SectionReader::optional_matrix(std::string_view key, Eigen::Index rows, Eigen::Index cols) {
  if (!has(key)) return std::nullopt;
  return matrix(key, rows, cols);
}

void SectionReader::finish() const {
  for (const auto& e : section_.entries) {
    if (!used_.count(e.key)) throw ValidationError(location(e.key), "unknown key", e.line);
  }
}

}  // namespace octrl::io
