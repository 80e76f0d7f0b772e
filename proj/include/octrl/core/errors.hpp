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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace octrl {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a NaN or infinity.
class NumericalFault : public Error {
 public:
  NumericalFault(const std::string& what, std::ptrdiff_t index = -1, double time = 0.0)
      : Error(what), index_(index), time_(time) {}

  /// Offending vector component, or -1 if not applicable.
  std::ptrdiff_t index() const { return index_; }
  double time() const { return time_; }

 private:
  std::ptrdiff_t index_;
  double time_;
};

/// Inconsistent dimensions, missing components or invalid parameters.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Adaptive step size collapsed below the allowed minimum.
class StiffnessFault : public Error {
 public:
  StiffnessFault(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// A linear solve hit a singular (or numerically singular) matrix.
class SingularityFault : public Error {
 public:
  SingularityFault(const std::string& what, std::ptrdiff_t stage = -1) : Error(what), stage_(stage) {}
  std::ptrdiff_t stage() const { return stage_; }

 private:
  std::ptrdiff_t stage_;
};

/// An iterative method did not converge; carries the last residual.
class ConvergenceFault : public Error {
 public:
  ConvergenceFault(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Hessian regularization exceeded its cap.
class RegularizationFault : public Error {
 public:
  RegularizationFault(const std::string& what, std::ptrdiff_t stage, double lambda)
      : Error(what), stage_(stage), lambda_(lambda) {}
  std::ptrdiff_t stage() const { return stage_; }
  double lambda() const { return lambda_; }

 private:
  std::ptrdiff_t stage_;
  double lambda_;
};

/// No line-search step improved the merit although the model predicted a decrease.
class LineSearchFault : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a text input, with 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, std::string section = {})
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        section_(std::move(section)) {}
  int line() const { return line_; }
  const std::string& section() const { return section_; }

 private:
  int line_;
  std::string section_;
};

/// Semantically invalid input; `location()` is `section.key`. Also a ParseError so loaders can be
/// handled uniformly.
class ValidationError : public ParseError {
 public:
  ValidationError(std::string location, const std::string& what, int line = 0)
      : ParseError(location + ": " + what, line, location.substr(0, location.rfind('.'))),
        location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace octrl
