// Copyright 2026 The pgbo Authors. All rights reserved.
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

#ifndef PGBO_ERRORS_H_
#define PGBO_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pgbo {

// Bad input to a library call (dimension mismatch, out-of-range index,
// parameter outside its admissible set).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A factorization or solve failed even after jitter escalation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The game oracle threw while being queried. `step` is the solver step at
// which the query was made.
class OracleError : public std::runtime_error {
 public:
  OracleError(int step, const std::string& what)
      : std::runtime_error("oracle failure at step " + std::to_string(step) +
                           ": " + what),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Experiment configuration could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, int line, const std::string& what)
      : std::runtime_error(Format(field, line, what)),
        field_(std::move(field)),
        line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string Format(const std::string& field, int line,
                            const std::string& what) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + what;
  }
  std::string field_;
  int line_;
};

}  // namespace pgbo

#endif  // PGBO_ERRORS_H_
