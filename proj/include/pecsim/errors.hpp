// Copyright 2026 The pecsim Authors
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

#ifndef PECSIM_ERRORS_HPP
#define PECSIM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pecsim {

/// Argument outside an operation's domain (bad label, target, length, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A noise parameter at which the mitigation coefficients blow up.
class SingularParameter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mean/variance pair that no Beta distribution can represent.
class UnrepresentableMoments : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The simulator disagrees with the multilinear forward-map model.
class ModelMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean of an empty sample.
class UndefinedMean : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pecsim

#endif
